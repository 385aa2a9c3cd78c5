"""Config-backed defaults shared by the packages."""

import logging

logger = logging.getLogger(__name__)

try:
    from config import (
        NUMERICS_CONFIG,
        EIGEN_CONFIG,
        NOISE_CONFIG,
        SAMPLING_CONFIG,
        GRAPH_CONFIG,
        RECONSTRUCT_CONFIG,
        HARNESS_CONFIG,
        LOGGING_CONFIG,
    )
except Exception as e:
    logger.warning(f"Config module unavailable or failed to load ({e}); using defaults")
    NUMERICS_CONFIG = {}
    EIGEN_CONFIG = {}
    NOISE_CONFIG = {}
    SAMPLING_CONFIG = {}
    GRAPH_CONFIG = {}
    RECONSTRUCT_CONFIG = {}
    HARNESS_CONFIG = {}
    LOGGING_CONFIG = {}

IDENTITY_TOL = float(NUMERICS_CONFIG.get('identity_tol', 1e-10))
PIPELINE_TOL = float(NUMERICS_CONFIG.get('pipeline_tol', 1e-8))
SYMMETRY_TOL = float(NUMERICS_CONFIG.get('symmetry_tol', 1e-8))
DEGENERATE_REL_TOL = float(NUMERICS_CONFIG.get('degenerate_rel_tol', 1e-9))
