"""
Classical MDS Embedding
Double centering, top-k eigenpairs, Lambda_+ clamping and the theoretical error envelope
"""

import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import eigh

from ..core.errors import DegenerateConfigurationError, DimensionMismatchError, GeometryError
from ..core.geometry import PointCloud, ScaleParams, SquaredDistanceMatrix, gram_from_sdm
from ..noise.gaussian import BiasMatrix
from .spectral import fix_signs, spectral_norm

logger = logging.getLogger(__name__)


class Embedding(NamedTuple):
    """cMDS output with the top-k spectrum it came from."""
    cloud: PointCloud
    eigenvalues: np.ndarray
    clamped_count: int

    @property
    def clamped(self) -> bool:
        return self.clamped_count > 0


def cmds_embed_with_spectrum(D: SquaredDistanceMatrix, k: int) -> Embedding:
    """Run cMDS and keep the top-k eigenvalues along with the embedded cloud."""
    D.require_full("cmds_embed")
    n = D.size
    if k < 1 or k > n:
        raise DimensionMismatchError(f"cannot embed {n} points in dimension {k}")

    G = gram_from_sdm(D)
    eigenvalues, eigenvectors = eigh(G, subset_by_index=[n - k, n - 1])
    eigenvalues = eigenvalues[::-1]
    eigenvectors = fix_signs(eigenvectors[:, ::-1])

    negative = eigenvalues < 0
    clamped_count = int(np.count_nonzero(negative))
    if clamped_count:
        logger.warning(f"Clamped {clamped_count} negative eigenvalue(s) among the top {k}")
    scales = np.sqrt(np.where(negative, 0.0, eigenvalues))
    return Embedding(
        cloud=PointCloud(eigenvectors * scales),
        eigenvalues=eigenvalues,
        clamped_count=clamped_count,
    )


def cmds_embed(D: SquaredDistanceMatrix, k: int) -> PointCloud:
    """Classical MDS: K = sqrt(Lambda_+) U over the top-k eigenpairs of -1/2 H D H."""
    return cmds_embed_with_spectrum(D, k).cloud


def theory_error_envelope(
    Pi: ScaleParams,
    sigma_M: float,
    r: float,
    k: int,
    n: int,
    zeta: float,
    constant: float = 1.0,
) -> float:
    """Envelope (sigma_M r k / n^zeta) * sqrt(1/(4 j^2) + 8 h / g^2), scaled by ``constant``."""
    if Pi.degenerate or Pi.j_val <= 0 or Pi.g_val <= 0:
        raise DegenerateConfigurationError(
            f"envelope needs j > 0 and g > 0, got j={Pi.j_val:.3g}, g={Pi.g_val:.3g}"
        )
    if not 0 < zeta < 0.5:
        raise GeometryError(f"zeta must lie in (0, 1/2), got {zeta}")
    if sigma_M == 0:
        return 0.0
    root = np.sqrt(1.0 / (4.0 * Pi.j_val ** 2) + 8.0 * Pi.h_val / Pi.g_val ** 2)
    return float(constant * sigma_M * r * k / n ** zeta * root)


def noise_norm(
    D: SquaredDistanceMatrix,
    Dt: SquaredDistanceMatrix,
    bias: Optional[BiasMatrix] = None,
    method: Optional[str] = None,
) -> float:
    """Spectral norm of Dt - D - Sigma, the centered noise of a perturbed SDM."""
    if D.size != Dt.size:
        raise DimensionMismatchError(f"matrices of size {D.size} and {Dt.size}")
    delta = Dt.entries - D.entries
    if bias is not None:
        delta = delta - bias.entries
    return spectral_norm(delta, method)
