"""Noise Model Package."""

from .gaussian import (
    BiasMatrix,
    NoiseSpec,
    NoiseSpecDocument,
    Perturbation,
    bias_matrix,
    debias,
    load_noise_spec,
    perturb_distances,
    perturb_with_report,
    row_stream,
)

__all__ = [
    "BiasMatrix",
    "NoiseSpec",
    "NoiseSpecDocument",
    "Perturbation",
    "bias_matrix",
    "debias",
    "load_noise_spec",
    "perturb_distances",
    "perturb_with_report",
    "row_stream",
]
