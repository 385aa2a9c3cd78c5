"""Classical MDS Package."""

from .embedding import (
    Embedding,
    cmds_embed,
    cmds_embed_with_spectrum,
    noise_norm,
    theory_error_envelope,
)
from .spectral import (
    PerturbationReport,
    SpectralDecomposition,
    SpectralDiagnostics,
    eigen_perturbation_report,
    gershgorin_bound,
    jacobi_eig,
    spectral_diagnostics,
    spectral_norm,
    symmetric_eig,
)

__all__ = [
    "Embedding",
    "PerturbationReport",
    "SpectralDecomposition",
    "SpectralDiagnostics",
    "cmds_embed",
    "cmds_embed_with_spectrum",
    "eigen_perturbation_report",
    "gershgorin_bound",
    "jacobi_eig",
    "noise_norm",
    "spectral_diagnostics",
    "spectral_norm",
    "symmetric_eig",
    "theory_error_envelope",
]
