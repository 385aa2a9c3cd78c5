"""Reconstruction Package."""

from .pipeline import ReconstructionReport, quick_mds, reconstruct
from .sensitivity import SensitivityReport, sensitivity_probe
from .trilateration import Trilateration, trilaterate_2d, trilaterate_kd, trilaterate_kd_batch

__all__ = [
    "ReconstructionReport",
    "SensitivityReport",
    "Trilateration",
    "quick_mds",
    "reconstruct",
    "sensitivity_probe",
    "trilaterate_2d",
    "trilaterate_kd",
    "trilaterate_kd_batch",
]
