"""Core Geometry Package."""

from .errors import (
    ConvergenceError,
    DegenerateConfigurationError,
    DimensionMismatchError,
    GeometryError,
    InvariantViolation,
    NotInteriorError,
    ObservationError,
)
from .geometry import (
    Alignment,
    PointCloud,
    ScaleParams,
    SquaredDistanceMatrix,
    gram_from_sdm,
    pairwise_sq,
    scale_params,
    squared_distance_matrix,
    structural_loss,
)

__all__ = [
    "Alignment",
    "ConvergenceError",
    "DegenerateConfigurationError",
    "DimensionMismatchError",
    "GeometryError",
    "InvariantViolation",
    "NotInteriorError",
    "ObservationError",
    "PointCloud",
    "ScaleParams",
    "SquaredDistanceMatrix",
    "gram_from_sdm",
    "pairwise_sq",
    "scale_params",
    "squared_distance_matrix",
    "structural_loss",
]
