"""Exception hierarchy for geometric and numeric failures."""


class GeometryError(ValueError):
    """Base class for every error raised by the reconstruction stack."""


class ObservationError(GeometryError):
    """An operation needs observed pairs that the input matrix does not have."""


class DimensionMismatchError(GeometryError):
    """Sizes or dimensions of the inputs disagree."""


class DegenerateConfigurationError(GeometryError):
    """Points, anchors or spectra are too degenerate for the requested operation."""


class NotInteriorError(DegenerateConfigurationError):
    """A vertex has no stable anchor configuration around it."""


class ConvergenceError(GeometryError):
    """An iterative solver hit its iteration cap."""


class InvariantViolation(GeometryError):
    """A structural invariant of a graph or report does not hold."""
