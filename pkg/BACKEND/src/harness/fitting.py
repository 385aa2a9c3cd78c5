"""Log-log slope fits for scaling experiments."""

from typing import Any, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from ..core.errors import GeometryError

MIN_FIT_SIZES = 3


class ScalingFit(NamedTuple):
    """Least-squares line through (log n, log value)."""
    slope: float
    intercept: float
    r_squared: float
    points: List[Tuple[float, float]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": [list(p) for p in self.points],
        }


def fit_scaling(sizes: Sequence[float], values: Sequence[float]) -> ScalingFit:
    if len(sizes) < MIN_FIT_SIZES:
        raise GeometryError(f"need ≥ {MIN_FIT_SIZES} sizes to fit")
    if len(sizes) != len(values):
        raise GeometryError(f"{len(sizes)} sizes for {len(values)} values")
    values = np.asarray(values, dtype=float)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise GeometryError("scaling fit needs positive finite values")
    log_n = np.log(np.asarray(sizes, dtype=float))
    log_v = np.log(values)
    result = linregress(log_n, log_v)
    r_squared = float(min(max(result.rvalue ** 2, 0.0), 1.0))
    return ScalingFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=r_squared,
        points=[(float(a), float(b)) for a, b in zip(log_n, log_v)],
    )
