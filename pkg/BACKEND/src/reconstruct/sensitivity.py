"""Finite-difference sensitivities of planar trilateration."""

import logging
from typing import Any, Callable, Dict, NamedTuple

import numpy as np

from ..core.errors import DegenerateConfigurationError, GeometryError
from .trilateration import trilaterate_2d

logger = logging.getLogger(__name__)


class SensitivityReport(NamedTuple):
    """Operator-norm estimates of the Jacobian of the placed point w.r.t. each input."""
    d_i: float
    d_j: float
    r_i: float
    r_j: float
    r_k: float
    reference: float
    angle: float

    def max_sensitivity(self) -> float:
        return max(self.d_i, self.d_j, self.r_i, self.r_j)

    def to_dict(self) -> Dict[str, Any]:
        return self._asdict()


def _scalar_derivative(f: Callable[[float], np.ndarray], step: float) -> float:
    return float(np.linalg.norm((f(step) - f(-step)) / (2.0 * step)))


def _point_jacobian(f: Callable[[np.ndarray], np.ndarray], dim: int, step: float) -> float:
    columns = []
    for axis in range(dim):
        shift = np.zeros(dim)
        shift[axis] = step
        columns.append((f(shift) - f(-shift)) / (2.0 * step))
    return float(np.linalg.norm(np.column_stack(columns), 2))


def sensitivity_probe(r_i, d_i: float, r_j, d_j: float, r_k, step: float = 1e-6) -> SensitivityReport:
    """
    Central differences of the trilaterated point in d_i, d_j, r_i, r_j and r_k.

    The analytic reference is 1 / sin(alpha) with alpha the angle r_i p r_j at the
    placed point p.
    """
    if step <= 0:
        raise GeometryError(f"finite-difference step must be positive, got {step}")
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    r_k = np.asarray(r_k, dtype=float)

    base = trilaterate_2d(r_i, d_i, r_j, d_j, r_k)
    if base.circle_miss:
        raise DegenerateConfigurationError("sensitivity needs intersecting circles")
    p = base.point
    u_i = (r_i - p) / np.linalg.norm(r_i - p)
    u_j = (r_j - p) / np.linalg.norm(r_j - p)
    angle = float(np.arccos(np.clip(u_i @ u_j, -1.0, 1.0)))
    if np.sin(angle) <= 0:
        raise DegenerateConfigurationError("circles are tangent; sensitivity is unbounded")

    def place(ri=r_i, di=d_i, rj=r_j, dj=d_j, rk=r_k) -> np.ndarray:
        return trilaterate_2d(ri, di, rj, dj, rk).point

    return SensitivityReport(
        d_i=_scalar_derivative(lambda h: place(di=d_i + h), step),
        d_j=_scalar_derivative(lambda h: place(dj=d_j + h), step),
        r_i=_point_jacobian(lambda s: place(ri=r_i + s), 2, step),
        r_j=_point_jacobian(lambda s: place(rj=r_j + s), 2, step),
        r_k=_point_jacobian(lambda s: place(rk=r_k + s), 2, step),
        reference=float(1.0 / np.sin(angle)),
        angle=angle,
    )
