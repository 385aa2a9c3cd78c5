"""Placing a point from its distances to known anchors."""

import logging
from typing import NamedTuple, Tuple

import numpy as np

from ..core.defaults import RECONSTRUCT_CONFIG
from ..core.errors import DegenerateConfigurationError, DimensionMismatchError

logger = logging.getLogger(__name__)

KD_DEGENERATE_TOL = float(RECONSTRUCT_CONFIG.get('kd_degenerate_tol', 1e-10))
COINCIDENT_TOL = 1e-12


class Trilateration(NamedTuple):
    point: np.ndarray
    circle_miss: bool


def _line_residual(s: float, L: float, d_i: float, d_j: float) -> float:
    return (abs(s) - d_i) ** 2 + (abs(L - s) - d_j) ** 2


def trilaterate_2d(r_i, d_i: float, r_j, d_j: float, r_k) -> Trilateration:
    """
    Intersect circles (r_i, d_i) and (r_j, d_j) and keep the intersection closer to r_k.

    When r_k lies on the line r_i r_j both candidates are equally close and their
    midpoint is returned. Circles that miss each other give the point on that line
    minimizing the summed squared circle residuals, with ``circle_miss`` set.
    """
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    r_k = np.asarray(r_k, dtype=float)
    axis = r_j - r_i
    L = float(np.hypot(axis[0], axis[1]))
    if L <= COINCIDENT_TOL * max(1.0, float(np.abs(r_i).max())):
        raise DegenerateConfigurationError("trilateration centers coincide")
    u = axis / L
    normal = np.array([-u[1], u[0]])

    a = (d_i * d_i - d_j * d_j + L * L) / (2.0 * L)
    h_sq = d_i * d_i - a * a
    if h_sq < 0:
        candidates = (
            min(max((L + d_i - d_j) / 2.0, 0.0), L),
            max((d_i + L + d_j) / 2.0, L),
            min((L - d_i - d_j) / 2.0, 0.0),
        )
        s = min(candidates, key=lambda value: _line_residual(value, L, d_i, d_j))
        return Trilateration(r_i + s * u, True)

    base = r_i + a * u
    side = float(normal @ (r_k - r_i))
    if side == 0.0:
        return Trilateration(base, False)
    h = np.sqrt(h_sq)
    return Trilateration(base + np.sign(side) * h * normal, False)


def _linear_system(anchors: np.ndarray, dists: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # subtracting sphere 0 from the others leaves 2 (a_m - a_0) . x = b_m
    first = anchors[..., :1, :]
    A = 2.0 * (anchors[..., 1:, :] - first)
    sq_norms = (anchors ** 2).sum(axis=-1)
    d_sq = dists ** 2
    b = sq_norms[..., 1:] - sq_norms[..., :1] - d_sq[..., 1:] + d_sq[..., :1]
    return A, b


def _degenerate(A: np.ndarray, tol: float) -> np.ndarray:
    singular = np.linalg.svd(A, compute_uv=False)
    top = singular[..., 0]
    k = A.shape[-1]
    smallest = singular[..., k - 1] if singular.shape[-1] >= k else np.zeros_like(top)
    return (top <= 0) | (smallest <= tol * top)


def trilaterate_kd(anchors, dists, tol: float = KD_DEGENERATE_TOL) -> np.ndarray:
    """Least-squares position from the distances to k+1 (or more) anchors in R^k."""
    anchors = np.asarray(anchors, dtype=float)
    dists = np.asarray(dists, dtype=float)
    if anchors.ndim != 2 or anchors.shape[0] != dists.shape[0]:
        raise DimensionMismatchError(f"{anchors.shape[0]} anchors for {dists.shape[0]} distances")
    if anchors.shape[0] < anchors.shape[1] + 1:
        raise DimensionMismatchError(f"{anchors.shape[0]} anchors cannot fix a point in R^{anchors.shape[1]}")
    A, b = _linear_system(anchors, dists)
    if _degenerate(A, tol):
        raise DegenerateConfigurationError("anchors are affinely dependent")
    solution, *_ = np.linalg.lstsq(A, b, rcond=None)
    return solution


def trilaterate_kd_batch(
    anchors: np.ndarray, dists: np.ndarray, tol: float = KD_DEGENERATE_TOL
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve m trilateration problems with k+1 anchors each.

    Args:
        anchors: array of shape (m, k+1, k)
        dists: array of shape (m, k+1)

    Returns:
        (points of shape (m, k), boolean mask of degenerate rows whose points are NaN)
    """
    anchors = np.asarray(anchors, dtype=float)
    dists = np.asarray(dists, dtype=float)
    m, count, k = anchors.shape
    if count != k + 1:
        raise DimensionMismatchError(f"batched trilateration needs {k + 1} anchors, got {count}")
    points = np.full((m, k), np.nan)
    if m == 0:
        return points, np.zeros(0, dtype=bool)
    A, b = _linear_system(anchors, dists)
    degenerate = _degenerate(A, tol)
    good = ~degenerate
    if good.any():
        points[good] = np.linalg.solve(A[good], b[good][..., None])[..., 0]
    return points, degenerate
