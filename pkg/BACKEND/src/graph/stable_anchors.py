"""Near-perpendicular anchor triples for planar trilateration."""

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from ..core.defaults import SAMPLING_CONFIG
from ..core.errors import GeometryError, NotInteriorError
from ..core.geometry import SquaredDistanceMatrix
from ..sampling.nets import interior_against_tree

logger = logging.getLogger(__name__)

SIDE_TOL = 1e-12


class StableTriple(NamedTuple):
    """Anchors r_i (nearest), r_j (most perpendicular at p) and the side witness r_k."""
    r_i: int
    r_j: int
    r_k: int
    angle: float


def stability_phi(eps0: float, eps1: float, delta: float) -> float:
    """Half-width phi of the admissible angle window, cos(phi) = eps0 / (4 (eps1 + delta))."""
    if eps0 <= 0 or eps1 + delta <= 0:
        raise GeometryError("stability window needs positive radii")
    return float(np.arccos(min(1.0, eps0 / (4.0 * (eps1 + delta)))))


def lambda_phi(eps0: float, eps1: float, delta: float) -> float:
    """Trilateration sensitivity constant 1 / cos(phi) = 4 (eps1 + delta) / eps0."""
    return float(1.0 / np.cos(stability_phi(eps0, eps1, delta)))


def _angles_at(d_pa: np.ndarray, d_pb: float, d_ab_sq: np.ndarray) -> np.ndarray:
    cos = (d_pa ** 2 + d_pb ** 2 - d_ab_sq) / (2.0 * d_pa * d_pb)
    return np.arccos(np.clip(cos, -1.0, 1.0))


def _side_heights(
    D: np.ndarray, p: int, r_i: int, r_j: int, candidates: np.ndarray
) -> np.ndarray:
    """Signed distance of each candidate from line r_i r_j, positive on p's side.

    Uses a local frame with r_i at the origin and r_j on the positive x axis, built
    from distances alone; the mirror ambiguity of each candidate is settled by its
    distance to p.
    """
    d_ij = np.sqrt(D[r_i, r_j])
    x_p = (D[r_i, p] - D[r_j, p] + D[r_i, r_j]) / (2.0 * d_ij)
    y_p = np.sqrt(max(D[r_i, p] - x_p * x_p, 0.0))

    x_a = (D[r_i, candidates] - D[r_j, candidates] + D[r_i, r_j]) / (2.0 * d_ij)
    y_a = np.sqrt(np.clip(D[r_i, candidates] - x_a * x_a, 0.0, None))
    same = (x_a - x_p) ** 2 + (y_a - y_p) ** 2
    mirrored = (x_a - x_p) ** 2 + (y_a + y_p) ** 2
    observed = D[p, candidates]
    on_p_side = np.abs(same - observed) <= np.abs(mirrored - observed)
    return np.where(on_p_side, y_a, -y_a)


def select_stable_anchors_2d(
    p: int,
    anchors: Sequence[int],
    D: SquaredDistanceMatrix,
    e: float,
    delta: float,
    points: Optional[np.ndarray] = None,
    tree: Optional[cKDTree] = None,
    grid_step: Optional[float] = None,
) -> StableTriple:
    """
    Choose (r_i, r_j, r_k) for vertex p from the anchors within 2e + delta.

    r_i is the nearest anchor and r_j the one whose angle r_i p r_j is closest to a
    right angle; the pair is rejected when that angle leaves [pi/2 - phi, pi/2 + phi].
    r_k is the anchor on p's side of line r_i r_j farthest from it. When point
    coordinates are supplied the interiority test runs first.

    Raises:
        NotInteriorError: p is not interior or no admissible triple exists
    """
    entries = D.entries
    anchors = np.asarray(sorted(int(a) for a in anchors), dtype=int)

    if points is not None:
        tree = tree if tree is not None else cKDTree(points)
        step = grid_step if grid_step is not None else delta * float(SAMPLING_CONFIG.get('grid_step_factor', 0.25))
        if not interior_against_tree(np.asarray(points[p], dtype=float), tree, e, delta, step):
            raise NotInteriorError(f"vertex {p} is not interior at radius {e:.4g}")

    d = np.sqrt(np.clip(entries[p, anchors], 0.0, None))
    in_ball = (d <= 2.0 * e + delta) & (d > 0) & (anchors != p)
    ball = anchors[in_ball]
    d_ball = d[in_ball]
    if ball.size < 3:
        raise NotInteriorError(f"vertex {p} has {ball.size} anchors within {2.0 * e + delta:.4g}")

    first = int(np.argmin(d_ball))
    r_i = int(ball[first])
    others = np.delete(np.arange(ball.size), first)
    angles = _angles_at(d_ball[others], d_ball[first], entries[r_i, ball[others]])
    best = int(np.argmin(np.abs(angles - np.pi / 2.0)))
    r_j = int(ball[others[best]])
    angle = float(angles[best])

    phi = stability_phi(e, e, delta)
    if abs(angle - np.pi / 2.0) > phi:
        raise NotInteriorError(
            f"vertex {p}: best anchor angle {np.degrees(angle):.1f} deg outside the stability window"
        )

    witnesses = ball[(ball != r_i) & (ball != r_j)]
    heights = _side_heights(entries, p, r_i, r_j, witnesses)
    top = int(np.argmax(heights))
    if heights[top] <= SIDE_TOL * max(1.0, e):
        raise NotInteriorError(f"vertex {p}: no side witness for anchors ({r_i}, {r_j})")
    return StableTriple(r_i=r_i, r_j=r_j, r_k=int(witnesses[top]), angle=angle)
