"""Epsilon-net predicates and the planar interiority test."""

import logging
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from ..core.defaults import SAMPLING_CONFIG
from ..core.errors import DimensionMismatchError, GeometryError
from ..core.geometry import PointCloud, pairwise_sq

logger = logging.getLogger(__name__)

GRID_STEP_FACTOR = float(SAMPLING_CONFIG.get('grid_step_factor', 0.25))


def is_eps_sparse(Y: PointCloud, eps: float) -> bool:
    """True iff every pair of distinct points of Y is at least eps apart."""
    if Y.n < 2:
        return True
    d = np.sqrt(pairwise_sq(Y.points, Y.points))
    upper = np.triu_indices(Y.n, k=1)
    return bool(np.all(d[upper] >= eps))


def is_eps_cover(X: PointCloud, Y: PointCloud, eps: float) -> bool:
    """True iff every point of X lies within eps of some point of Y."""
    if X.dim != Y.dim:
        raise DimensionMismatchError(f"clouds of dimension {X.dim} and {Y.dim}")
    nearest = np.sqrt(pairwise_sq(X.points, Y.points).min(axis=1))
    return bool(np.all(nearest <= eps))


def disk_grid(center: np.ndarray, radius: float, step: float) -> np.ndarray:
    """Square-grid nodes of spacing ``step`` (aligned on ``center``) inside the closed disk."""
    half = int(np.ceil(radius / step))
    offsets = step * np.arange(-half, half + 1)
    gx, gy = np.meshgrid(offsets, offsets, indexing="ij")
    grid = np.column_stack([gx.ravel(), gy.ravel()])
    inside = (grid ** 2).sum(axis=1) <= radius * radius
    return grid[inside] + center


def interior_against_tree(
    p: np.ndarray, tree: cKDTree, eps: float, delta: float, grid_step: float
) -> bool:
    grid = disk_grid(p, eps + delta, grid_step)
    nearest, _ = tree.query(grid, k=1)
    return bool(np.all(nearest <= delta + grid_step * np.sqrt(2.0) / 2.0))


def interiority_2d(
    p, P: PointCloud, eps: float, delta: float, grid_step: Optional[float] = None
) -> bool:
    """
    Whether P is a delta-cover of the disk B(p, eps + delta).

    The disk is discretized with a square grid; a node counts as covered when some
    point of P lies within delta plus half a grid diagonal, so a genuine cover is
    never rejected.
    """
    if P.dim != 2:
        raise DimensionMismatchError(f"interiority is defined for planar clouds, got dim {P.dim}")
    if grid_step is None:
        grid_step = delta * GRID_STEP_FACTOR
    if grid_step <= 0:
        raise GeometryError(f"grid step must be positive, got {grid_step}")
    p = np.asarray(p, dtype=float).reshape(2)
    return interior_against_tree(p, cKDTree(P.points), eps, delta, grid_step)
