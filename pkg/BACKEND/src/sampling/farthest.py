"""Greedy farthest-point sampling over a squared distance matrix."""

import logging
from typing import Any, Dict, List, NamedTuple, Sequence

import numpy as np

from ..core.defaults import SAMPLING_CONFIG
from ..core.errors import DimensionMismatchError, GeometryError
from ..core.geometry import SquaredDistanceMatrix

logger = logging.getLogger(__name__)

DEFAULT_START = int(SAMPLING_CONFIG.get('default_start', 0))


class SampleResult(NamedTuple):
    """Chosen indices in selection order and the radius e of the last pick."""
    indices: List[int]
    radius: float

    def to_dict(self) -> Dict[str, Any]:
        return {"indices": list(self.indices), "radius": self.radius}


def farthest_sampling(D: SquaredDistanceMatrix, m: int, start: int = DEFAULT_START) -> SampleResult:
    """
    Pick ``m`` points by repeatedly taking the one farthest from those already chosen.

    The first pick is ``start``; later ties go to the smallest index. The returned
    radius is the distance the last pick had to the earlier ones, so the chosen set
    is an e-net of the whole cloud. With m = 1 the radius is the covering radius
    of ``start`` alone.
    """
    D.require_full("farthest_sampling")
    n = D.size
    if not 1 <= m <= n:
        raise DimensionMismatchError(f"cannot sample {m} of {n} points")
    if not 0 <= start < n:
        raise GeometryError(f"start index {start} out of range for {n} points")

    entries = D.entries

    def row(i: int) -> np.ndarray:
        return np.sqrt(np.clip(entries[i], 0.0, None))

    # one row per pick, O(n * m) overall
    chosen = np.zeros(n, dtype=bool)
    chosen[start] = True
    indices = [int(start)]
    d = row(start)

    if m == 1:
        return SampleResult(indices, float(d.max()))

    radius = float("inf")
    for _ in range(m - 1):
        candidates = np.where(chosen, -np.inf, d)
        pick = int(np.argmax(candidates))
        radius = float(d[pick])
        indices.append(pick)
        chosen[pick] = True
        np.minimum(d, row(pick), out=d)

    logger.debug(f"Farthest sampling chose {m} of {n} points, radius {radius:.4g}")
    return SampleResult(indices, radius)


def anchors_within(
    D: SquaredDistanceMatrix, p: int, anchors: Sequence[int], radius: float
) -> List[int]:
    """Anchors whose distance to point p is at most ``radius``."""
    anchors = np.asarray(anchors, dtype=int)
    d = np.sqrt(np.clip(D.entries[p, anchors], 0.0, None))
    return [int(a) for a in anchors[d <= radius]]


def eps_net_radius_bound(diameter: float, m: int, k: int) -> float:
    """Packing bound 2 D / (m^(1/k) - 1) on the radius of an m-point net of a set of diameter D."""
    if m <= 1:
        return float("inf")
    return float(2.0 * diameter / (m ** (1.0 / k) - 1.0))
