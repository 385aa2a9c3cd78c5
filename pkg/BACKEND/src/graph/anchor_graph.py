"""
Anchor Graph Construction
Farthest-sampled anchors joined pairwise by global edges, every other vertex joined
to k+1 anchors by local edges
"""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from ..core.defaults import GRAPH_CONFIG
from ..core.errors import (
    DimensionMismatchError,
    GeometryError,
    NotInteriorError,
    ObservationError,
)
from ..core.geometry import SquaredDistanceMatrix
from ..sampling.farthest import farthest_sampling
from .stable_anchors import StableTriple, select_stable_anchors_2d

logger = logging.getLogger(__name__)

DELTA_FACTOR = float(GRAPH_CONFIG.get('delta_factor', 0.5))
MAX_REDRAWS = int(GRAPH_CONFIG.get('max_redraws', 10))
AFFINE_SPREAD_TOL = float(GRAPH_CONFIG.get('affine_spread_tol', 1e-4))


class LocalStrategy(Enum):
    """How each non-anchor vertex picks the anchors it is joined to."""
    NEAREST = "nearest"
    STABLE2D = "stable2d"
    RANDOM = "random"


class CostReport(NamedTuple):
    """True edge lengths of an anchor graph, split by edge kind."""
    total_length: float
    global_length: float
    local_length: float
    edge_count: int
    max_local_edge_length: float

    def to_dict(self) -> Dict[str, Any]:
        return self._asdict()


def rho_default(n: int, k: int) -> int:
    """max(k + 2, ceil(n^(k/(2k+1)))) anchors."""
    value = n ** (k / (2.0 * k + 1.0))
    nearest = round(value)
    # exact powers such as 1024^(2/5) can land a hair above the integer
    ceiling = int(nearest) if abs(value - nearest) <= 1e-9 * max(1.0, value) else int(np.ceil(value))
    return max(k + 2, ceiling)


class AnchorGraph:
    """
    Anchor-point distance graph.

    Global edges join every pair of anchors; each non-anchor vertex keeps an ordered
    list of (anchor, observed length) local edges. For vertices placed from a stable
    triple the list starts with (r_i, r_j, r_k).
    """

    def __init__(
        self,
        n: int,
        k: int,
        anchors: Sequence[int],
        global_edges: List[Tuple[int, int, float]],
        local_edges: Dict[int, List[Tuple[int, float]]],
        stable_vertices: Optional[Sequence[int]] = None,
        meta: Optional[Dict[str, Any]] = None,
    ):
        self.n = int(n)
        self.k = int(k)
        self.anchors = [int(a) for a in anchors]
        self.global_edges = [(int(i), int(j), float(d)) for i, j, d in global_edges]
        self.local_edges = {
            int(v): [(int(a), float(d)) for a, d in edges] for v, edges in local_edges.items()
        }
        self.stable_vertices = sorted(int(v) for v in (stable_vertices or []))
        self.meta = dict(meta or {})

    def __repr__(self) -> str:
        return (
            f"AnchorGraph(n={self.n}, k={self.k}, anchors={len(self.anchors)}, "
            f"edges={self.edge_count})"
        )

    @property
    def radius(self) -> float:
        return float(self.meta.get("radius", float("nan")))

    @property
    def edge_count(self) -> int:
        return len(self.global_edges) + sum(len(edges) for edges in self.local_edges.values())

    def edges(self) -> Iterator[Tuple[int, int, float, str]]:
        for i, j, d in self.global_edges:
            yield i, j, d, "global"
        for v in sorted(self.local_edges):
            for a, d in self.local_edges[v]:
                yield v, a, d, "local"

    def edge_pairs(self) -> List[Tuple[int, int]]:
        return [(min(i, j), max(i, j)) for i, j, _, _ in self.edges()]

    def non_anchors(self) -> List[int]:
        anchor_set = set(self.anchors)
        return [v for v in range(self.n) if v not in anchor_set]

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        for i, j, d, kind in self.edges():
            graph.add_edge(i, j, length=d, kind=kind)
        return graph

    def anchor_sdm(self) -> SquaredDistanceMatrix:
        """Observed squared lengths among the anchors, in anchor order."""
        position = {a: idx for idx, a in enumerate(self.anchors)}
        size = len(self.anchors)
        entries = np.zeros((size, size))
        for i, j, d in self.global_edges:
            a, b = position[i], position[j]
            entries[a, b] = entries[b, a] = d * d
        return SquaredDistanceMatrix(entries, allow_negative=True)

    def validate(self) -> None:
        """Raise GeometryError when a structural invariant of the graph fails."""
        rho = len(self.anchors)
        if len(set(self.anchors)) != rho:
            raise GeometryError("anchor indices are not distinct")
        if rho < self.k + 2:
            raise GeometryError(f"{rho} anchors, need at least {self.k + 2}")
        if len(self.global_edges) != rho * (rho - 1) // 2:
            raise GeometryError(f"{len(self.global_edges)} global edges for {rho} anchors")
        anchor_set = set(self.anchors)
        for v in self.non_anchors():
            targets = [a for a, _ in self.local_edges.get(v, [])]
            if len(set(targets)) < self.k + 1 or not anchor_set.issuperset(targets):
                raise GeometryError(f"vertex {v} has fewer than {self.k + 1} distinct anchor edges")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "anchors": list(self.anchors),
            "edges": [
                {"i": i, "j": j, "d": d, "kind": kind} for i, j, d, kind in self.edges()
            ],
            "stable_vertices": list(self.stable_vertices),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "AnchorGraph":
        try:
            global_edges = []
            local_edges: Dict[int, List[Tuple[int, float]]] = {}
            for edge in payload["edges"]:
                i, j, d = int(edge["i"]), int(edge["j"]), float(edge["d"])
                if edge.get("kind", "global") == "global":
                    global_edges.append((i, j, d))
                else:
                    local_edges.setdefault(i, []).append((j, d))
            return cls(
                n=payload["n"],
                k=payload["k"],
                anchors=payload["anchors"],
                global_edges=global_edges,
                local_edges=local_edges,
                stable_vertices=payload.get("stable_vertices"),
                meta=payload.get("meta"),
            )
        except (KeyError, TypeError) as e:
            raise GeometryError(f"malformed anchor graph document: {e}") from e


def anchor_graph_to_json(graph: AnchorGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(graph.to_dict(), indent=2, sort_keys=True))
    logger.info(f"Saved anchor graph ({graph.edge_count} edges) to {path}")
    return path


def anchor_graph_from_json(path: Union[str, Path]) -> AnchorGraph:
    return AnchorGraph.from_dict(json.loads(Path(path).read_text()))


def _spread_of_block(block: np.ndarray) -> float:
    row_means = block.mean(axis=1)
    gram = -0.5 * (block - row_means[:, None] - row_means[None, :] + row_means.mean())
    eigenvalues = np.linalg.eigvalsh(0.5 * (gram + gram.T))[::-1]
    k = block.shape[0] - 1
    if k < 1 or eigenvalues[0] <= 0:
        return 0.0
    return float(max(eigenvalues[k - 1], 0.0) / eigenvalues[0])


def affine_spread(D: SquaredDistanceMatrix) -> float:
    """lambda_k / lambda_1 of the centered Gram of k+1 points; 0 for an affinely dependent set."""
    D.require_full("affine_spread")
    return _spread_of_block(D.entries)


def _nearest_anchors(selection: np.ndarray, v: int, anchors: np.ndarray, count: int) -> List[int]:
    order = np.argsort(selection[v, anchors], kind="stable")
    return [int(a) for a in anchors[order[:count]]]


def _random_anchors(
    selection: np.ndarray,
    v: int,
    anchors: np.ndarray,
    k: int,
    seed: int,
    max_redraws: int,
) -> Optional[List[int]]:
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(v)]))
    for _ in range(max_redraws + 1):
        draw = np.sort(anchors[rng.choice(anchors.size, size=k + 1, replace=False)])
        if _spread_of_block(selection[np.ix_(draw, draw)]) >= AFFINE_SPREAD_TOL:
            return [int(a) for a in draw]
    return None


def build_anchor_graph(
    D_true: SquaredDistanceMatrix,
    D_obs: SquaredDistanceMatrix,
    k: int,
    rho: Optional[int] = None,
    strategy: Union[LocalStrategy, str] = LocalStrategy.NEAREST,
    *,
    field_mode: bool = False,
    seed: int = 0,
    delta: Optional[float] = None,
    points: Optional[np.ndarray] = None,
    max_redraws: int = MAX_REDRAWS,
    start: int = 0,
) -> AnchorGraph:
    """
    Build the anchor graph of n points.

    Anchors and local neighbours are chosen on ``D_true`` (or on ``D_obs`` in field
    mode); edge lengths always come from ``D_obs``. RANDOM draws are seeded per
    vertex and redrawn when affinely degenerate; STABLE2D and exhausted RANDOM
    vertices fall back to the nearest anchors and are counted in ``meta``.
    """
    strategy = LocalStrategy(strategy)
    D_select = D_obs if field_mode else D_true
    D_select.require_full("anchor selection")
    n = D_select.size
    if D_obs.size != n:
        raise DimensionMismatchError(f"observed matrix of size {D_obs.size} for {n} points")
    rho = rho_default(n, k) if rho is None else int(rho)
    if rho > n:
        raise DimensionMismatchError(f"rho={rho} exceeds n={n}")
    if rho < k + 2:
        raise GeometryError(f"rho={rho} below the minimum {k + 2} for k={k}")
    if strategy is LocalStrategy.STABLE2D and k != 2:
        raise GeometryError(f"stable2d anchors need k=2, got k={k}")

    sample = farthest_sampling(D_select, rho, start)
    anchors = sample.indices
    e = sample.radius
    sorted_anchors = np.asarray(sorted(anchors), dtype=int)
    selection = D_select.entries
    observed_mask = D_obs.mask
    observed_entries = D_obs.entries

    # per-pair lookups keep construction at O(n * rho)
    def length(i: int, j: int) -> float:
        if observed_mask is not None and not observed_mask[i, j]:
            raise ObservationError(f"edge ({i}, {j}) is not observed")
        return float(np.sqrt(max(observed_entries[i, j], 0.0)))

    global_edges = [
        (anchors[a], anchors[b], length(anchors[a], anchors[b]))
        for a in range(rho) for b in range(a + 1, rho)
    ]

    if delta is None:
        delta = DELTA_FACTOR * e
    tree = cKDTree(points) if points is not None and strategy is LocalStrategy.STABLE2D else None
    anchor_set = set(anchors)
    local_edges: Dict[int, List[Tuple[int, float]]] = {}
    stable_vertices: List[int] = []
    angles: Dict[int, float] = {}
    fallbacks = 0

    for v in range(n):
        if v in anchor_set:
            continue
        targets: Optional[List[int]] = None
        if strategy is LocalStrategy.RANDOM:
            targets = _random_anchors(selection, v, sorted_anchors, k, seed, max_redraws)
        elif strategy is LocalStrategy.STABLE2D:
            try:
                triple: StableTriple = select_stable_anchors_2d(
                    v, sorted_anchors, D_select, e, delta, points=points, tree=tree
                )
                targets = [triple.r_i, triple.r_j, triple.r_k]
                stable_vertices.append(v)
                angles[v] = triple.angle
            except NotInteriorError as err:
                logger.debug(f"Falling back to nearest anchors: {err}")
        if targets is None:
            if strategy is not LocalStrategy.NEAREST:
                fallbacks += 1
            targets = _nearest_anchors(selection, v, sorted_anchors, k + 1)
        local_edges[v] = [(a, length(v, a)) for a in targets]

    if fallbacks:
        logger.warning(f"{fallbacks} vertices fell back to nearest anchors ({strategy.value})")
    if strategy is not LocalStrategy.NEAREST:
        ratio = fallbacks / max(n - rho, 1)
        logger.info(f"{strategy.value} fallback ratio {fallbacks}/{n - rho} ({ratio:.1%})")

    meta: Dict[str, Any] = {
        "radius": e,
        "rho": rho,
        "strategy": strategy.value,
        "fallbacks": fallbacks,
        "seed": int(seed),
        "field_mode": bool(field_mode),
    }
    if strategy is LocalStrategy.STABLE2D:
        meta["delta"] = float(delta)
        meta["angles"] = {str(v): angle for v, angle in angles.items()}

    graph = AnchorGraph(n, k, anchors, global_edges, local_edges, stable_vertices, meta)
    logger.info(
        f"Built anchor graph: n={n}, k={k}, rho={rho}, e={e:.4g}, "
        f"edges={graph.edge_count}, strategy={strategy.value}"
    )
    return graph


def cost_report(graph: AnchorGraph, D_true: SquaredDistanceMatrix) -> CostReport:
    """Sum the true lengths of the global and local edges."""
    entries = D_true.entries

    def true_length(i: int, j: int) -> float:
        return float(np.sqrt(max(entries[i, j], 0.0)))

    global_length = float(sum(true_length(i, j) for i, j, _ in graph.global_edges))
    local = [true_length(v, a) for v, edges in graph.local_edges.items() for a, _ in edges]
    local_length = float(sum(local))
    return CostReport(
        total_length=global_length + local_length,
        global_length=global_length,
        local_length=local_length,
        edge_count=graph.edge_count,
        max_local_edge_length=float(max(local, default=0.0)),
    )
