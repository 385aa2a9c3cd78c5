"""
Two-Stage Reconstruction
cMDS on the anchor block, then trilateration of every other vertex against the
placed anchors
"""

import logging
from typing import Any, Dict, List, NamedTuple, Optional

import numpy as np

from ..cmds.embedding import cmds_embed_with_spectrum
from ..core.defaults import RECONSTRUCT_CONFIG
from ..core.errors import DegenerateConfigurationError, DimensionMismatchError
from ..core.geometry import PointCloud, SquaredDistanceMatrix, structural_loss
from ..graph.anchor_graph import AnchorGraph, LocalStrategy, build_anchor_graph
from ..monitoring.performance_monitor import PerformanceMonitor
from ..noise.gaussian import BiasMatrix, debias
from .trilateration import trilaterate_2d, trilaterate_kd, trilaterate_kd_batch

logger = logging.getLogger(__name__)

QUICK_LOCAL = RECONSTRUCT_CONFIG.get('quick_local', 'random')


class ReconstructionReport(NamedTuple):
    """Estimated cloud K in input order plus losses, stage timings and placement counters."""
    cloud: PointCloud
    loss: Optional[float]
    anchor_loss: Optional[float]
    timings: Dict[str, float]
    fallback_count: int = 0
    circle_miss_count: int = 0
    degenerate_count: int = 0
    clamped_count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "loss": self.loss,
            "anchor_loss": self.anchor_loss,
            "fallback_count": self.fallback_count,
            "circle_miss_count": self.circle_miss_count,
            "degenerate_count": self.degenerate_count,
            "clamped_count": self.clamped_count,
            "n": self.cloud.n,
            "k": self.cloud.dim,
        }


def _place_stable(
    graph: AnchorGraph, positions: np.ndarray, vertices: List[int]
) -> Dict[str, List[int]]:
    misses: List[int] = []
    degenerate: List[int] = []
    for v in vertices:
        (a_i, d_i), (a_j, d_j), (a_k, _) = graph.local_edges[v][:3]
        try:
            result = trilaterate_2d(positions[a_i], d_i, positions[a_j], d_j, positions[a_k])
        except DegenerateConfigurationError:
            degenerate.append(v)
            continue
        positions[v] = result.point
        if result.circle_miss:
            misses.append(v)
    return {"misses": misses, "degenerate": degenerate}


def _place_linear(
    graph: AnchorGraph, positions: np.ndarray, vertices: List[int], k: int
) -> List[int]:
    degenerate: List[int] = []
    batched = [v for v in vertices if len(graph.local_edges[v]) == k + 1]
    if batched:
        anchor_ids = np.array([[a for a, _ in graph.local_edges[v]] for v in batched])
        dists = np.array([[d for _, d in graph.local_edges[v]] for v in batched])
        points, flags = trilaterate_kd_batch(positions[anchor_ids], dists)
        rows = np.asarray(batched)
        positions[rows[~flags]] = points[~flags]
        degenerate.extend(int(v) for v in rows[flags])
    for v in vertices:
        if len(graph.local_edges[v]) == k + 1:
            continue
        anchor_ids = [a for a, _ in graph.local_edges[v]]
        dists = [d for _, d in graph.local_edges[v]]
        try:
            positions[v] = trilaterate_kd(positions[anchor_ids], dists)
        except DegenerateConfigurationError:
            degenerate.append(v)
    return degenerate


def reconstruct(
    graph: AnchorGraph,
    bias: Optional[BiasMatrix] = None,
    k: Optional[int] = None,
    truth: Optional[PointCloud] = None,
    monitor: Optional[PerformanceMonitor] = None,
) -> ReconstructionReport:
    """
    Reconstruct all n points of an anchor graph.

    Stage one embeds the anchors with cMDS on their (debiased) global edge lengths.
    Stage two trilaterates each remaining vertex from the placed anchors: the circle
    rule for stable planar triples, the linear system otherwise. A vertex whose
    anchors are degenerate sits at their centroid and is counted.
    """
    k = graph.k if k is None else int(k)
    if k != graph.k:
        raise DimensionMismatchError(f"graph built for k={graph.k}, asked to reconstruct in k={k}")
    if truth is not None and truth.n != graph.n:
        raise DimensionMismatchError(f"ground truth has {truth.n} points, graph has {graph.n}")
    graph.validate()
    monitor = monitor or PerformanceMonitor()
    anchors = np.asarray(graph.anchors, dtype=int)

    with monitor.stage("anchors"):
        D_anchor: SquaredDistanceMatrix = graph.anchor_sdm()
        if bias is not None:
            if bias.size != graph.n:
                raise DimensionMismatchError(f"bias of size {bias.size} for {graph.n} points")
            D_anchor = debias(D_anchor, bias.submatrix(anchors))
        embedding = cmds_embed_with_spectrum(D_anchor, k)
        positions = np.full((graph.n, k), np.nan)
        positions[anchors] = embedding.cloud.points

    with monitor.stage("trilateration"):
        stable = set(graph.stable_vertices) if k == 2 else set()
        others = graph.non_anchors()
        stable_list = [v for v in others if v in stable]
        linear_list = [v for v in others if v not in stable]
        placed = _place_stable(graph, positions, stable_list)
        degenerate = placed["degenerate"] + _place_linear(graph, positions, linear_list, k)
        for v in degenerate:
            anchor_ids = [a for a, _ in graph.local_edges[v]]
            positions[v] = positions[anchor_ids].mean(axis=0)

    if placed["misses"]:
        logger.warning(f"{len(placed['misses'])} circle pairs failed to intersect")
    if degenerate:
        logger.warning(f"{len(degenerate)} vertices had degenerate anchors; placed at anchor centroids")

    cloud = PointCloud(positions)
    loss = anchor_loss = None
    if truth is not None:
        loss = structural_loss(cloud, truth)
        anchor_loss = structural_loss(cloud.subset(anchors), truth.subset(anchors))

    timings = monitor.get_timings()
    logger.info(
        f"Reconstructed {graph.n} points ({len(anchors)} anchors) in {sum(timings.values()):.3f}s"
        + (f", loss={loss:.3e}" if loss is not None else "")
    )
    return ReconstructionReport(
        cloud=cloud,
        loss=loss,
        anchor_loss=anchor_loss,
        timings=timings,
        fallback_count=int(graph.meta.get("fallbacks", 0)),
        circle_miss_count=len(placed["misses"]),
        degenerate_count=len(degenerate),
        clamped_count=embedding.clamped_count,
    )


def quick_mds(
    D: SquaredDistanceMatrix,
    k: int,
    seed: int = 0,
    *,
    local: str = QUICK_LOCAL,
    bias: Optional[BiasMatrix] = None,
    rho: Optional[int] = None,
    truth: Optional[PointCloud] = None,
) -> ReconstructionReport:
    """
    Anchor reconstruction straight from a full observed matrix.

    ``local="random"`` joins each vertex to k+1 random anchors (redrawn when
    degenerate); ``local="nearest"`` searches for the nearest ones.
    """
    D.require_full("quick_mds")
    if local not in ("random", "nearest"):
        raise ValueError(f"unknown local edge rule '{local}'")
    strategy = LocalStrategy.RANDOM if local == "random" else LocalStrategy.NEAREST
    monitor = PerformanceMonitor()
    with monitor.stage("graph"):
        graph = build_anchor_graph(D, D, k, rho, strategy, field_mode=True, seed=seed)
    return reconstruct(graph, bias=bias, k=k, truth=truth, monitor=monitor)
