"""Anchor Graph Package."""

from .anchor_graph import (
    AnchorGraph,
    CostReport,
    LocalStrategy,
    affine_spread,
    anchor_graph_from_json,
    anchor_graph_to_json,
    build_anchor_graph,
    cost_report,
    rho_default,
)
from .rigidity import (
    independent_edge_count_2d,
    laman_check_2d,
    min_globally_rigid_edges,
    redundantly_rigid_2d,
    rigidity_matrix_rank,
    vertex_connectivity_at_least,
)
from .stable_anchors import StableTriple, lambda_phi, select_stable_anchors_2d, stability_phi

__all__ = [
    "AnchorGraph",
    "CostReport",
    "LocalStrategy",
    "StableTriple",
    "affine_spread",
    "anchor_graph_from_json",
    "anchor_graph_to_json",
    "build_anchor_graph",
    "cost_report",
    "independent_edge_count_2d",
    "lambda_phi",
    "laman_check_2d",
    "min_globally_rigid_edges",
    "redundantly_rigid_2d",
    "rho_default",
    "rigidity_matrix_rank",
    "select_stable_anchors_2d",
    "stability_phi",
    "vertex_connectivity_at_least",
]
