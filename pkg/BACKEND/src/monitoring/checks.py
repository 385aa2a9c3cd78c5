"""Invariant checks run against a built anchor graph."""

import logging
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional

from ..core.errors import GeometryError
from ..core.geometry import PointCloud
from ..graph.anchor_graph import AnchorGraph
from ..graph.rigidity import laman_check_2d, vertex_connectivity_at_least
from ..sampling.nets import is_eps_cover, is_eps_sparse

logger = logging.getLogger(__name__)


class CheckLevel(Enum):
    """Severity of a failed check."""
    INFO = "info"
    WARNING = "warning"
    CRITICAL = "critical"


class Check(NamedTuple):
    """Outcome of a single invariant check."""
    name: str
    level: CheckLevel
    passed: bool
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "level": self.level.value,
            "passed": self.passed,
            "message": self.message,
        }


class InvariantSuite:
    """
    Structural, edge-budget, epsilon-net, connectivity and rigidity checks.

    Only CRITICAL checks decide ``passed``; the others are reported.
    """

    def __init__(self, graph: AnchorGraph, points: Optional[PointCloud] = None):
        if points is not None and points.n != graph.n:
            raise GeometryError(f"{points.n} points for a graph on {graph.n} vertices")
        self.graph = graph
        self.points = points
        self.checks: List[Check] = []

    def _record(self, name: str, level: CheckLevel, passed: bool, message: str) -> None:
        check = Check(name, level, bool(passed), message)
        self.checks.append(check)
        if not check.passed:
            log = logger.error if level is CheckLevel.CRITICAL else logger.warning
            log(f"Check '{name}' failed: {message}")

    def check_structure(self) -> None:
        try:
            self.graph.validate()
            self._record("structure", CheckLevel.CRITICAL, True, "anchor graph well formed")
        except GeometryError as e:
            self._record("structure", CheckLevel.CRITICAL, False, str(e))

    def check_edge_count(self) -> None:
        g = self.graph
        rho = len(g.anchors)
        expected = rho * (rho - 1) // 2 + (g.k + 1) * (g.n - rho)
        self._record(
            "edge_count", CheckLevel.CRITICAL, g.edge_count == expected,
            f"{g.edge_count} edges, expected {expected}",
        )
        if g.k == 2 and g.n >= 100:
            self._record(
                "linear_budget", CheckLevel.WARNING, g.edge_count <= 6 * g.n,
                f"{g.edge_count} edges for n={g.n} (limit {6 * g.n})",
            )

    def check_eps_net(self) -> None:
        if self.points is None:
            self._record("eps_net", CheckLevel.INFO, True, "skipped: no coordinates")
            return
        e = self.graph.radius
        anchors = self.points.subset(self.graph.anchors)
        sparse = is_eps_sparse(anchors, e)
        cover = is_eps_cover(self.points, anchors, e)
        self._record(
            "eps_net", CheckLevel.CRITICAL, sparse and cover,
            f"radius {e:.6g}: sparse={sparse}, cover={cover}",
        )

    def check_connectivity(self) -> None:
        t = self.graph.k + 1
        self._record(
            "vertex_connectivity", CheckLevel.CRITICAL,
            vertex_connectivity_at_least(self.graph, t),
            f"at least {t}-vertex-connected",
        )

    def check_rigidity(self) -> None:
        if self.graph.k != 2:
            self._record("laman_2d", CheckLevel.INFO, True, "skipped: k != 2")
            return
        self._record("laman_2d", CheckLevel.CRITICAL, laman_check_2d(self.graph), "generically rigid in the plane")

    def run(self) -> List[Check]:
        self.checks = []
        self.check_structure()
        if self.checks[-1].passed:
            self.check_edge_count()
            self.check_eps_net()
            self.check_connectivity()
            self.check_rigidity()
        return list(self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.level is CheckLevel.CRITICAL)

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}
