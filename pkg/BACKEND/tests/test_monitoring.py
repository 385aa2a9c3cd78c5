"""Unit Tests - stage timings, resource snapshots and invariant checks."""

import pytest
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import GeometryError, PointCloud, squared_distance_matrix
from src.graph import build_anchor_graph
from src.monitoring import PerformanceMonitor, default_worker_count, resource_snapshot
from src.monitoring.checks import CheckLevel, InvariantSuite


def _graph(n: int = 150, seed: int = 0):
    rng = np.random.default_rng(seed)
    cloud = PointCloud(rng.uniform(-1, 1, size=(n, 2)))
    D = squared_distance_matrix(cloud)
    return build_anchor_graph(D, D, 2), cloud


class TestPerformanceMonitor:
    """Test stage timing."""

    def test_stage_records_time(self):
        monitor = PerformanceMonitor()
        with monitor.stage("sleep"):
            time.sleep(0.01)
        assert monitor.get_timings()["sleep"] >= 0.005

    def test_stages_accumulate(self):
        monitor = PerformanceMonitor()
        for _ in range(3):
            with monitor.stage("loop"):
                pass
        assert len(monitor.get_history()) == 3
        assert monitor.total() == pytest.approx(monitor.get_timings()["loop"])

    def test_stage_recorded_on_error(self):
        monitor = PerformanceMonitor()
        with pytest.raises(RuntimeError):
            with monitor.stage("broken"):
                raise RuntimeError("boom")
        assert "broken" in monitor.get_timings()

    def test_summary(self):
        summary = PerformanceMonitor().summary()
        assert summary["total_seconds"] == 0.0
        assert "timestamp" in summary["resources"]


class TestResources:
    """Test resource snapshots."""

    def test_snapshot_keys(self):
        snapshot = resource_snapshot()
        assert "timestamp" in snapshot
        assert "cpu_count_logical" in snapshot

    def test_worker_count(self):
        assert default_worker_count() >= 1


class TestInvariantSuite:
    """Test invariant checks on built and damaged graphs."""

    def test_built_graph_passes(self):
        graph, cloud = _graph()
        suite = InvariantSuite(graph, cloud)
        names = [check.name for check in suite.run()]
        assert suite.passed
        assert names == ["structure", "edge_count", "linear_budget", "eps_net", "vertex_connectivity", "laman_2d"]

    def test_without_points(self):
        graph, _ = _graph(80)
        suite = InvariantSuite(graph)
        suite.run()
        eps = next(c for c in suite.checks if c.name == "eps_net")
        assert eps.level is CheckLevel.INFO
        assert suite.passed

    def test_missing_local_edges(self):
        graph, _ = _graph(80)
        graph.local_edges.pop(graph.non_anchors()[0])
        suite = InvariantSuite(graph)
        checks = suite.run()
        assert not suite.passed
        assert [c.name for c in checks] == ["structure"]

    def test_extra_edge_breaks_count(self):
        graph, _ = _graph(80)
        v = graph.non_anchors()[0]
        graph.local_edges[v].append(graph.local_edges[v][0])
        suite = InvariantSuite(graph)
        suite.run()
        assert not suite.passed
        assert not next(c for c in suite.checks if c.name == "edge_count").passed

    def test_shrunken_radius_breaks_cover(self):
        graph, cloud = _graph(80)
        graph.meta["radius"] = 1e-6
        suite = InvariantSuite(graph, cloud)
        suite.run()
        assert not suite.passed

    def test_point_count_mismatch(self):
        graph, cloud = _graph(80)
        with pytest.raises(GeometryError):
            InvariantSuite(graph, cloud.subset(range(10)))

    def test_report_dict(self):
        graph, cloud = _graph(80)
        suite = InvariantSuite(graph, cloud)
        suite.run()
        report = suite.to_dict()
        assert report["passed"] is True
        assert all(check["level"] in ("info", "warning", "critical") for check in report["checks"])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
