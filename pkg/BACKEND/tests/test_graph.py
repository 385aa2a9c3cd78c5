"""Unit Tests - anchor graphs, stable anchor triples and rigidity validators."""

import itertools
import logging
import pytest
import sys
from pathlib import Path

import networkx as nx
import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import (
    DimensionMismatchError,
    GeometryError,
    NotInteriorError,
    ObservationError,
    PointCloud,
    SquaredDistanceMatrix,
    squared_distance_matrix,
)
from src.graph import (
    AnchorGraph,
    LocalStrategy,
    affine_spread,
    anchor_graph_from_json,
    anchor_graph_to_json,
    build_anchor_graph,
    cost_report,
    independent_edge_count_2d,
    lambda_phi,
    laman_check_2d,
    min_globally_rigid_edges,
    redundantly_rigid_2d,
    rho_default,
    rigidity_matrix_rank,
    select_stable_anchors_2d,
    stability_phi,
    vertex_connectivity_at_least,
)


def _disk(n: int, seed: int = 0) -> PointCloud:
    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(0, 1, n))
    theta = rng.uniform(0, 2 * np.pi, n)
    return PointCloud(np.column_stack([radii * np.cos(theta), radii * np.sin(theta)]))


def _polar(degrees, radii) -> np.ndarray:
    theta = np.radians(np.asarray(degrees, dtype=float))
    radii = np.asarray(radii, dtype=float)
    return np.column_stack([radii * np.cos(theta), radii * np.sin(theta)])


class TestRhoDefault:
    """Test the default anchor count."""

    def test_large_n(self):
        assert rho_default(10 ** 4, 2) == 40

    def test_floor(self):
        assert rho_default(5, 2) == 4

    def test_one_dimension(self):
        assert rho_default(32, 1) == 4

    def test_exact_power(self):
        # 1024^(2/5) is exactly 16 and must not round up
        assert rho_default(1024, 2) == 16


class TestBuildAnchorGraph:
    """Test anchor graph construction."""

    def test_edge_count(self):
        D = squared_distance_matrix(_disk(100))
        graph = build_anchor_graph(D, D, 2, rho=10)
        assert graph.edge_count == 45 + 3 * 90
        graph.validate()

    def test_default_rho_edge_budget(self):
        n = 400
        D = squared_distance_matrix(_disk(n, 1))
        graph = build_anchor_graph(D, D, 2)
        rho = rho_default(n, 2)
        assert len(graph.anchors) == rho
        assert graph.edge_count == rho * (rho - 1) // 2 + 3 * (n - rho)
        assert graph.edge_count <= 6 * n

    def test_random_is_deterministic(self):
        D = squared_distance_matrix(_disk(150, 2))
        a = build_anchor_graph(D, D, 2, strategy="random", seed=11)
        b = build_anchor_graph(D, D, 2, strategy=LocalStrategy.RANDOM, seed=11)
        assert a.to_dict() == b.to_dict()

    def test_random_seed_changes_local_edges(self):
        D = squared_distance_matrix(_disk(150, 2))
        a = build_anchor_graph(D, D, 2, strategy="random", seed=11)
        b = build_anchor_graph(D, D, 2, strategy="random", seed=12)
        assert a.anchors == b.anchors
        assert a.local_edges != b.local_edges

    @pytest.mark.parametrize("cloud, max_redraws", [
        (_disk(120, 3), 10),
        # one point off a line: most anchor triples are collinear
        (PointCloud(np.vstack([np.column_stack([np.linspace(0, 1, 60), np.zeros(60)]), [[0.5, 0.3]]])), 1),
    ])
    def test_random_draws_are_affinely_spread(self, cloud, max_redraws):
        D = squared_distance_matrix(cloud)
        graph = build_anchor_graph(D, D, 2, rho=8, strategy="random", seed=0, max_redraws=max_redraws)
        anchors = np.asarray(sorted(graph.anchors))
        fallen_back = 0
        for v in graph.non_anchors():
            targets = [a for a, _ in graph.local_edges[v]]
            rng = np.random.default_rng(np.random.SeedSequence([0, v]))
            accepted = None
            for _ in range(max_redraws + 1):
                draw = sorted(int(a) for a in anchors[rng.choice(anchors.size, size=3, replace=False)])
                if affine_spread(D.submatrix(draw)) >= 1e-4:
                    accepted = draw
                    break
            if accepted is None:
                fallen_back += 1
                nearest = anchors[np.argsort(D.entries[v, anchors], kind="stable")[:3]]
                assert targets == [int(a) for a in nearest]
            else:
                assert targets == accepted
                assert affine_spread(D.submatrix(targets)) >= 1e-4
        assert graph.meta["fallbacks"] == fallen_back
        if max_redraws == 1:
            assert fallen_back > 0

    def test_fallback_ratio_logged(self, caplog):
        cloud = _disk(200, 9)
        D = squared_distance_matrix(cloud)
        with caplog.at_level(logging.INFO, logger="src.graph.anchor_graph"):
            graph = build_anchor_graph(D, D, 2, rho=20, strategy="stable2d", points=cloud.points)
        expected = f"stable2d fallback ratio {graph.meta['fallbacks']}/180"
        assert any(expected in record.getMessage() for record in caplog.records)

    def test_construction_reads_single_entries(self, monkeypatch):
        cloud = _disk(300, 10)
        D = squared_distance_matrix(cloud)
        reference = build_anchor_graph(D, D, 2, strategy="random", seed=4)

        sizes = []
        sqrt = np.sqrt

        def whole_mask(self):
            raise AssertionError("full observation mask materialised")

        def recording_sqrt(x, *args, **kwargs):
            sizes.append(np.size(x))
            return sqrt(x, *args, **kwargs)

        monkeypatch.setattr(SquaredDistanceMatrix, "observed", whole_mask)
        monkeypatch.setattr(np, "sqrt", recording_sqrt)
        graph = build_anchor_graph(D, D, 2, strategy="random", seed=4)
        cost = cost_report(graph, D)
        monkeypatch.undo()
        assert graph.to_dict() == reference.to_dict()
        assert cost.edge_count == graph.edge_count
        assert max(sizes) <= 300

    def test_nearest_local_edges_are_short(self):
        D = squared_distance_matrix(_disk(500, 4))
        graph = build_anchor_graph(D, D, 2)
        cost = cost_report(graph, D)
        assert cost.max_local_edge_length <= 5 * graph.radius

    def test_edge_lengths_come_from_observed_matrix(self):
        D = squared_distance_matrix(_disk(60, 5))
        D_obs = SquaredDistanceMatrix(D.entries * 1.21)
        graph = build_anchor_graph(D, D_obs, 2, rho=6)
        i, j, d = graph.global_edges[0]
        assert d == pytest.approx(1.1 * np.sqrt(D.entries[i, j]))

    def test_unobserved_edge(self):
        D = squared_distance_matrix(_disk(30, 6))
        mask = np.ones((30, 30), dtype=bool)
        graph = build_anchor_graph(D, D, 2, rho=5)
        a, b = graph.anchors[0], graph.anchors[1]
        mask[a, b] = mask[b, a] = False
        with pytest.raises(ObservationError):
            build_anchor_graph(D, SquaredDistanceMatrix(D.entries, mask), 2, rho=5)

    def test_rho_bounds(self):
        D = squared_distance_matrix(_disk(10))
        with pytest.raises(DimensionMismatchError):
            build_anchor_graph(D, D, 2, rho=11)
        with pytest.raises(GeometryError):
            build_anchor_graph(D, D, 2, rho=3)

    def test_stable_strategy_is_planar(self):
        P = PointCloud(np.random.default_rng(0).normal(size=(40, 3)))
        D = squared_distance_matrix(P)
        with pytest.raises(GeometryError):
            build_anchor_graph(D, D, 3, strategy="stable2d")

    def test_stable_strategy_records_triples(self):
        cloud = _disk(800, 7)
        D = squared_distance_matrix(cloud)
        graph = build_anchor_graph(D, D, 2, rho=40, strategy="stable2d", points=cloud.points)
        assert graph.meta["strategy"] == "stable2d"
        assert len(graph.stable_vertices) + graph.meta["fallbacks"] == 800 - 40
        assert graph.stable_vertices
        for v in graph.stable_vertices:
            assert str(v) in graph.meta["angles"]
        graph.validate()

    def test_stable_angles_stay_in_the_window(self):
        cloud = _disk(800, 7)
        D = squared_distance_matrix(cloud)
        graph = build_anchor_graph(D, D, 2, rho=40, strategy="stable2d", points=cloud.points)
        phi = stability_phi(graph.radius, graph.radius, graph.meta["delta"])
        assert graph.stable_vertices
        for v in graph.stable_vertices:
            r_i, r_j, _ = [a for a, _ in graph.local_edges[v]]
            u = cloud.points[r_i] - cloud.points[v]
            w = cloud.points[r_j] - cloud.points[v]
            angle = np.arccos(np.clip(u @ w / (np.linalg.norm(u) * np.linalg.norm(w)), -1.0, 1.0))
            assert angle == pytest.approx(graph.meta["angles"][str(v)], abs=1e-9)
            assert abs(angle - np.pi / 2) <= phi + 1e-9

    def test_json_file(self, tmp_path):
        D = squared_distance_matrix(_disk(50, 8))
        graph = build_anchor_graph(D, D, 2, strategy="random", seed=3)
        path = anchor_graph_to_json(graph, tmp_path / "g.json")
        loaded = anchor_graph_from_json(path)
        assert loaded.to_dict() == graph.to_dict()

    def test_malformed_document(self):
        with pytest.raises(GeometryError):
            AnchorGraph.from_dict({"n": 3, "edges": []})


class TestValidate:
    """Test structural validation."""

    def test_missing_local_edges(self):
        D = squared_distance_matrix(_disk(40, 9))
        graph = build_anchor_graph(D, D, 2, rho=6)
        v = graph.non_anchors()[0]
        graph.local_edges[v] = graph.local_edges[v][:2]
        with pytest.raises(GeometryError):
            graph.validate()

    def test_too_few_anchors(self):
        graph = AnchorGraph(3, 2, [0, 1, 2], [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)], {})
        with pytest.raises(GeometryError):
            graph.validate()


class TestStableAnchors:
    """Test near-perpendicular anchor selection."""

    @staticmethod
    def _sdm(p, anchors) -> SquaredDistanceMatrix:
        return squared_distance_matrix(PointCloud(np.vstack([p, anchors])))

    def test_compass_anchors(self):
        D = self._sdm([0.0, 0.0], _polar([0, 90, 180, 270], [1, 1, 1, 1]))
        triple = select_stable_anchors_2d(0, [1, 2, 3, 4], D, e=1.0, delta=0.5)
        assert triple.angle == pytest.approx(np.pi / 2)
        assert {triple.r_i, triple.r_j} in ({1, 2}, {1, 4})

    def test_angle_enumeration(self):
        D = self._sdm([0.0, 0.0], _polar([0, 85, 170], [1.0, 1.05, 1.1]))
        triple = select_stable_anchors_2d(0, [1, 2, 3], D, e=1.0, delta=0.5)
        assert (triple.r_i, triple.r_j) == (1, 2)
        assert np.degrees(triple.angle) == pytest.approx(85.0)
        assert triple.r_k == 3

    def test_narrow_cone(self):
        D = self._sdm([0.0, 0.0], _polar([0, 2, 5], [1.0, 1.1, 1.2]))
        with pytest.raises(NotInteriorError):
            select_stable_anchors_2d(0, [1, 2, 3], D, e=1.0, delta=0.5)

    def test_too_few_anchors_in_ball(self):
        D = self._sdm([0.0, 0.0], _polar([0, 90, 180], [1, 1, 9]))
        with pytest.raises(NotInteriorError):
            select_stable_anchors_2d(0, [1, 2, 3], D, e=1.0, delta=0.5)

    def test_witness_on_the_wrong_side(self):
        # third anchor lies beyond the chord from p's point of view
        anchors = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        D = self._sdm([0.0, 0.0], anchors)
        with pytest.raises(NotInteriorError):
            select_stable_anchors_2d(0, [1, 2, 3], D, e=1.0, delta=0.5)

    def test_window(self):
        phi = stability_phi(1.0, 1.0, 0.5)
        assert np.cos(phi) == pytest.approx(1.0 / 6.0)
        assert lambda_phi(1.0, 1.0, 0.5) == pytest.approx(6.0)


class TestCostReport:
    """Test edge length accounting."""

    def test_all_anchors(self):
        D = squared_distance_matrix(PointCloud([(0, 0), (1, 0), (1, 1), (0, 1)]))
        graph = build_anchor_graph(D, D, 2, rho=4)
        cost = cost_report(graph, D)
        assert cost.local_length == 0.0
        assert cost.global_length == pytest.approx(4 + 2 * np.sqrt(2))
        assert cost.edge_count == 6


class TestConnectivity:
    """Test the vertex connectivity validator."""

    def test_complete_graph(self):
        assert vertex_connectivity_at_least(nx.complete_graph(5), 4)
        assert not vertex_connectivity_at_least(nx.complete_graph(5), 5)

    def test_path(self):
        assert vertex_connectivity_at_least(nx.path_graph(6), 1)
        assert not vertex_connectivity_at_least(nx.path_graph(6), 2)

    def test_disconnected(self):
        G = nx.Graph([(0, 1), (2, 3)])
        assert not vertex_connectivity_at_least(G, 1)

    def test_anchor_graph_is_three_connected(self):
        D = squared_distance_matrix(_disk(200, 10))
        graph = build_anchor_graph(D, D, 2)
        assert vertex_connectivity_at_least(graph, 3)

    def test_agrees_with_brute_force(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            G = nx.gnp_random_graph(9, 0.55, seed=int(rng.integers(1 << 30)))
            for t in (1, 2, 3):
                brute = nx.is_connected(G) and all(
                    nx.is_connected(G.subgraph(set(G) - set(cut)))
                    for cut in itertools.combinations(G, t - 1)
                )
                assert vertex_connectivity_at_least(G, t) == brute


class TestLaman:
    """Test generic rigidity in the plane."""

    def test_triangle(self):
        assert laman_check_2d([(0, 1), (1, 2), (0, 2)])

    def test_four_cycle(self):
        assert not laman_check_2d([(0, 1), (1, 2), (2, 3), (3, 0)])

    def test_braced_square(self):
        assert laman_check_2d([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])

    def test_dependent_edges_rejected(self):
        edges = list(itertools.combinations(range(4), 2))
        assert independent_edge_count_2d(4, edges) == 5

    def test_redundant_rigidity(self):
        assert redundantly_rigid_2d(nx.complete_graph(4))
        assert not redundantly_rigid_2d([(0, 1), (1, 2), (0, 2)])

    def test_anchor_graph_is_rigid(self):
        D = squared_distance_matrix(_disk(150, 12))
        graph = build_anchor_graph(D, D, 2)
        assert laman_check_2d(graph)

    def test_rigidity_matrix_rank_of_anchor_graph(self):
        cloud = _disk(25, 13)
        D = squared_distance_matrix(cloud)
        graph = build_anchor_graph(D, D, 2, rho=5)
        assert rigidity_matrix_rank(graph, cloud.points) == 2 * 25 - 3

    def test_min_globally_rigid_edges(self):
        assert min_globally_rigid_edges(10, 2) == 18
        assert min_globally_rigid_edges(10, 3) == 25


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
