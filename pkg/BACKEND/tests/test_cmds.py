"""Unit Tests - classical MDS, eigensolvers and spectral diagnostics."""

import pytest
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.cmds import (
    cmds_embed,
    cmds_embed_with_spectrum,
    eigen_perturbation_report,
    gershgorin_bound,
    jacobi_eig,
    noise_norm,
    spectral_diagnostics,
    spectral_norm,
    symmetric_eig,
    theory_error_envelope,
)
from src.cmds.spectral import isolation_gap, power_iteration_norm, top_k_gap
from src.core import (
    ConvergenceError,
    DegenerateConfigurationError,
    DimensionMismatchError,
    GeometryError,
    PointCloud,
    ScaleParams,
    SquaredDistanceMatrix,
    gram_from_sdm,
    squared_distance_matrix,
    structural_loss,
)
from src.noise import NoiseSpec, bias_matrix, perturb_distances


def _random_symmetric(n: int, seed: int) -> np.ndarray:
    A = np.random.default_rng(seed).normal(size=(n, n))
    return 0.5 * (A + A.T)


class TestSymmetricEig:
    """Test eigendecomposition and sign convention."""

    def test_diagonal(self):
        result = symmetric_eig(np.diag([3.0, 1.0]))
        assert result.eigenvalues.tolist() == pytest.approx([3.0, 1.0])
        assert np.allclose(result.eigenvectors, np.eye(2))

    def test_swap_matrix(self):
        result = symmetric_eig([[0.0, 1.0], [1.0, 0.0]])
        assert result.eigenvalues.tolist() == pytest.approx([1.0, -1.0])

    def test_reassembly(self):
        G = _random_symmetric(8, 0)
        assert np.abs(symmetric_eig(G).reassemble() - G).max() <= 1e-8

    def test_sign_convention(self):
        vectors = symmetric_eig(_random_symmetric(6, 1)).eigenvectors
        pivots = np.argmax(np.abs(vectors), axis=0)
        assert np.all(vectors[pivots, np.arange(6)] >= 0)

    def test_jacobi_matches_lapack(self):
        G = _random_symmetric(7, 2)
        jacobi = jacobi_eig(G)
        lapack = symmetric_eig(G, method="eigh")
        assert np.allclose(jacobi.eigenvalues, lapack.eigenvalues, atol=1e-10)
        assert np.allclose(jacobi.eigenvectors, lapack.eigenvectors, atol=1e-8)

    def test_jacobi_sweep_cap(self):
        with pytest.raises(ConvergenceError):
            jacobi_eig(_random_symmetric(6, 3), tol=1e-14, max_sweeps=0)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            symmetric_eig(np.eye(2), method="qr")

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError):
            symmetric_eig(np.zeros((2, 3)))


class TestCmdsEmbed:
    """Test classical MDS on exact and noisy inputs."""

    def test_exact_recovery(self):
        P = PointCloud(np.random.default_rng(0).uniform(-1, 1, size=(60, 3)))
        K = cmds_embed(squared_distance_matrix(P), 3)
        assert structural_loss(K, P) <= 1e-8

    def test_right_triangle(self):
        D = SquaredDistanceMatrix([[0, 9, 16], [9, 0, 25], [16, 25, 0]])
        K = cmds_embed(D, 2)
        recovered = np.sqrt(squared_distance_matrix(K).entries)
        assert recovered[0, 1] == pytest.approx(3.0, abs=1e-8)
        assert recovered[0, 2] == pytest.approx(4.0, abs=1e-8)
        assert recovered[1, 2] == pytest.approx(5.0, abs=1e-8)

    def test_regular_simplex(self):
        n, c = 5, 2.0
        D = SquaredDistanceMatrix(c * (np.ones((n, n)) - np.eye(n)))
        K = cmds_embed(D, n - 1)
        recovered = squared_distance_matrix(K).entries[np.triu_indices(n, k=1)]
        assert np.abs(recovered - c).max() <= 1e-8

    def test_output_axes_are_orthogonal(self):
        P = PointCloud(np.random.default_rng(12).uniform(-1, 1, size=(80, 3)))
        Dt = perturb_distances(squared_distance_matrix(P), NoiseSpec.uniform(80, 0.05, seed=1))
        K = cmds_embed(Dt, 3).points
        Kc = K - K.mean(axis=0)
        gram = Kc.T @ Kc
        off_diagonal = gram - np.diag(np.diag(gram))
        assert np.abs(off_diagonal).max() <= 1e-7 * max(1.0, np.abs(gram).max())

    def test_k_larger_than_n(self):
        D = squared_distance_matrix(PointCloud([(0, 0), (1, 0)]))
        with pytest.raises(DimensionMismatchError):
            cmds_embed(D, 3)

    def test_clamping_flagged(self):
        # collinear cloud embedded in 3 dimensions: trailing eigenvalues are round-off
        P = PointCloud([(t, 0.0) for t in range(8)])
        D = SquaredDistanceMatrix(squared_distance_matrix(P).entries - 0.01 * (np.ones((8, 8)) - np.eye(8)),
                                  allow_negative=True)
        embedding = cmds_embed_with_spectrum(D, 3)
        assert embedding.clamped
        assert np.all(np.isfinite(embedding.cloud.points))

    def test_masked_input_rejected(self):
        mask = np.eye(3, dtype=bool)
        D = SquaredDistanceMatrix(np.zeros((3, 3)), mask | np.eye(3, k=1, dtype=bool) | np.eye(3, k=-1, dtype=bool))
        with pytest.raises(GeometryError):
            cmds_embed(D, 2)


class TestGershgorin:
    """Test the Gershgorin diagnostic."""

    def test_identity(self):
        assert gershgorin_bound(np.eye(3)) == 1.0

    def test_overestimate(self):
        assert gershgorin_bound([[0.0, 1.0], [1.0, 0.0]]) == 2.0

    def test_bounds_spectral_radius(self):
        G = _random_symmetric(10, 4)
        radius = np.abs(symmetric_eig(G).eigenvalues).max()
        assert gershgorin_bound(G) >= radius

    def test_diagnostics_report(self):
        P = PointCloud([(1, 0.5), (1, -0.5), (-1, 0.5), (-1, -0.5)])
        G = gram_from_sdm(squared_distance_matrix(P))
        report = spectral_diagnostics(G, 2, Gt=G + 0.01 * np.eye(4))
        assert report.spectral_gap == pytest.approx(1.0)
        assert report.perturbation_2norm_bound == pytest.approx(0.01)


class TestEnvelope:
    """Test the theoretical error envelope."""

    PARAMS = ScaleParams(pi=(1.0, 0.25), h_val=1.0, j_val=0.25, g_val=0.25)

    def test_zero_noise(self):
        assert theory_error_envelope(self.PARAMS, 0.0, 1.2, 2, 100, 0.4) == 0.0

    def test_scaling_in_n(self):
        zeta = 0.4
        small = theory_error_envelope(self.PARAMS, 0.01, 1.0, 2, 100, zeta)
        large = theory_error_envelope(self.PARAMS, 0.01, 1.0, 2, 400, zeta)
        assert large / small == pytest.approx(0.25 ** zeta, rel=1e-12)

    def test_hand_evaluation(self):
        expected = 0.01 * 1.2 * 2 / 100 ** 0.4 * np.sqrt(1 / (4 * 0.0625) + 8 / 0.0625)
        value = theory_error_envelope(self.PARAMS, 0.01, 1.2, 2, 100, 0.4)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_degenerate_params(self):
        degenerate = ScaleParams(pi=(1.0, 0.0), h_val=1.0, j_val=0.0, g_val=0.0, degenerate=True)
        with pytest.raises(DegenerateConfigurationError):
            theory_error_envelope(degenerate, 0.01, 1.0, 2, 100, 0.4)

    def test_zeta_range(self):
        with pytest.raises(GeometryError):
            theory_error_envelope(self.PARAMS, 0.01, 1.0, 2, 100, 0.5)


class TestPerturbationReport:
    """Test Weyl and eigenvector perturbation quantities."""

    def test_unperturbed(self):
        G = np.diag([3.0, 2.0, 1.0])
        report = eigen_perturbation_report(G, G, 2)
        assert report.e2norm == 0.0
        assert np.all(report.delta_lambda == 0)
        assert np.all(report.delta_u == 0)

    def test_identity_shift(self):
        eps = 0.01
        G = np.diag([3.0, 2.0, 1.0])
        report = eigen_perturbation_report(G, G + eps * np.eye(3), 3)
        assert np.allclose(report.delta_lambda, eps, atol=1e-14)
        assert np.abs(report.delta_u).max() <= 1e-12
        assert report.weyl_holds

    def test_small_random_perturbation(self):
        rng = np.random.default_rng(7)
        Q, _ = np.linalg.qr(rng.normal(size=(10, 10)))
        G = (Q * np.arange(10, 0, -1.0)) @ Q.T
        E = _random_symmetric(10, 8)
        E *= 0.2 / np.abs(np.linalg.eigvalsh(E)).max()
        report = eigen_perturbation_report(G, G + E, 3)
        assert report.isolation_gap == pytest.approx(1.0)
        assert report.weyl_holds
        assert report.davis_kahan_holds

    def test_repeated_eigenvalue_flagged(self):
        G = np.diag([2.0, 2.0, 1.0])
        report = eigen_perturbation_report(G, G + 0.001 * np.eye(3), 2)
        assert report.gap_degenerate
        assert report.delta_u is None
        assert report.to_dict()["max_delta_u"] is None

    def test_report_names_the_isolation_gap(self):
        G = np.diag([5.0, 3.0, 2.5, 0.0])
        report = eigen_perturbation_report(G, G + 0.01 * np.eye(4), 2)
        payload = report.to_dict()
        assert payload["isolation_gap"] == pytest.approx(0.5)
        assert "spectral_gap" not in payload
        assert spectral_diagnostics(G, 2).spectral_gap == pytest.approx(2.0)

    def test_gaps(self):
        values = np.array([5.0, 3.0, 2.5, 0.0])
        assert top_k_gap(values, 2) == pytest.approx(2.0)
        assert isolation_gap(values, 2) == pytest.approx(0.5)


class TestNorms:
    """Test spectral norms."""

    def test_power_matches_eig(self):
        Q, _ = np.linalg.qr(np.random.default_rng(9).normal(size=(12, 12)))
        E = (Q * np.array([5.0, -3.0, 2.0] + [1.0] * 9)) @ Q.T
        assert power_iteration_norm(E, tol=1e-14, max_iter=5000) == pytest.approx(
            spectral_norm(E, "eig"), rel=1e-5
        )

    def test_zero_matrix(self):
        assert spectral_norm(np.zeros((4, 4)), "power") == 0.0

    def test_noise_norm_unperturbed(self):
        D = squared_distance_matrix(PointCloud(np.random.default_rng(0).normal(size=(10, 2))))
        assert noise_norm(D, D) == 0.0

    def test_noise_norm_debiased_is_smaller(self):
        D = squared_distance_matrix(PointCloud(np.random.default_rng(1).uniform(-1, 1, size=(300, 2))))
        spec = NoiseSpec.uniform(D.size, 0.3, seed=3)
        Dt = perturb_distances(D, spec)
        assert noise_norm(D, Dt, bias_matrix(spec)) < noise_norm(D, Dt)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
