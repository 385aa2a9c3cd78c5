"""Symmetric eigendecomposition, spectral norms, Gershgorin bound and perturbation diagnostics."""

import logging
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from ..core.defaults import EIGEN_CONFIG, SYMMETRY_TOL
from ..core.errors import ConvergenceError, DimensionMismatchError, GeometryError

logger = logging.getLogger(__name__)

JACOBI_TOL = float(EIGEN_CONFIG.get('jacobi_tol', 1e-12))
JACOBI_MAX_SWEEPS = int(EIGEN_CONFIG.get('jacobi_max_sweeps', 100))
POWER_TOL = float(EIGEN_CONFIG.get('power_tol', 1e-10))
POWER_MAX_ITER = int(EIGEN_CONFIG.get('power_max_iter', 1000))
GAP_DEGENERATE_TOL = float(EIGEN_CONFIG.get('gap_degenerate_tol', 1e-8))


class SpectralDecomposition(NamedTuple):
    """Eigenvalues in descending order with matching orthonormal eigenvectors as columns."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reassemble(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.T


class SpectralDiagnostics(NamedTuple):
    spectral_gap: float
    gershgorin_radius: float
    perturbation_2norm_bound: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spectral_gap": self.spectral_gap,
            "gershgorin_radius": self.gershgorin_radius,
            "perturbation_2norm_bound": self.perturbation_2norm_bound,
        }


class PerturbationReport(NamedTuple):
    """Weyl and eigenvector-perturbation quantities for G versus Gt = G + E."""
    e2norm: float
    norm_method: str
    isolation_gap: float
    delta_lambda: np.ndarray
    delta_u: Optional[np.ndarray]
    weyl_holds: bool
    davis_kahan_holds: Optional[bool]
    gap_degenerate: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "isolation_gap": self.isolation_gap,
            "e2norm": self.e2norm,
            "norm_method": self.norm_method,
            "weyl_holds": self.weyl_holds,
            "davis_kahan_holds": self.davis_kahan_holds,
            "gap_degenerate": self.gap_degenerate,
            "max_delta_lambda": float(self.delta_lambda.max()) if self.delta_lambda.size else 0.0,
            "max_delta_u": None if self.delta_u is None else float(self.delta_u.max()),
        }


def _prepare_symmetric(G) -> np.ndarray:
    G = np.array(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {G.shape}")
    if not np.all(np.isfinite(G)):
        raise GeometryError("matrix has non-finite entries")
    asymmetry = float(np.abs(G - G.T).max()) if G.size else 0.0
    if asymmetry > SYMMETRY_TOL * max(1.0, float(np.abs(G).max())):
        logger.warning(f"Symmetrizing a matrix with asymmetry {asymmetry:.3e}")
    return 0.5 * (G + G.T)


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its entry of largest magnitude is nonnegative."""
    if vectors.size == 0:
        return vectors
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _descending(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> SpectralDecomposition:
    order = np.argsort(-eigenvalues, kind="stable")
    return SpectralDecomposition(eigenvalues[order], fix_signs(eigenvectors[:, order]))


def jacobi_eig(G, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> SpectralDecomposition:
    """Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below tol * |G|_F."""
    A = _prepare_symmetric(G)
    n = A.shape[0]
    V = np.eye(n)
    threshold = tol * np.linalg.norm(A)

    for sweep in range(max_sweeps + 1):
        off = np.sqrt(max(float((A ** 2).sum() - (np.diag(A) ** 2).sum()), 0.0))
        if off <= threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off={off:.3e})")
            return _descending(np.diag(A).copy(), V)
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                vec_p = V[:, p].copy()
                vec_q = V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q

    raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")


def symmetric_eig(G, method: str = None) -> SpectralDecomposition:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    Sign convention: the largest-magnitude entry of each eigenvector is nonnegative.
    """
    method = method or EIGEN_CONFIG.get('method', 'eigh')
    if method == "jacobi":
        return jacobi_eig(G)
    if method != "eigh":
        raise ValueError(f"unknown eigensolver '{method}'")
    A = _prepare_symmetric(G)
    eigenvalues, eigenvectors = np.linalg.eigh(A)
    return _descending(eigenvalues, eigenvectors)


def power_iteration_norm(
    E, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER, seed: int = 0
) -> float:
    """Spectral norm of E from power iteration on E^T E."""
    E = np.asarray(E, dtype=float)
    if not np.any(E):
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.normal(size=E.shape[1])
    x /= np.linalg.norm(x)
    mu = 0.0
    for _ in range(max_iter):
        y = E.T @ (E @ x)
        mu_new = float(x @ y)
        norm_y = np.linalg.norm(y)
        if norm_y == 0.0:
            # x fell into the null space; restart from a fresh direction
            x = rng.normal(size=E.shape[1])
            x /= np.linalg.norm(x)
            continue
        x = y / norm_y
        if abs(mu_new - mu) <= tol * abs(mu_new):
            mu = mu_new
            break
        mu = mu_new
    else:
        logger.warning(f"Power iteration stopped at the {max_iter}-iteration cap")
    return float(np.sqrt(max(mu, 0.0)))


def spectral_norm(E, method: str = None) -> float:
    """|E|_2 by power iteration ('power') or from the symmetric spectrum ('eig')."""
    method = method or EIGEN_CONFIG.get('norm_method', 'eig')
    if method == "power":
        return power_iteration_norm(E)
    if method != "eig":
        raise ValueError(f"unknown norm method '{method}'")
    A = _prepare_symmetric(E)
    return float(np.abs(np.linalg.eigvalsh(A)).max())


def gershgorin_bound(A) -> float:
    """max_j sum_i |A_ij|, an upper bound on the spectral radius."""
    A = np.asarray(A, dtype=float)
    return float(np.abs(A).sum(axis=0).max())


def top_k_gap(eigenvalues: np.ndarray, k: int) -> float:
    """Smallest consecutive gap among lambda_1..lambda_k with lambda_{k+1} taken as 0."""
    top = np.append(np.asarray(eigenvalues, dtype=float)[:k], 0.0)
    return float(max(np.min(top[:-1] - top[1:]), 0.0))


def isolation_gap(eigenvalues: np.ndarray, k: int) -> float:
    """Smallest distance from any of lambda_1..lambda_k to another eigenvalue of the full spectrum.

    Equals the top-k gap for a rank-k Gram matrix, whose trailing eigenvalues vanish.
    """
    values = np.asarray(eigenvalues, dtype=float)
    if values.size < 2:
        return float("inf")
    gaps = []
    for i in range(min(k, values.size)):
        others = np.delete(values, i)
        gaps.append(np.min(np.abs(others - values[i])))
    return float(min(gaps))


def spectral_diagnostics(G, k: int, Gt=None, norm_method: str = None) -> SpectralDiagnostics:
    decomposition = symmetric_eig(G)
    bound = None
    if Gt is not None:
        bound = spectral_norm(np.asarray(Gt, dtype=float) - np.asarray(G, dtype=float), norm_method)
    return SpectralDiagnostics(
        spectral_gap=top_k_gap(decomposition.eigenvalues, k),
        gershgorin_radius=gershgorin_bound(G),
        perturbation_2norm_bound=bound,
    )


def _aligned_difference(u: np.ndarray, v: np.ndarray) -> float:
    return float(min(np.linalg.norm(v - u), np.linalg.norm(v + u)))


def eigen_perturbation_report(G, Gt, k: int, norm_method: str = None) -> PerturbationReport:
    """Compare spectra of G and Gt = G + E against the Weyl and eigenvector-perturbation bounds."""
    G = _prepare_symmetric(G)
    Gt = _prepare_symmetric(Gt)
    if G.shape != Gt.shape:
        raise DimensionMismatchError(f"matrices of shape {G.shape} and {Gt.shape}")
    k = min(k, G.shape[0])
    norm_method = norm_method or EIGEN_CONFIG.get('norm_method', 'eig')
    e2norm = spectral_norm(Gt - G, norm_method)

    base = symmetric_eig(G)
    perturbed = symmetric_eig(Gt)
    delta_lambda = np.abs(perturbed.eigenvalues - base.eigenvalues)
    weyl_holds = bool(np.all(delta_lambda <= e2norm + 1e-8))

    gap = isolation_gap(base.eigenvalues, k)
    gap_degenerate = gap < GAP_DEGENERATE_TOL
    delta_u = None
    davis_kahan_holds = None
    if gap_degenerate:
        logger.warning(f"Gap-degenerate spectrum (gap={gap:.3e}); skipping eigenvector comparison")
    else:
        delta_u = np.array([
            _aligned_difference(base.eigenvectors[:, i], perturbed.eigenvectors[:, i])
            for i in range(k)
        ])
        if gap > 2.0 * e2norm:
            bound = 2.0 * np.sqrt(2.0) * e2norm / gap
            davis_kahan_holds = bool(delta_u.max() <= bound + 1e-8)

    return PerturbationReport(
        e2norm=e2norm,
        norm_method=norm_method,
        isolation_gap=gap,
        delta_lambda=delta_lambda,
        delta_u=delta_u,
        weyl_holds=weyl_holds,
        davis_kahan_holds=davis_kahan_holds,
        gap_degenerate=gap_degenerate,
    )
