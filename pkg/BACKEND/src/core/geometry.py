"""Geometric primitives - point clouds, squared distance matrices, scale parameters, structural loss."""

import logging
from typing import NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from .defaults import DEGENERATE_REL_TOL, IDENTITY_TOL, SYMMETRY_TOL
from .errors import DimensionMismatchError, GeometryError, ObservationError

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def pairwise_sq(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Squared euclidean distances between the rows of X and the rows of Y.

    Each pair is computed on its own, so its value is bitwise identical whichever
    subsets the rows come from. The epsilon-net predicates rely on this to agree
    exactly with farthest sampling.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    return cdist(X, Y, "sqeuclidean")


class PointCloud:
    """An ordered collection of n points in R^k, stored as an n x k array."""

    def __init__(self, points, labels: Optional[Sequence[str]] = None):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GeometryError(f"point cloud needs shape (n, k) with n, k >= 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise GeometryError("point cloud contains non-finite coordinates")
        if labels is not None:
            labels = tuple(str(label) for label in labels)
            if len(labels) != arr.shape[0]:
                raise DimensionMismatchError(f"{len(labels)} labels for {arr.shape[0]} points")
        self._points = _frozen(arr)
        self.labels = labels

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return self._points.shape[0]

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"PointCloud(n={self.n}, dim={self.dim})"

    def centroid(self) -> np.ndarray:
        return self._points.mean(axis=0)

    def centered(self) -> "PointCloud":
        return PointCloud(self._points - self.centroid(), self.labels)

    def radius(self) -> float:
        """Largest norm of any point, the bound r on |P_i|."""
        return float(np.sqrt((self._points ** 2).sum(axis=1)).max())

    def subset(self, indices: Sequence[int]) -> "PointCloud":
        idx = np.asarray(indices, dtype=int)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        return PointCloud(self._points[idx], labels)

    def transformed(self, rotation: np.ndarray, translation: np.ndarray) -> "PointCloud":
        """Apply x -> R x + t to every point."""
        return PointCloud(self._points @ np.asarray(rotation).T + np.asarray(translation), self.labels)


class SquaredDistanceMatrix:
    """Symmetric matrix of squared distances, optionally restricted to an observed edge set.

    Unobserved entries are stored as zero and must not be read. Debiased matrices may carry
    small negative entries, so nonnegativity is only enforced when ``allow_negative`` is False.
    """

    def __init__(self, entries, mask=None, allow_negative: bool = False):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise DimensionMismatchError(f"squared distance matrix must be square, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise GeometryError("squared distance matrix contains non-finite entries")
        scale = max(1.0, float(np.abs(arr).max()))
        if np.abs(arr - arr.T).max() > SYMMETRY_TOL * scale:
            raise GeometryError("squared distance matrix is not symmetric")
        if np.abs(np.diag(arr)).max() > SYMMETRY_TOL * scale:
            raise GeometryError("squared distance matrix has a nonzero diagonal")
        arr = 0.5 * (arr + arr.T)
        np.fill_diagonal(arr, 0.0)

        if mask is not None:
            mask = np.array(mask, dtype=bool)
            if mask.shape != arr.shape:
                raise DimensionMismatchError(f"mask shape {mask.shape} does not match {arr.shape}")
            if not np.array_equal(mask, mask.T):
                raise GeometryError("mask is not symmetric")
            if not np.all(np.diag(mask)):
                raise GeometryError("mask must have a true diagonal")
            if mask.all():
                mask = None
            else:
                arr[~mask] = 0.0
                mask = _frozen(mask)

        if not allow_negative and (arr < 0).any():
            raise GeometryError("squared distance matrix has negative entries")
        self._entries = _frozen(arr)
        self._mask = mask

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def mask(self) -> Optional[np.ndarray]:
        return self._mask

    @property
    def size(self) -> int:
        return self._entries.shape[0]

    @property
    def is_full(self) -> bool:
        return self._mask is None

    def __repr__(self) -> str:
        return f"SquaredDistanceMatrix(size={self.size}, full={self.is_full})"

    def require_full(self, operation: str) -> None:
        if not self.is_full:
            raise ObservationError(f"{operation} requires full observation")

    def observed(self) -> np.ndarray:
        """Boolean observation mask (all true for a full matrix)."""
        if self._mask is None:
            return np.ones_like(self._entries, dtype=bool)
        return self._mask

    def observed_pairs(self) -> Tuple[np.ndarray, np.ndarray]:
        """Index arrays (i, j) with i < j of every observed pair."""
        return np.nonzero(np.triu(self.observed(), k=1))

    def submatrix(self, indices: Sequence[int]) -> "SquaredDistanceMatrix":
        idx = np.asarray(indices, dtype=int)
        block = self._entries[np.ix_(idx, idx)]
        mask = None if self._mask is None else self._mask[np.ix_(idx, idx)]
        return SquaredDistanceMatrix(block, mask, allow_negative=True)


class ScaleParams(NamedTuple):
    """Per-direction variances pi_1 >= ... >= pi_k of a cloud and their summaries."""
    pi: Tuple[float, ...]
    h_val: float
    j_val: float
    g_val: float
    degenerate: bool = False


class Alignment(NamedTuple):
    """Rigid motion x -> rotation @ x + translation (reflections allowed)."""
    rotation: np.ndarray
    translation: np.ndarray

    def apply(self, cloud: PointCloud) -> PointCloud:
        return cloud.transformed(self.rotation, self.translation)


def squared_distance_matrix(P: PointCloud) -> SquaredDistanceMatrix:
    """Full squared distance matrix of a point cloud."""
    entries = pairwise_sq(P.points, P.points)
    entries = 0.5 * (entries + entries.T)
    np.fill_diagonal(entries, 0.0)
    return SquaredDistanceMatrix(entries)


def gram_from_sdm(D: SquaredDistanceMatrix) -> np.ndarray:
    """Double-centered Gram matrix G = -1/2 H D H."""
    D.require_full("gram_from_sdm")
    entries = D.entries
    row_means = entries.mean(axis=1)
    total_mean = row_means.mean()
    G = -0.5 * (entries - row_means[:, None] - row_means[None, :] + total_mean)
    return 0.5 * (G + G.T)


def scale_params(P: PointCloud) -> ScaleParams:
    """Scale parameters pi_i = lambda_i / n of the centered cloud."""
    n, k = P.n, P.dim
    if n < k:
        raise DimensionMismatchError(f"scale parameters need n >= k, got n={n}, k={k}")
    X = P.points - P.centroid()
    # nonzero spectrum of the n x n Gram matrix equals that of the k x k scatter matrix
    eigenvalues = np.linalg.eigvalsh(X.T @ X)[::-1] / n
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    top = eigenvalues[0]
    degenerate = bool(top <= 0.0 or eigenvalues[-1] <= DEGENERATE_REL_TOL * top)
    if degenerate:
        eigenvalues = np.where(eigenvalues <= DEGENERATE_REL_TOL * max(top, 0.0), 0.0, eigenvalues)
        logger.warning(f"Rank-deficient cloud (n={n}, k={k}); flagged as degenerate")
    pi = tuple(float(v) for v in eigenvalues)
    padded = np.append(eigenvalues, 0.0)
    gap = float(np.min(padded[:-1] - padded[1:]))
    return ScaleParams(pi=pi, h_val=pi[0], j_val=pi[-1], g_val=max(gap, 0.0), degenerate=degenerate)


def _align(K: np.ndarray, P: np.ndarray) -> Tuple[float, Alignment]:
    n = K.shape[0]
    mu_k = K.mean(axis=0)
    mu_p = P.mean(axis=0)
    Kc = K - mu_k
    Pc = P - mu_p
    # orthogonal Procrustes over O(k), no determinant correction
    U, _, Vt = np.linalg.svd(Pc.T @ Kc)
    rotation = (U @ Vt).T
    residual = Kc - Pc @ rotation.T
    loss = float(np.sqrt((residual ** 2).sum() / n))
    translation = mu_k - rotation @ mu_p
    return loss, Alignment(rotation=rotation, translation=translation)


def structural_loss(
    K: PointCloud, P: PointCloud, return_alignment: bool = False
) -> Union[float, Tuple[float, Alignment]]:
    """Structural loss inf_S |K - S(P)|_F / sqrt(n) over rigid motions S, reflections included.

    With ``return_alignment`` the minimizing motion (mapping P onto K) is returned as well.
    """
    if K.n != P.n or K.dim != P.dim:
        raise DimensionMismatchError(
            f"structural loss needs matching clouds, got ({K.n}, {K.dim}) and ({P.n}, {P.dim})"
        )
    loss, alignment = _align(K.points, P.points)
    if return_alignment:
        return loss, alignment
    return loss


def is_orthogonal(matrix: np.ndarray, tol: float = IDENTITY_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=float)
    return bool(np.abs(matrix.T @ matrix - np.eye(matrix.shape[1])).max() <= tol)
