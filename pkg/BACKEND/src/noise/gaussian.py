"""Independent Gaussian distance noise, the bias matrix Sigma, and debiasing."""

import json
import logging
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, model_validator

from ..core.errors import DimensionMismatchError, GeometryError
from ..core.geometry import SquaredDistanceMatrix

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


class NoiseSpec:
    """Per-pair standard deviations sigma_ij plus the seed that fixes every draw."""

    def __init__(self, sigma, seed: int = 0):
        arr = np.array(sigma, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(f"sigma must be a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or (arr < 0).any():
            raise GeometryError("sigma must be finite and nonnegative")
        if not np.array_equal(arr, arr.T):
            raise GeometryError("sigma must be symmetric")
        if np.any(np.diag(arr) != 0):
            raise GeometryError("sigma must have a zero diagonal")
        if not 0 <= int(seed) <= MAX_SEED:
            raise GeometryError(f"seed must be an unsigned 64-bit integer, got {seed}")
        arr.flags.writeable = False
        self.sigma = arr
        self.seed = int(seed)

    @classmethod
    def uniform(cls, n: int, sigma: float, seed: int = 0) -> "NoiseSpec":
        matrix = np.full((n, n), float(sigma))
        np.fill_diagonal(matrix, 0.0)
        return cls(matrix, seed)

    @property
    def size(self) -> int:
        return self.sigma.shape[0]

    def sigma_max(self) -> float:
        return float(self.sigma.max())

    def __repr__(self) -> str:
        return f"NoiseSpec(size={self.size}, sigma_max={self.sigma_max():.3g}, seed={self.seed})"


class BiasMatrix:
    """Sigma with entries sigma_ij^2, the expected inflation of noisy squared distances."""

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatchError(f"bias matrix must be square, got shape {arr.shape}")
        if not np.array_equal(arr, arr.T) or np.any(np.diag(arr) != 0):
            raise GeometryError("bias matrix must be symmetric with a zero diagonal")
        arr.flags.writeable = False
        self.entries = arr

    @classmethod
    def zeros(cls, n: int) -> "BiasMatrix":
        return cls(np.zeros((n, n)))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def submatrix(self, indices) -> "BiasMatrix":
        idx = np.asarray(indices, dtype=int)
        return BiasMatrix(self.entries[np.ix_(idx, idx)])


class Perturbation(NamedTuple):
    """Noisy matrix plus the number of perturbed distances that went negative."""
    matrix: SquaredDistanceMatrix
    negative_draws: int


def row_stream(seed: int, row: int) -> np.random.Generator:
    """PCG64 stream keyed by (seed, row); entry j of its normals is the draw for pair (row, j)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(row)]))


def perturb_with_report(D: SquaredDistanceMatrix, spec: NoiseSpec) -> Perturbation:
    """Draw delta_ij ~ N(0, sigma_ij^2) once per observed unordered pair and square d_ij + delta_ij."""
    n = D.size
    if spec.size != n:
        raise DimensionMismatchError(f"noise spec of size {spec.size} for a matrix of size {n}")
    entries = D.entries
    observed = D.observed()
    out = np.zeros((n, n))
    negative = 0
    for i in range(n - 1):
        sigma_row = spec.sigma[i, i + 1:]
        active = observed[i, i + 1:] & (sigma_row > 0)
        row = entries[i, i + 1:].copy()
        if active.any():
            normals = row_stream(spec.seed, i).standard_normal(n)[i + 1:]
            noisy = np.sqrt(np.clip(row, 0.0, None)) + sigma_row * normals
            negative += int(np.count_nonzero(active & (noisy < 0)))
            row = np.where(active, noisy * noisy, row)
        out[i, i + 1:] = row
    out = out + out.T
    if negative:
        logger.warning(f"{negative} perturbed distances were negative before squaring")
    return Perturbation(SquaredDistanceMatrix(out, D.mask, allow_negative=True), negative)


def perturb_distances(D: SquaredDistanceMatrix, spec: NoiseSpec) -> SquaredDistanceMatrix:
    """Noisy squared distance matrix; deterministic for a fixed seed."""
    return perturb_with_report(D, spec).matrix


def bias_matrix(spec: NoiseSpec) -> BiasMatrix:
    return BiasMatrix(spec.sigma ** 2)


def debias(Dt: SquaredDistanceMatrix, B: BiasMatrix) -> SquaredDistanceMatrix:
    """Subtract Sigma from the observed entries of a noisy matrix."""
    if Dt.size != B.size:
        raise DimensionMismatchError(f"bias of size {B.size} for a matrix of size {Dt.size}")
    entries = np.where(Dt.observed(), Dt.entries - B.entries, 0.0)
    np.fill_diagonal(entries, 0.0)
    return SquaredDistanceMatrix(entries, Dt.mask, allow_negative=True)


class NoiseSpecDocument(BaseModel):
    """JSON form of a noise spec: a uniform sigma or a path to a sigma matrix CSV."""

    sigma_uniform: Optional[float] = Field(default=None, ge=0)
    sigma_matrix_csv: Optional[str] = None
    seed: int = Field(default=0, ge=0, le=MAX_SEED)

    @model_validator(mode="after")
    def _one_source(self) -> "NoiseSpecDocument":
        if (self.sigma_uniform is None) == (self.sigma_matrix_csv is None):
            raise ValueError("exactly one of sigma_uniform or sigma_matrix_csv is required")
        return self

    def to_spec(self, n: int, base_dir: Optional[Path] = None) -> NoiseSpec:
        if self.sigma_uniform is not None:
            return NoiseSpec.uniform(n, self.sigma_uniform, self.seed)
        path = Path(self.sigma_matrix_csv)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        matrix = pd.read_csv(path, header=None).to_numpy(dtype=float)
        spec = NoiseSpec(matrix, self.seed)
        if spec.size != n:
            raise DimensionMismatchError(f"sigma matrix of size {spec.size} for {n} points")
        return spec


def load_noise_spec(path: Union[str, Path], n: int) -> NoiseSpec:
    path = Path(path)
    document = NoiseSpecDocument.model_validate(json.loads(path.read_text()))
    return document.to_spec(n, base_dir=path.parent)
