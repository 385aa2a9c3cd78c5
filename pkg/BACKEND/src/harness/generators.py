"""Seeded synthetic point clouds inside the unit ball."""

import logging
from typing import Any, Dict, Optional

import numpy as np

from ..core.defaults import HARNESS_CONFIG
from ..core.errors import DimensionMismatchError, GeometryError
from ..core.geometry import PointCloud
from .config import ExperimentConfig, Generator

logger = logging.getLogger(__name__)

CARDIOID_LOBE = float(HARNESS_CONFIG.get('cardioid_lobe', 0.5))
ANNULUS_INNER = 0.5

CLOUD_STREAM = 0
NOISE_STREAM = 1


def trial_sequence(seed: int, trial: int, n: int, stream: int) -> np.random.SeedSequence:
    """Seed sequence of one (seed, trial, n) cell; ``stream`` separates cloud and noise draws."""
    return np.random.SeedSequence([int(seed), int(trial), int(n), int(stream)])


def trial_seed(seed: int, trial: int, n: int, stream: int = NOISE_STREAM) -> int:
    return int(trial_sequence(seed, trial, n, stream).generate_state(1, dtype=np.uint64)[0])


def _uniform_disk(rng: np.random.Generator, n: int) -> np.ndarray:
    accepted = np.empty((0, 2))
    while accepted.shape[0] < n:
        batch = rng.uniform(-1.0, 1.0, size=(2 * (n - accepted.shape[0]) + 8, 2))
        batch = batch[(batch ** 2).sum(axis=1) <= 1.0]
        accepted = np.vstack([accepted, batch])
    return accepted[:n]


def _directions(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    normals = rng.standard_normal((n, k))
    norms = np.linalg.norm(normals, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return normals / norms


def _uniform_ball(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    radii = rng.uniform(0.0, 1.0, size=(n, 1)) ** (1.0 / k)
    return _directions(rng, n, k) * radii


def _annulus(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    inner = ANNULUS_INNER ** k
    radii = rng.uniform(inner, 1.0, size=(n, 1)) ** (1.0 / k)
    return _directions(rng, n, k) * radii


def _grid(n: int, k: int) -> np.ndarray:
    side = 1
    while side ** k < n:
        side += 1
    half = 1.0 / np.sqrt(k)
    axis = np.linspace(-half, half, side) if side > 1 else np.zeros(1)
    mesh = np.meshgrid(*([axis] * k), indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])[:n]


def _curve(rng: np.random.Generator, n: int, lobe: float) -> np.ndarray:
    # three-fold symmetry makes the second-moment tensor isotropic
    phase = rng.uniform(0.0, 2.0 * np.pi)
    theta = phase + 2.0 * np.pi * np.arange(n) / n
    radius = (1.0 + lobe * np.cos(3.0 * theta)) / (1.0 + lobe)
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def generator_params(config: ExperimentConfig) -> Dict[str, Any]:
    """Generator parameters recorded in reports."""
    if config.generator is Generator.CURVE_CARDIOID:
        return {"lobe": CARDIOID_LOBE, "symmetry": 3, "generator_params_chosen": True}
    if config.generator is Generator.ANNULUS:
        return {"inner_radius": ANNULUS_INNER, "outer_radius": 1.0}
    return {"radius": 1.0}


def generate(config: ExperimentConfig, n: Optional[int] = None, trial: int = 0) -> PointCloud:
    """Deterministic cloud for (config.seed, trial, n) within radius 1 of the origin."""
    n = config.n_list[0] if n is None else int(n)
    k = config.k
    if n < 1:
        raise GeometryError(f"cannot generate {n} points")
    rng = np.random.default_rng(trial_sequence(config.seed, trial, n, CLOUD_STREAM))
    kind = Generator(config.generator)

    if kind is Generator.UNIFORM_DISK:
        if k != 2:
            raise DimensionMismatchError("uniform-disk is planar")
        points = _uniform_disk(rng, n)
    elif kind is Generator.UNIFORM_BALL:
        points = _uniform_ball(rng, n, k)
    elif kind is Generator.GRID:
        points = _grid(n, k)
    elif kind is Generator.ANNULUS:
        points = _annulus(rng, n, k)
    elif kind is Generator.CURVE_CARDIOID:
        if k != 2:
            raise DimensionMismatchError("curve-cardioid is planar")
        points = _curve(rng, n, CARDIOID_LOBE)
    else:
        raise GeometryError(f"unknown generator '{config.generator}'")

    logger.debug(f"Generated {kind.value} cloud: n={n}, k={k}, trial={trial}")
    return PointCloud(points)
