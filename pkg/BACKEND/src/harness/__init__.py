"""Experiment Harness Package."""

from .config import ExperimentConfig, Generator
from .experiments import (
    EXPERIMENTS,
    ExperimentResult,
    run_cost_scaling,
    run_debias_comparison,
    run_degenerate_gap,
    run_noise_norm_growth,
    run_noise_scaling,
    run_reconstruction_comparison,
)
from .fitting import ScalingFit, fit_scaling
from .generators import generate
from .reporting import write_report

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentResult",
    "Generator",
    "ScalingFit",
    "fit_scaling",
    "generate",
    "run_cost_scaling",
    "run_debias_comparison",
    "run_degenerate_gap",
    "run_noise_norm_growth",
    "run_noise_scaling",
    "run_reconstruction_comparison",
    "write_report",
]
