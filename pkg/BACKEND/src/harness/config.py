"""Validated experiment configuration."""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.defaults import HARNESS_CONFIG, NOISE_CONFIG
from ..graph.anchor_graph import LocalStrategy


class Generator(str, Enum):
    UNIFORM_DISK = "uniform-disk"
    UNIFORM_BALL = "uniform-ball"
    GRID = "grid"
    ANNULUS = "annulus"
    CURVE_CARDIOID = "curve-cardioid"


PLANAR_GENERATORS = (Generator.UNIFORM_DISK, Generator.CURVE_CARDIOID)


class ExperimentConfig(BaseModel):
    """One experiment: which clouds, at which sizes, under which noise, how many times."""

    generator: Generator = Generator(HARNESS_CONFIG.get('default_generator', 'uniform-disk'))
    n_list: List[int] = Field(default_factory=lambda: [100, 200, 400])
    k: int = Field(default=2, ge=1)
    sigma: float = Field(default=float(NOISE_CONFIG.get('default_sigma', 0.0)), ge=0)
    trials: int = Field(default=int(HARNESS_CONFIG.get('default_trials', 5)), ge=1)
    seed: int = Field(default=int(NOISE_CONFIG.get('default_seed', 0)), ge=0, lt=2 ** 64)
    strategy: LocalStrategy = LocalStrategy.NEAREST
    zeta: float = Field(default=float(HARNESS_CONFIG.get('default_zeta', 0.4)), gt=0, lt=0.5)
    output_path: Optional[str] = None
    debias: bool = True
    rho: Optional[int] = Field(default=None, ge=3)
    workers: int = Field(default=int(HARNESS_CONFIG.get('workers', 0)), ge=0)

    @field_validator("n_list")
    @classmethod
    def _ascending(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("n_list must not be empty")
        if any(n < 1 for n in value):
            raise ValueError("every n must be positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("n_list must be strictly ascending")
        return value

    @model_validator(mode="after")
    def _dimension_fits_generator(self) -> "ExperimentConfig":
        if self.generator in PLANAR_GENERATORS and self.k != 2:
            raise ValueError(f"generator {self.generator.value} is planar, got k={self.k}")
        if self.strategy is LocalStrategy.STABLE2D and self.k != 2:
            raise ValueError("stable2d strategy needs k=2")
        return self

    def report_fields(self) -> Dict[str, Any]:
        """Fields that determine results; worker count and output location do not."""
        return self.model_dump(mode="json", exclude={"workers", "output_path"})
