from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import DEFAULT_EXPONENTIAL_RATE, DEFAULT_SAMPLES, DEFAULT_THRESHOLD, PLATEAU_LEVEL_TOL
from models.distribution_model import DistributionKind, GreedyOrder


class GhzJunkMode(str, Enum):
    AVERAGED = "averaged"
    SCENARIO_A = "scenario-a"
    SCENARIO_B = "scenario-b"
    SCENARIO_C = "scenario-c"


class IcnotMode(str, Enum):
    AVERAGED = "averaged"
    MAX = "max"
    MIN = "min"
    SUBSET = "subset"


class ExperimentConfig(BaseModel):
    """Options shared by every command; validated before anything is computed."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    out: str = "-"
    report: Optional[str] = None
    threshold: float = Field(default=DEFAULT_THRESHOLD, gt=0.0, le=1.0)
    # plateau level in the report: units of S(rho_S) when set, nats otherwise
    normalize: bool = True


class GhzJunkExperiment(ExperimentConfig):
    n: int = Field(ge=1)
    m: int = Field(ge=0)
    mode: GhzJunkMode = GhzJunkMode.AVERAGED
    stride: int = Field(default=1, ge=1)
    # weigh fractions holding every correlated qubit by 2S instead of 0
    count_full: bool = False

    @model_validator(mode="after")
    def _m_fits(self):
        if self.m > self.n:
            raise ValueError(f"--m {self.m} exceeds --n {self.n}")
        return self


class IcnotExperiment(ExperimentConfig):
    n: int = Field(ge=1)
    dist: DistributionKind = DistributionKind.FLAT
    rate: float = Field(default=DEFAULT_EXPONENTIAL_RATE, gt=0.0)
    p_file: Optional[str] = None
    # subset mode only: where to save the drawn flip probabilities
    p_out: Optional[str] = None
    samples: int = Field(default=DEFAULT_SAMPLES, ge=2)
    seed: Optional[int] = Field(default=None, ge=0)
    mode: IcnotMode = IcnotMode.AVERAGED
    order: GreedyOrder = GreedyOrder.DESCENDING

    @model_validator(mode="after")
    def _fixed_needs_file(self):
        if self.dist is DistributionKind.FIXED and not self.p_file:
            raise ValueError("--dist fixed needs --p-file")
        if self.p_out and self.mode is not IcnotMode.SUBSET:
            raise ValueError("--p-out only applies to --mode subset")
        return self


class ValidateExperiment(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_max: int = Field(default=10, ge=1, le=14)
    cases: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)


class ReportExperiment(ExperimentConfig):
    curve: str
    s_system: float = Field(gt=0.0)
    n: Optional[int] = Field(default=None, ge=1)
    level_tol: float = Field(default=PLATEAU_LEVEL_TOL, gt=0.0)
