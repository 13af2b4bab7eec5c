from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import DEFAULT_EXPONENTIAL_RATE, DEFAULT_SAMPLES
from models.overlap_model import PVector


class DistributionKind(str, Enum):
    FLAT = "flat"
    EXPONENTIAL = "exp"
    FIXED = "fixed"


class PDistribution(BaseModel):
    """Source of iCNOT flip probabilities.

    flat is U(0, 1); exp has density proportional to exp(-rate * p) restricted
    to [0, 1]; fixed always returns the same values.
    """

    model_config = ConfigDict(frozen=True)

    kind: DistributionKind
    rate: float = DEFAULT_EXPONENTIAL_RATE
    values: Optional[PVector] = None

    @model_validator(mode="after")
    def _check_kind(self):
        if self.kind is DistributionKind.EXPONENTIAL and not self.rate > 0:
            raise ValueError(f"exponential rate must be positive, got {self.rate}")
        if self.kind is DistributionKind.FIXED and self.values is None:
            raise ValueError("a fixed distribution needs values")
        return self

    @classmethod
    def flat(cls):
        return cls(kind=DistributionKind.FLAT)

    @classmethod
    def exponential(cls, rate=DEFAULT_EXPONENTIAL_RATE):
        return cls(kind=DistributionKind.EXPONENTIAL, rate=rate)

    @classmethod
    def fixed(cls, values):
        if not isinstance(values, PVector):
            values = PVector(probs=tuple(values))
        return cls(kind=DistributionKind.FIXED, values=values)

    def describe(self):
        if self.kind is DistributionKind.EXPONENTIAL:
            return f"exp(rate={self.rate!r})"
        return self.kind.value


class DrawPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_draws: int = Field(default=DEFAULT_SAMPLES, ge=1)
    seed: int = Field(default=0, ge=0)


class StrategyKind(str, Enum):
    AUTO = "auto"
    ENUMERATE = "enumerate"
    SAMPLE = "sample"


class AveragingStrategy(BaseModel):
    """How an averaged curve visits the subsets of each size."""

    model_config = ConfigDict(frozen=True)

    kind: StrategyKind = StrategyKind.AUTO
    n_samples: int = Field(default=DEFAULT_SAMPLES, ge=2)
    seed: int = Field(default=0, ge=0)
    # evaluate every `stride`-th l (endpoints always included)
    stride: int = Field(default=1, ge=1)

    @classmethod
    def sample(cls, n_samples, seed, stride=1):
        return cls(kind=StrategyKind.SAMPLE, n_samples=n_samples, seed=seed, stride=stride)

    @classmethod
    def enumerate(cls, stride=1):
        return cls(kind=StrategyKind.ENUMERATE, stride=stride)

    def grid(self, n) -> Tuple[int, ...]:
        ls = list(range(0, n + 1, self.stride))
        if ls[-1] != n:
            ls.append(n)
        return tuple(ls)


class BiasMode(str, Enum):
    MAX = "max"
    MIN = "min"


class GreedyOrder(str, Enum):
    DESCENDING = "descending"
    ASCENDING = "ascending"
    GIVEN = "given"
