from enum import Enum
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, NonNegativeInt, model_validator


class RedundancyKind(str, Enum):
    EXACT = "exact"
    GREEDY_LOWER_BOUND = "greedy_lower_bound"


class ObjectivityReport(BaseModel):
    """Headline numbers of one experiment plus the provenance needed to rerun it."""

    model_config = ConfigDict(frozen=True)

    model: str
    n: int = Field(ge=1)
    m: Optional[int] = None
    distribution: Optional[str] = None
    threshold: float = Field(gt=0.0, le=1.0)
    f0: float = Field(gt=0.0, le=1.0)
    consensus: int = Field(ge=1)
    # an int when exact, a mean or bound otherwise
    redundancy: Union[NonNegativeInt, NonNegativeFloat]
    redundancy_stderr: float = Field(default=0.0, ge=0.0)
    redundancy_kind: RedundancyKind
    seed: Optional[int] = None
    n_draws: Optional[int] = None
    mode: Optional[str] = None
    system_entropy_nats: float = Field(ge=0.0)
    plateau_present: bool = False
    plateau_start_l: Optional[int] = None
    plateau_end_l: Optional[int] = None
    plateau_level: Optional[float] = None
    plateau_level_unit: str = "normalized"

    @model_validator(mode="after")
    def _consensus_matches_f0(self):
        expected = int((1.0 / self.f0) + 1e-9)
        if self.consensus != expected:
            raise ValueError(f"consensus {self.consensus} != floor(1/f0) = {expected}")
        return self

    @model_validator(mode="after")
    def _exact_redundancy_is_whole(self):
        if self.redundancy_kind is RedundancyKind.EXACT and not isinstance(self.redundancy, int):
            raise ValueError(f"exact redundancy must be an integer, got {self.redundancy!r}")
        return self


class PlateauReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    present: bool
    start_l: Optional[int] = None
    end_l: Optional[int] = None
    level_normalized: Optional[float] = None

    @model_validator(mode="after")
    def _ordered(self):
        if self.present and not (self.start_l is not None and self.end_l is not None
                                 and self.start_l <= self.end_l):
            raise ValueError("a present plateau needs start_l <= end_l")
        return self

    @property
    def width(self):
        if not self.present:
            return 0
        return self.end_l - self.start_l + 1


class DiscordExcess(BaseModel):
    """Excess of a fraction's QMI over S(rho_S) and the bound it puts on the rest."""

    model_config = ConfigDict(frozen=True)

    delta: float
    complement_bound: float


class ValidationCheck(BaseModel):
    """Outcome of one closed-form-versus-oracle cross-check."""

    name: str
    cases: int = 0
    max_error: float = 0.0
    tolerance: float
    passed: bool = True
    first_failure: Optional[Dict[str, Any]] = None

    def record(self, error, inputs):
        self.cases += 1
        self.max_error = max(self.max_error, float(error))
        if error > self.tolerance and self.passed:
            self.passed = False
            self.first_failure = {"error": float(error), **inputs}
