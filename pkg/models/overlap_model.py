from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from config.settings import PROBABILITY_TOL
from utils.validators import check_indices, check_probability


class OverlapVector(BaseModel):
    """Per-qubit branch overlaps o_k = |<a_k|b_k>| of a two-branch state.

    o_k = 0 marks a qubit perfectly correlated with the system, o_k = 1 a junk
    qubit. Every mutual information quantity of the state depends on these only.
    """

    model_config = ConfigDict(frozen=True)

    overlaps: Tuple[float, ...]

    @field_validator("overlaps")
    @classmethod
    def _check_overlaps(cls, values):
        if len(values) < 1:
            raise ValueError("an environment needs at least one qubit")
        return tuple(check_probability(v, PROBABILITY_TOL, "overlap") for v in values)

    @property
    def n(self):
        return len(self.overlaps)

    def as_array(self):
        return np.asarray(self.overlaps, dtype=float)

    def is_symmetric(self):
        return len(set(self.overlaps)) == 1

    def is_ghz_junk(self):
        return all(v in (0.0, 1.0) for v in self.overlaps)


class FractionSelection(BaseModel):
    """A subset E_K of environment-qubit indices."""

    model_config = ConfigDict(frozen=True)

    indices: Tuple[int, ...]

    @field_validator("indices")
    @classmethod
    def _no_duplicates(cls, values):
        if len(set(values)) != len(values):
            raise ValueError("fraction indices must be distinct")
        if any(v < 0 for v in values):
            raise ValueError("fraction indices must be nonnegative")
        return tuple(sorted(values))

    @classmethod
    def of(cls, *indices):
        return cls(indices=tuple(indices))

    @classmethod
    def full(cls, n):
        return cls(indices=tuple(range(n)))

    def __len__(self):
        return len(self.indices)

    def validate_for(self, n):
        """Raise SelectionError unless every index is valid for N = n."""
        check_indices(self.indices, n)
        return self

    def complement(self, n):
        self.validate_for(n)
        chosen = set(self.indices)
        return FractionSelection(indices=tuple(k for k in range(n) if k not in chosen))

    def mask(self, n):
        self.validate_for(n)
        out = np.zeros(n, dtype=bool)
        out[list(self.indices)] = True
        return out


class PVector(BaseModel):
    """Per-qubit iCNOT flip probabilities p_i."""

    model_config = ConfigDict(frozen=True)

    probs: Tuple[float, ...]

    @field_validator("probs")
    @classmethod
    def _check_probs(cls, values):
        if len(values) < 1:
            raise ValueError("an environment needs at least one qubit")
        return tuple(check_probability(v, PROBABILITY_TOL, "p") for v in values)

    @property
    def n(self):
        return len(self.probs)

    def as_array(self):
        return np.asarray(self.probs, dtype=float)

    def to_text(self):
        return "".join(f"{v!r}\n" for v in self.probs)


class GhzJunkConfig(BaseModel):
    """N environment qubits, the first m perfectly correlated, the rest junk."""

    model_config = ConfigDict(frozen=True)

    n_total: int
    n_correlated: int

    @model_validator(mode="after")
    def _check_sizes(self):
        if self.n_total < 1:
            raise ValueError(f"n_total must be positive, got {self.n_total}")
        if not 0 <= self.n_correlated <= self.n_total:
            raise ValueError(
                f"n_correlated must lie in [0, {self.n_total}], got {self.n_correlated}"
            )
        return self
