from enum import Enum
from typing import List, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

CSV_COLUMNS = ["l", "f", "mi_nats", "mi_normalized", "stderr", "samples"]


class MiPoint(BaseModel):
    """One point of a mutual-information-vs-fraction curve."""

    model_config = ConfigDict(frozen=True)

    l: int = Field(ge=0)
    f: float
    mi_nats: float
    mi_normalized: float
    stderr: float = Field(default=0.0, ge=0.0)
    samples: int = Field(default=1, ge=1)


class MiCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    system_entropy_nats: float = Field(ge=0.0)
    points: Tuple[MiPoint, ...]
    exact: bool = True

    @model_validator(mode="after")
    def _check_points(self):
        previous = -1
        for point in self.points:
            if point.l <= previous:
                raise ValueError("curve points must have strictly increasing l")
            if point.l > self.n:
                raise ValueError(f"curve point l={point.l} exceeds N={self.n}")
            previous = point.l
        return self

    @classmethod
    def build(cls, n, system_entropy_nats, rows, exact):
        """Assemble a curve from (l, mi_nats, stderr, samples) tuples."""
        points = [
            MiPoint(
                l=l,
                f=l / n,
                mi_nats=mi,
                mi_normalized=normalize(mi, system_entropy_nats),
                stderr=stderr,
                samples=samples,
            )
            for l, mi, stderr, samples in rows
        ]
        return cls(n=n, system_entropy_nats=system_entropy_nats, points=tuple(points), exact=exact)

    def ls(self):
        return [p.l for p in self.points]

    def values(self):
        return [p.mi_nats for p in self.points]

    def point(self, l):
        for p in self.points:
            if p.l == l:
                return p
        raise KeyError(l)

    def to_frame(self):
        return pd.DataFrame([p.model_dump() for p in self.points], columns=CSV_COLUMNS)

    @classmethod
    def from_frame(cls, frame, n, system_entropy_nats):
        rows = [
            (int(r.l), float(r.mi_nats), float(r.stderr), int(r.samples))
            for r in frame.itertuples(index=False)
        ]
        exact = bool((frame["stderr"] == 0).all()) if len(frame) else True
        return cls.build(n, system_entropy_nats, rows, exact)


def normalize(mi_nats, system_entropy_nats):
    """mi / S(rho_S); left in nats when the system is pure."""
    if system_entropy_nats > 0:
        return mi_nats / system_entropy_nats
    return mi_nats


class ScenarioKind(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    EXPLICIT = "explicit"


class ScenarioOrdering(BaseModel):
    """Order in which qubits join a nested fraction."""

    model_config = ConfigDict(frozen=True)

    kind: ScenarioKind
    order: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_permutation(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("ordering must be a permutation of 0..N-1")
        return self

    @classmethod
    def builtin(cls, kind, n_total, n_correlated):
        """A: correlated first. B: junk first. C: one correlated, the junk, then the rest."""
        kind = ScenarioKind(kind)
        correlated = list(range(n_correlated))
        junk = list(range(n_correlated, n_total))
        if kind is ScenarioKind.A:
            order = correlated + junk
        elif kind is ScenarioKind.B:
            order = junk + correlated
        elif kind is ScenarioKind.C:
            order = correlated[:1] + junk + correlated[1:]
        else:
            raise ValueError("explicit orderings need an order, use ScenarioOrdering.explicit")
        return cls(kind=kind, order=tuple(order))

    @classmethod
    def explicit(cls, order: List[int]):
        return cls(kind=ScenarioKind.EXPLICIT, order=tuple(order))
