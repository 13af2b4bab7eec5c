import pytest

from core.entropy_core import LN2
from models.curve_model import MiCurve
from models.overlap_model import GhzJunkConfig, OverlapVector, PVector


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    monkeypatch.setenv("QDARWIN_THREADS", "1")


@pytest.fixture
def ghz_10_3():
    return GhzJunkConfig(n_total=10, n_correlated=3)


@pytest.fixture
def mixed_overlaps():
    return OverlapVector(overlaps=(0.0, 0.3, 0.7, 1.0, 0.45))


@pytest.fixture
def small_pvector():
    return PVector(probs=(0.9, 0.25, 0.5, 0.05))


@pytest.fixture
def make_curve():
    """Exact curve whose point l carries values[l] * s_system nats."""

    def build(values, s_system=LN2):
        rows = [(l, v * s_system, 0.0, 1) for l, v in enumerate(values)]
        return MiCurve.build(len(values) - 1, s_system, rows, exact=True)

    return build
