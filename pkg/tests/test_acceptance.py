"""Statistical checks of consensus and redundancy on large sampled environments."""

import pytest

from core.accessible_info import averaged_accessible_curve, biased_accessible_curve
from core.branch_model import ghz_junk_overlaps
from core.entropy_core import LN2
from core.experiment_service import ExperimentService
from core.fraction_average import averaged_qmi_enumerated, ghz_junk_averaged_closed_form
from core.objectivity_metrics import consensus_from_curve, redundancy_mean
from models.distribution_model import DrawPlan, PDistribution
from models.experiment_model import ValidateExperiment
from models.overlap_model import GhzJunkConfig

pytestmark = pytest.mark.slow

FLAT_PLAN = DrawPlan(n_draws=10_000, seed=2024)


def consensus(curve):
    return consensus_from_curve(curve, LN2)[1]


class TestFlatDistribution:
    def test_averaged_consensus(self):
        curve = averaged_accessible_curve(PDistribution.flat(), 100, FLAT_PLAN)
        assert 10 <= consensus(curve) <= 12

    def test_greedy_redundancy(self):
        # each fraction must push P down to about 1e-3, so roughly 16 fit at most
        mean, stderr = redundancy_mean(PDistribution.flat(), 100, FLAT_PLAN)
        assert 13.0 <= mean <= 14.0
        assert stderr < 0.05

    def test_greedy_redundancy_exceeds_consensus(self):
        curve = averaged_accessible_curve(PDistribution.flat(), 100, FLAT_PLAN)
        mean, _ = redundancy_mean(PDistribution.flat(), 100, FLAT_PLAN)
        assert mean > consensus(curve)

    def test_most_informative_first(self):
        curve = biased_accessible_curve(PDistribution.flat(), 100, FLAT_PLAN, "max")
        assert 45 <= consensus(curve) <= 55

    def test_least_informative_first(self):
        curve = biased_accessible_curve(PDistribution.flat(), 100, FLAT_PLAN, "min")
        assert 1 <= consensus(curve) <= 3


@pytest.mark.parametrize("rate", [2.0, 3.0, 5.0, 10.0])
def test_exponential_redundancy_exceeds_consensus(rate):
    dist = PDistribution.exponential(rate)
    plan = DrawPlan(n_draws=10_000, seed=7)
    curve = averaged_accessible_curve(dist, 100, plan)
    mean, _ = redundancy_mean(dist, 100, plan)
    assert mean > consensus(curve)
    assert mean < 12


def test_default_validation_passes():
    checks = ExperimentService().run_validate(ValidateExperiment())
    failed = [check.name for check in checks if not check.passed]
    assert failed == []


def test_full_weighting_matches_enumeration_up_to_twelve():
    for n in range(1, 13):
        for m in range(n + 1):
            cfg = GhzJunkConfig(n_total=n, n_correlated=m)
            ov = ghz_junk_overlaps(cfg)
            for l in range(1, n):
                enumerated, _ = averaged_qmi_enumerated(ov, l)
                closed = ghz_junk_averaged_closed_form(cfg, l, count_full=True)
                assert closed == pytest.approx(enumerated, abs=1e-12)
