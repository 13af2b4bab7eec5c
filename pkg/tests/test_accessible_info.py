import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.accessible_info import (
    accessible_mi,
    accessible_mi_from_half_product,
    averaged_accessible_curve,
    biased_accessible_curve,
    draw_pvector,
    ordered_accessible_curve,
    p_half_product,
    restrict_to_environment,
    sample_probs,
    subset_averaged_accessible_curve,
)
from core.branch_model import icnot_overlaps, qmi_exact
from core.entropy_core import LN2
from core.oracle import build_state_icnot, classical_mi_brute, computational_joint, three_outcome_joint
from models.distribution_model import AveragingStrategy, DrawPlan, PDistribution
from models.overlap_model import FractionSelection, PVector
from utils.validators import DomainError

probabilities = st.floats(min_value=0.0, max_value=1.0)


@st.composite
def pvector_and_selection(draw, max_n=6):
    values = draw(st.lists(probabilities, min_size=1, max_size=max_n))
    chosen = draw(st.sets(st.integers(0, len(values) - 1)))
    return PVector(probs=tuple(values)), FractionSelection(indices=tuple(chosen))


class TestClosedForm:
    def test_empty_fraction_carries_nothing(self, small_pvector):
        assert accessible_mi(small_pvector, FractionSelection.of()) == pytest.approx(0.0, abs=1e-15)

    def test_perfect_record(self):
        p = PVector(probs=(1.0, 0.2))
        assert accessible_mi(p, FractionSelection.of(0)) == pytest.approx(LN2, abs=1e-15)

    def test_quarter(self):
        # P = 1/4: ln2/2 + 1/4 ln 1/4 - 3/4 ln 3/4
        assert accessible_mi_from_half_product(0.25) == pytest.approx(0.75 * math.log(4 / 3), rel=1e-12)

    def test_half_product(self, small_pvector):
        sel = FractionSelection.of(0, 2)
        assert p_half_product(small_pvector, sel) == pytest.approx(0.5 * 0.1 * 0.5)

    def test_vectorised(self):
        values = accessible_mi_from_half_product(np.array([0.0, 0.25, 0.5]))
        np.testing.assert_allclose(values, [LN2, 0.75 * math.log(4 / 3), 0.0], atol=1e-15)

    @given(st.floats(min_value=0.0, max_value=0.5))
    def test_matches_three_outcome_classical_mi(self, half_product):
        expected = classical_mi_brute(three_outcome_joint(half_product))
        assert accessible_mi_from_half_product(half_product) == pytest.approx(expected, abs=1e-12)

    @given(pvector_and_selection())
    def test_never_exceeds_quantum_mutual_information(self, case):
        p, sel = case
        assert accessible_mi(p, sel) <= qmi_exact(icnot_overlaps(p), sel) + 1e-9

    @settings(max_examples=25, deadline=None)
    @given(pvector_and_selection(max_n=5))
    def test_matches_measured_statevector(self, case):
        p, sel = case
        joint = computational_joint(build_state_icnot(p), sel)
        assert accessible_mi(p, sel) == pytest.approx(classical_mi_brute(joint), abs=1e-9)


class TestDistributions:
    def test_flat_draws(self):
        rng = np.random.default_rng(0)
        values = sample_probs(PDistribution.flat(), rng, (20_000,))
        assert values.min() >= 0.0 and values.max() <= 1.0
        assert values.mean() == pytest.approx(0.5, abs=0.01)

    def test_truncated_exponential_draws(self):
        rate = 2.0
        rng = np.random.default_rng(1)
        values = sample_probs(PDistribution.exponential(rate), rng, (50_000,))
        assert values.min() >= 0.0 and values.max() <= 1.0
        expected = 1 / rate - math.exp(-rate) / (1 - math.exp(-rate))
        assert values.mean() == pytest.approx(expected, abs=0.01)

    def test_fixed_values_repeat(self):
        dist = PDistribution.fixed([0.1, 0.2, 0.3])
        values = sample_probs(dist, np.random.default_rng(0), (4, 3))
        np.testing.assert_array_equal(values, np.tile([0.1, 0.2, 0.3], (4, 1)))

    def test_restrict_fixed_distribution(self):
        dist = restrict_to_environment(PDistribution.fixed([0.1, 0.2, 0.3]), 2)
        assert dist.values.probs == (0.1, 0.2)
        with pytest.raises(DomainError):
            restrict_to_environment(PDistribution.fixed([0.1]), 2)

    def test_draw_pvector_is_seeded(self):
        a = draw_pvector(PDistribution.flat(), 8, seed=4)
        b = draw_pvector(PDistribution.flat(), 8, seed=4)
        assert a == b
        assert a.n == 8


class TestCurves:
    plan = DrawPlan(n_draws=3000, seed=9)

    def test_fresh_draw_curve_shape(self):
        curve = averaged_accessible_curve(PDistribution.flat(), 20, self.plan)
        assert curve.ls() == list(range(21))
        assert curve.point(0).mi_nats == 0.0
        assert curve.system_entropy_nats == LN2
        mis = curve.values()
        assert all(b >= a - 1e-12 for a, b in zip(mis, mis[1:]))
        assert all(p.samples == 3000 for p in curve.points)
        assert curve.point(5).stderr > 0

    def test_fresh_draw_curve_independent_of_threads(self):
        one = averaged_accessible_curve(PDistribution.flat(), 20, self.plan, threads=1)
        many = averaged_accessible_curve(PDistribution.flat(), 20, self.plan, threads=4)
        assert one == many

    def test_perfect_records_pin_the_curve(self):
        dist = PDistribution.fixed([1.0] * 6)
        curve = averaged_accessible_curve(dist, 6, DrawPlan(n_draws=10, seed=0))
        assert [p.mi_nats for p in curve.points[1:]] == pytest.approx([LN2] * 6, abs=1e-15)
        assert all(p.stderr == 0.0 for p in curve.points)

    def test_biased_curves_bracket(self):
        top = biased_accessible_curve(PDistribution.flat(), 20, self.plan, "max")
        bottom = biased_accessible_curve(PDistribution.flat(), 20, self.plan, "min")
        for high, low in zip(top.points, bottom.points):
            assert high.mi_nats >= low.mi_nats - 1e-12
        assert top.point(20).mi_nats == pytest.approx(bottom.point(20).mi_nats, abs=1e-12)

    def test_ordered_curve(self):
        p = PVector(probs=(1.0, 0.0, 0.0))
        curve = ordered_accessible_curve(p, order=[1, 2, 0])
        assert curve.values() == pytest.approx([0.0, 0.0, 0.0, LN2], abs=1e-15)
        with pytest.raises(DomainError):
            ordered_accessible_curve(p, order=[0, 0, 1])

    def test_subset_average_enumerated(self):
        p = PVector(probs=(1.0, 0.0, 0.0, 0.0))
        curve = subset_averaged_accessible_curve(p, AveragingStrategy.enumerate())
        assert curve.exact
        assert curve.point(1).mi_nats == pytest.approx(LN2 / 4, abs=1e-15)
        assert curve.point(2).mi_nats == pytest.approx(LN2 / 2, abs=1e-15)
        assert curve.point(2).samples == 6

    def test_subset_average_sampled_agrees(self):
        p = draw_pvector(PDistribution.flat(), 12, seed=2)
        exact = subset_averaged_accessible_curve(p, AveragingStrategy.enumerate())
        sampled = subset_averaged_accessible_curve(p, AveragingStrategy.sample(4000, seed=6))
        assert not sampled.exact
        for l in range(1, 12):
            point = sampled.point(l)
            assert abs(point.mi_nats - exact.point(l).mi_nats) <= 5 * point.stderr + 1e-12
