"""Computational-basis (accessible) information for the imperfect-CNOT model.

Measuring the system and l environment qubits in the computational basis has
three outcome classes: (0, 0...0) with probability 1/2, (1, 0...0) with
P = 1/2 prod(1 - p_i), and (1, anything else) with 1/2 - P. Their classical
mutual information is

    I_acc = ln(2)/2 + P ln P - (1/2 + P) ln(1/2 + P).
"""

import logging
import numpy as np
from scipy.special import comb, xlogy

from config.settings import ENUMERATION_BUDGET
from core.entropy_core import LN2
from core.fraction_average import iter_subset_batches
from models.curve_model import MiCurve
from models.distribution_model import (
    AveragingStrategy,
    BiasMode,
    DistributionKind,
    PDistribution,
    StrategyKind,
)
from models.overlap_model import FractionSelection, PVector
from utils.streams import map_chunks, partial_fisher_yates, stats
from utils.validators import BudgetExceededError, DomainError, check_fraction_size

logger = logging.getLogger(__name__)

# stream tags, kept apart so the estimators never share random numbers
FRESH_STREAM = 1
BIASED_STREAM = 2
SUBSET_STREAM = 3


def p_half_product(p: PVector, sel: FractionSelection) -> float:
    sel.validate_for(p.n)
    result = 0.5
    for i in sel.indices:
        result *= 1.0 - p.probs[i]
    return result


def accessible_mi_from_half_product(P):
    """Eq. (7) as a function of P, vectorised, with 0 ln 0 = 0."""
    P = np.clip(np.asarray(P, dtype=float), 0.0, 0.5)
    value = 0.5 * LN2 + xlogy(P, P) - xlogy(0.5 + P, 0.5 + P)
    return np.clip(value, 0.0, LN2)


def accessible_mi(p: PVector, sel: FractionSelection) -> float:
    return float(accessible_mi_from_half_product(p_half_product(p, sel)))


def draw_pvector(dist: PDistribution, n, seed) -> PVector:
    if n < 1:
        raise DomainError(f"need at least one qubit, got n={n}")
    if dist.kind is DistributionKind.FIXED:
        return dist.values
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return PVector(probs=tuple(sample_probs(dist, rng, (n,)).tolist()))


def sample_probs(dist: PDistribution, rng, shape):
    """Array of flip probabilities of the given shape.

    The exponential kind inverts the CDF of exp(-rate p) truncated to [0, 1]:
    p = -ln(1 - u (1 - e^-rate)) / rate.
    """
    if dist.kind is DistributionKind.FIXED:
        values = dist.values.as_array()
        if shape[-1] != values.size:
            raise DomainError(f"fixed distribution has {values.size} values, asked for {shape[-1]}")
        return np.broadcast_to(values, shape).copy()
    u = rng.random(shape)
    if dist.kind is DistributionKind.FLAT:
        return u
    rate = dist.rate
    return np.clip(-np.log1p(-u * -np.expm1(-rate)) / rate, 0.0, 1.0)


def _draw_environments(dist, n_env, plan, key, threads):
    """plan.n_draws environments of n_env probabilities, as a (draws, n_env) array."""

    def draw(rng, size):
        return sample_probs(dist, rng, (size, n_env))

    return map_chunks(draw, plan.seed, key, plan.n_draws, threads=threads)


def restrict_to_environment(dist, n_env):
    check_fraction_size(n_env, n_env, minimum=1)
    if dist.kind is not DistributionKind.FIXED:
        return dist
    if dist.values.n < n_env:
        raise DomainError(f"fixed distribution has {dist.values.n} values, N={n_env}")
    return PDistribution.fixed(dist.values.probs[:n_env])


def _curve_from_draws(n_env, per_draw):
    """per_draw has shape (draws, n_env + 1) of accessible information at each l."""
    rows = [(0, 0.0, 0.0, per_draw.shape[0])]
    for l in range(1, n_env + 1):
        mean, stderr = stats(per_draw[:, l])
        rows.append((l, mean, stderr, per_draw.shape[0]))
    return MiCurve.build(n_env, LN2, rows, exact=per_draw.shape[0] == 1)


def _prefix_half_products(probs):
    ones = np.ones((probs.shape[0], 1))
    return 0.5 * np.concatenate([ones, np.cumprod(1.0 - probs, axis=1)], axis=1)


def averaged_accessible_curve(dist: PDistribution, n_env, plan, threads=None) -> MiCurve:
    """Fresh-draw average: each draw supplies new i.i.d. p values for every l.

    One draw of n_env values feeds every l through its first l entries, so each
    l sees plan.n_draws independent fractions.
    """
    dist = restrict_to_environment(dist, n_env)
    probs = _draw_environments(dist, n_env, plan, (FRESH_STREAM,), threads)
    per_draw = accessible_mi_from_half_product(_prefix_half_products(probs))
    logger.debug("averaged_accessible_curve: %s N=%d draws=%d", dist.describe(), n_env, plan.n_draws)
    return _curve_from_draws(n_env, per_draw)


def biased_accessible_curve(dist: PDistribution, n_env, plan, mode, threads=None) -> MiCurve:
    """Per draw, the l most (max) or least (min) correlated of n_env qubits."""
    mode = BiasMode(mode)
    dist = restrict_to_environment(dist, n_env)
    probs = _draw_environments(dist, n_env, plan, (BIASED_STREAM,), threads)
    probs = np.sort(probs, axis=1)
    if mode is BiasMode.MAX:
        probs = probs[:, ::-1]
    per_draw = accessible_mi_from_half_product(_prefix_half_products(probs))
    return _curve_from_draws(n_env, per_draw)


def ordered_accessible_curve(p: PVector, order=None) -> MiCurve:
    """Non-averaged accessible information along nested fractions of one environment."""
    order = list(range(p.n)) if order is None else list(order)
    if sorted(order) != list(range(p.n)):
        raise DomainError("order must be a permutation of the qubit indices")
    probs = p.as_array()[order][np.newaxis, :]
    per_draw = accessible_mi_from_half_product(_prefix_half_products(probs))
    rows = [(l, float(per_draw[0, l]), 0.0, 1) for l in range(p.n + 1)]
    return MiCurve.build(p.n, LN2, rows, exact=True)


def subset_averaged_accessible_curve(p: PVector, strategy=None, budget=ENUMERATION_BUDGET,
                                     threads=None) -> MiCurve:
    """Average over size-l subsets of one fixed environment instead of fresh draws."""
    strategy = strategy or AveragingStrategy()
    n = p.n
    keep = 1.0 - p.as_array()
    rows = [(0, 0.0, 0.0, 1)]
    exact = True
    for l in strategy.grid(n)[1:]:
        total = int(comb(n, l, exact=True))
        if strategy.kind is StrategyKind.ENUMERATE and total > budget:
            raise BudgetExceededError(f"C({n}, {l}) = {total} subsets exceeds the budget {budget}")
        if strategy.kind is StrategyKind.SAMPLE or total > budget:

            def draw(rng, size, l=l):
                idx = partial_fisher_yates(rng, size, n, l)
                return accessible_mi_from_half_product(0.5 * np.prod(keep[idx], axis=1))

            values = map_chunks(draw, strategy.seed, (SUBSET_STREAM, l), strategy.n_samples,
                                threads=threads)
            mean, stderr = stats(values)
            rows.append((l, mean, stderr, strategy.n_samples))
            exact = False
        else:
            values = [
                accessible_mi_from_half_product(0.5 * np.prod(keep[idx], axis=1))
                for idx in iter_subset_batches(n, l)
            ]
            mean, _ = stats(np.concatenate(values))
            rows.append((l, mean, 0.0, total))
    return MiCurve.build(n, LN2, rows, exact=exact)
