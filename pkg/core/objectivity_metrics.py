"""Consensus, redundancy and plateau detection.

Consensus is floor(N / l*) for the smallest fraction size l* whose mutual
information reaches threshold * S(rho_S): the number of disjoint size-l*
fractions that fit in the environment. Redundancy is exact (= m) for GHZ+junk
states and a greedy lower bound for the imperfect-CNOT model.
"""

import logging

import numpy as np

from config.settings import DEFAULT_THRESHOLD, PLATEAU_LEVEL_TOL
from core.accessible_info import (
    accessible_mi_from_half_product,
    restrict_to_environment,
    sample_probs,
)
from core.entropy_core import LN2
from models.curve_model import MiCurve
from models.distribution_model import DrawPlan, GreedyOrder, PDistribution
from models.overlap_model import GhzJunkConfig, PVector
from models.report_model import DiscordExcess, PlateauReport
from utils.streams import map_chunks, stats
from utils.validators import DomainError, NoCrossingError

logger = logging.getLogger(__name__)

REDUNDANCY_STREAM = 4
CROSSING_SLACK = 1e-12


def _check_threshold(threshold):
    if not 0.0 < threshold <= 1.0:
        raise DomainError(f"threshold must lie in (0, 1], got {threshold}")


def consensus_from_curve(curve: MiCurve, s_system, threshold=DEFAULT_THRESHOLD):
    """Return (f0, consensus) from the first point reaching threshold * s_system."""
    _check_threshold(threshold)
    if not curve.points:
        raise DomainError("cannot read consensus from an empty curve")
    if not s_system > 0:
        raise DomainError(f"consensus needs a mixed system, S = {s_system}")
    target = threshold * s_system * (1.0 - CROSSING_SLACK)
    for point in curve.points:
        if point.l >= 1 and point.mi_nats >= target:
            return point.l / curve.n, curve.n // point.l
    raise NoCrossingError(
        f"no fraction reaches {threshold} * S(rho_S) = {threshold * s_system:.6g} nats"
    )


def redundancy_ghz_junk(cfg: GhzJunkConfig):
    return cfg.n_correlated


def _ordered(probs, order):
    order = GreedyOrder(order)
    if order is GreedyOrder.DESCENDING:
        return -np.sort(-probs, axis=-1)
    if order is GreedyOrder.ASCENDING:
        return np.sort(probs, axis=-1)
    return probs


def _greedy_counts(probs, threshold):
    """Closed-fraction counts for each row of an already ordered (draws, N) array."""
    target = threshold * LN2 * (1.0 - CROSSING_SLACK)
    draws, n = probs.shape
    counts = np.zeros(draws, dtype=np.int64)
    running = np.full(draws, 0.5)
    for k in range(n):
        running = running * (1.0 - probs[:, k])
        closed = accessible_mi_from_half_product(running) >= target
        counts += closed
        running = np.where(closed, 0.5, running)
    return counts


def redundancy_greedy(p: PVector, threshold=DEFAULT_THRESHOLD, order=GreedyOrder.DESCENDING):
    """Pack qubits (most correlated first by default) into fractions until each
    carries threshold * ln 2 of accessible information; count the closed ones.

    A leftover fraction that never reaches the threshold is not counted, so the
    result is a lower bound on the redundancy.
    """
    _check_threshold(threshold)
    probs = _ordered(p.as_array()[np.newaxis, :], order)
    return int(_greedy_counts(probs, threshold)[0])


def redundancy_mean(dist: PDistribution, n_env, plan: DrawPlan, threshold=DEFAULT_THRESHOLD,
                    order=GreedyOrder.DESCENDING, threads=None):
    """Mean and standard error of the greedy redundancy over plan.n_draws environments."""
    _check_threshold(threshold)
    dist = restrict_to_environment(dist, n_env)

    def draw(rng, size):
        probs = _ordered(sample_probs(dist, rng, (size, n_env)), order)
        return _greedy_counts(probs, threshold).astype(float)

    counts = map_chunks(draw, plan.seed, (REDUNDANCY_STREAM,), plan.n_draws, threads=threads)
    mean, stderr = stats(counts)
    logger.debug("redundancy_mean: %s N=%d -> %.4g +- %.2g", dist.describe(), n_env, mean, stderr)
    return mean, stderr


def detect_plateau(curve: MiCurve, s_system, level_tol=PLATEAU_LEVEL_TOL) -> PlateauReport:
    """Longest run of consecutive points with normalised MI within level_tol of 1.

    A run counts as a plateau when it spans at least two points, or when it is
    the single midpoint l = N/2 (the narrowest plateau an antisymmetric averaged
    curve can have).
    """
    if not curve.points:
        raise DomainError("cannot look for a plateau on an empty curve")
    scale = s_system if s_system > 0 else 1.0
    best, start = None, None
    for i, point in enumerate(curve.points):
        on_level = abs(point.mi_nats / scale - 1.0) <= level_tol
        if on_level and start is None:
            start = i
        if start is not None and (not on_level or i == len(curve.points) - 1):
            end = i if on_level else i - 1
            if best is None or end - start > best[1] - best[0]:
                best = (start, end)
            start = None
    if best is None:
        return PlateauReport(present=False)
    first, last = curve.points[best[0]], curve.points[best[1]]
    run = curve.points[best[0]:best[1] + 1]
    present = len(run) >= 2 or 2 * first.l == curve.n
    if not present:
        return PlateauReport(present=False)
    level = float(np.mean([p.mi_nats / scale for p in run]))
    return PlateauReport(present=True, start_l=first.l, end_l=last.l, level_normalized=level)


def discord_excess_bound(mi_nats, s_system) -> DiscordExcess:
    """Delta = I(S:E_f) - S; for a pure global state the rest of the environment
    then holds exactly S - Delta."""
    if not s_system > 0:
        raise DomainError(f"discord excess needs a mixed system, S = {s_system}")
    delta = mi_nats - s_system
    return DiscordExcess(delta=delta, complement_bound=s_system - delta)


def discord_witness(mi_nats, s_system, tol=1e-9):
    """QMI above S(rho_S) is only possible with nonzero discord."""
    return mi_nats > s_system + tol
