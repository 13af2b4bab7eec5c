"""Mutual information averaged over environment fractions of a fixed size.

Curves are integer-l based; f is always derived as l / N. The endpoints are
pinned: l = 0 gives 0 and l = N gives 2 S(rho_S), the whole-environment value
of a pure state.
"""

import logging
import math
from itertools import combinations, islice

import numpy as np
from scipy.special import comb, gammaln

from config.settings import ENUMERATION_BATCH, ENUMERATION_BUDGET
from core.entropy_core import LN2
from core.branch_model import ghz_junk_overlaps, qmi_exact, qmi_from_masks, system_entropy
from models.curve_model import MiCurve, ScenarioOrdering
from models.distribution_model import AveragingStrategy, StrategyKind
from models.overlap_model import FractionSelection, GhzJunkConfig, OverlapVector
from utils.streams import map_chunks, partial_fisher_yates, stats
from utils.validators import BudgetExceededError, DomainError, check_fraction_size

logger = logging.getLogger(__name__)

QMI_STREAM = 0


def subset_count(n, l):
    return int(comb(n, l, exact=True))


def iter_subset_batches(n, l, batch=ENUMERATION_BATCH):
    """All size-l subsets of range(n) in lexicographic order, as index arrays of <= batch rows."""
    subsets = combinations(range(n), l)
    while True:
        rows = list(islice(subsets, batch))
        if not rows:
            return
        yield np.asarray(rows, dtype=np.intp).reshape(len(rows), l)


def averaged_qmi_enumerated(ov: OverlapVector, l, budget=ENUMERATION_BUDGET):
    """Exact mean over all C(N, l) subsets. Returns (mi_nats, samples)."""
    n = ov.n
    check_fraction_size(l, n)
    total = subset_count(n, l)
    if total > budget:
        raise BudgetExceededError(
            f"C({n}, {l}) = {total} subsets exceeds the enumeration budget {budget}; "
            "use averaged_qmi_sampled instead"
        )
    s_system = system_entropy(ov)
    if l == 0:
        return 0.0, 1
    if l == n:
        return 2.0 * s_system, 1
    overlaps = ov.as_array()
    values = []
    for idx in iter_subset_batches(n, l):
        masks = np.zeros((idx.shape[0], n), dtype=bool)
        np.put_along_axis(masks, idx, True, axis=1)
        values.extend(qmi_from_masks(overlaps, masks, s_system).tolist())
    return math.fsum(values) / total, total


def averaged_qmi_sampled(ov: OverlapVector, l, n_samples, seed, threads=None):
    """Mean and standard error over n_samples uniformly drawn size-l subsets.

    Returns (mi_nats, stderr, samples).
    """
    n = ov.n
    check_fraction_size(l, n, minimum=1)
    if n_samples < 2:
        raise DomainError(f"n_samples must be >= 2, got {n_samples}")
    overlaps = ov.as_array()
    s_system = system_entropy(ov)

    def draw(rng, size):
        idx = partial_fisher_yates(rng, size, n, l)
        masks = np.zeros((size, n), dtype=bool)
        np.put_along_axis(masks, idx, True, axis=1)
        return qmi_from_masks(overlaps, masks, s_system)

    values = map_chunks(draw, seed, (QMI_STREAM, l), n_samples, threads=threads)
    mean, stderr = stats(values)
    return mean, stderr, n_samples


def _log_comb(n, k):
    if k < 0 or k > n:
        return -math.inf
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def ghz_junk_averaged_closed_form(cfg: GhzJunkConfig, l, count_full=False):
    """(1 - [C(N-m, l) + C(N-m, l-m)] / C(N, l)) * S(rho_S), ratios via log-gamma.

    The first ratio is the chance a random fraction holds no correlated qubit
    (QMI 0), the second that it holds all of them (QMI 2S). The bracketed form
    gives that second event no weight; count_full=True adds its 2S share back,
    which is what enumerating every subset yields.
    """
    n, m = cfg.n_total, cfg.n_correlated
    check_fraction_size(l, n)
    s_system = LN2 if m >= 1 else 0.0
    log_total = _log_comb(n, l)
    none_held = math.exp(_log_comb(n - m, l) - log_total)
    all_held = math.exp(_log_comb(n - m, l - m) - log_total)
    value = (1.0 - (none_held + all_held)) * s_system
    if count_full:
        value += 2.0 * all_held * s_system
    return value


def scenario_curve(cfg: GhzJunkConfig, ordering: ScenarioOrdering) -> MiCurve:
    """Non-averaged QMI along nested fractions: point l holds the first l qubits of the order."""
    n = cfg.n_total
    if len(ordering.order) != n:
        raise DomainError(f"ordering has {len(ordering.order)} qubits, expected N={n}")
    ov = ghz_junk_overlaps(cfg)
    s_system = system_entropy(ov)
    rows = []
    for l in range(n + 1):
        if l == n:
            mi = 2.0 * s_system
        else:
            mi = qmi_exact(ov, FractionSelection(indices=ordering.order[:l]))
        rows.append((l, mi, 0.0, 1))
    return MiCurve.build(n, s_system, rows, exact=True)


def nested_curve(ov: OverlapVector, order) -> MiCurve:
    """Non-averaged QMI of an arbitrary overlap vector along a nested ordering."""
    order = ScenarioOrdering.explicit(list(order))
    if len(order.order) != ov.n:
        raise DomainError(f"ordering has {len(order.order)} qubits, expected N={ov.n}")
    s_system = system_entropy(ov)
    rows = [
        (l, qmi_exact(ov, FractionSelection(indices=order.order[:l])), 0.0, 1)
        for l in range(ov.n + 1)
    ]
    return MiCurve.build(ov.n, s_system, rows, exact=True)


def averaged_curve(ov: OverlapVector, strategy=None, budget=ENUMERATION_BUDGET, threads=None,
                   count_full=False):
    """Averaged QMI at every l of the strategy's grid.

    GHZ+junk inputs use the closed form and symmetric inputs a single nested
    fraction, both exact. Under `auto` the GHZ+junk form is the bracketed one
    unless count_full is set; `enumerate` always uses the full weighting, which
    equals the subset average. Other inputs enumerate each l within budget under
    `auto` and sample the rest.
    """
    strategy = strategy or AveragingStrategy()
    n = ov.n
    s_system = system_entropy(ov)
    grid = strategy.grid(n)

    if ov.is_ghz_junk() and strategy.kind is not StrategyKind.SAMPLE:
        cfg = GhzJunkConfig(n_total=n, n_correlated=ov.overlaps.count(0.0))
        full = count_full or strategy.kind is StrategyKind.ENUMERATE
        logger.debug("averaged_curve: GHZ+junk closed form, N=%d m=%d", n, cfg.n_correlated)
        rows = [
            (l, _endpoint(l, n, s_system,
                          lambda l: ghz_junk_averaged_closed_form(cfg, l, full)),
             0.0, 1)
            for l in grid
        ]
        return MiCurve.build(n, s_system, rows, exact=True)

    if ov.is_symmetric() and strategy.kind is not StrategyKind.SAMPLE:
        logger.debug("averaged_curve: symmetric encoding, N=%d", n)
        rows = [
            (l, _endpoint(l, n, s_system,
                          lambda l: qmi_exact(ov, FractionSelection(indices=tuple(range(l))))),
             0.0, 1)
            for l in grid
        ]
        return MiCurve.build(n, s_system, rows, exact=True)

    rows = []
    exact = True
    for l in grid:
        if l in (0, n):
            rows.append((l, _endpoint(l, n, s_system, None), 0.0, 1))
            continue
        affordable = subset_count(n, l) <= budget
        if strategy.kind is StrategyKind.ENUMERATE or (
            strategy.kind is StrategyKind.AUTO and affordable
        ):
            mi, samples = averaged_qmi_enumerated(ov, l, budget=budget)
            rows.append((l, mi, 0.0, samples))
        else:
            mi, stderr, samples = averaged_qmi_sampled(
                ov, l, strategy.n_samples, strategy.seed, threads=threads
            )
            rows.append((l, mi, stderr, samples))
            exact = False
        logger.debug("averaged_curve: l=%d mi=%.6g", l, rows[-1][1])
    return MiCurve.build(n, s_system, rows, exact=exact)


def _endpoint(l, n, s_system, interior):
    if l == 0:
        return 0.0
    if l == n:
        return 2.0 * s_system
    return interior(l)
