"""Two-branch states (|0>|A> + |1>|B>)/sqrt(2) with product branches.

Every reduced state of such a state has rank <= 2 with eigenvalues
(1 +- o)/2, where o is the branch overlap of the part traced out. Hence

    I(S:E_K) = h((1 + o_all)/2) + h((1 + o(K))/2) - h((1 + o(K'))/2)

with K' the complement of K, and everything depends on per-qubit overlaps only.
"""

import logging
import math

import numpy as np

from core.entropy_core import branch_entropy, branch_entropy_array
from models.overlap_model import FractionSelection, GhzJunkConfig, OverlapVector, PVector

logger = logging.getLogger(__name__)


def ghz_junk_overlaps(cfg: GhzJunkConfig) -> OverlapVector:
    """Correlated qubits take the lowest indices; junk overlaps are 1 whatever |phi> is."""
    m, n = cfg.n_correlated, cfg.n_total
    return OverlapVector(overlaps=(0.0,) * m + (1.0,) * (n - m))


def icnot_overlaps(p: PVector) -> OverlapVector:
    return OverlapVector(overlaps=tuple(math.sqrt(1.0 - v) for v in p.probs))


def subset_overlap(ov: OverlapVector, sel: FractionSelection) -> float:
    sel.validate_for(ov.n)
    result = 1.0
    for k in sel.indices:
        result *= ov.overlaps[k]
    return result


def system_entropy(ov: OverlapVector) -> float:
    return branch_entropy(float(np.prod(ov.as_array())))


def qmi_exact(ov: OverlapVector, sel: FractionSelection) -> float:
    sel.validate_for(ov.n)
    inside = subset_overlap(ov, sel)
    outside = subset_overlap(ov, sel.complement(ov.n))
    return system_entropy(ov) + branch_entropy(inside) - branch_entropy(outside)


def qmi_from_masks(overlaps, masks, s_system):
    """QMI for a batch of boolean selection masks of shape (batch, N)."""
    overlaps = np.asarray(overlaps, dtype=float)
    inside = np.prod(np.where(masks, overlaps, 1.0), axis=1)
    outside = np.prod(np.where(masks, 1.0, overlaps), axis=1)
    return s_system + branch_entropy_array(inside) - branch_entropy_array(outside)
