"""Entropy primitives, all in nats, with 0 ln 0 = 0."""

import logging
import math

import numpy as np
from scipy.special import entr

from config.settings import (
    NORMALIZATION_TOL,
    PROBABILITY_TOL,
    SPECTRUM_SUM_TOL,
    SPECTRUM_TOL,
)
from utils.validators import DomainError, NormalizationError, SpectrumError, check_probability

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)


def binary_entropy(x):
    """h(x) = -x ln x - (1 - x) ln(1 - x)."""
    x = check_probability(x, PROBABILITY_TOL)
    # fold onto [0, 1/2]
    x = min(x, 1.0 - x)
    return float(entr(x) + entr(1.0 - x))


def binary_entropy_array(x):
    """Vectorised h for arrays already known to lie in [0, 1]."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    x = np.minimum(x, 1.0 - x)
    return entr(x) + entr(1.0 - x)


def branch_entropy(overlap):
    """Entropy of a rank-2 state with eigenvalues (1 +- overlap) / 2."""
    return binary_entropy(0.5 * (1.0 + overlap))


def branch_entropy_array(overlaps):
    return binary_entropy_array(0.5 * (1.0 + np.asarray(overlaps, dtype=float)))


def shannon_entropy(dist):
    p = np.asarray(dist, dtype=float).ravel()
    if p.size == 0:
        raise NormalizationError("empty distribution")
    if np.any(np.isnan(p)) or np.any(p < -PROBABILITY_TOL) or np.any(p > 1.0 + PROBABILITY_TOL):
        raise DomainError(f"probabilities must lie in [0, 1], got {p.tolist()}")
    total = math.fsum(p.tolist())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"distribution sums to {total!r}, not 1")
    p = np.clip(p, 0.0, 1.0)
    return math.fsum(entr(p).tolist())


def von_neumann_entropy(spectrum):
    """Shannon entropy of an eigenvalue list after clipping and renormalising."""
    lam = np.asarray(spectrum, dtype=float).ravel()
    if lam.size == 0:
        raise NormalizationError("empty spectrum")
    if np.any(lam < -SPECTRUM_TOL):
        raise SpectrumError(f"negative eigenvalue {lam.min()!r} beyond tolerance")
    total = math.fsum(lam.tolist())
    if abs(total - 1.0) > SPECTRUM_SUM_TOL:
        raise NormalizationError(f"spectrum sums to {total!r}, not 1")
    lam = np.clip(lam, 0.0, None)
    lam = lam / lam.sum()
    return math.fsum(entr(lam).tolist())
