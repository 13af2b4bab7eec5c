"""Exception hierarchy and the small precondition helpers shared by every module."""

import math


class ObjectivityError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ObjectivityError, ValueError):
    """A probability or parameter lies outside its allowed range."""


class NormalizationError(DomainError):
    """A distribution or spectrum does not sum to one."""


class SpectrumError(DomainError):
    """A spectrum has a negative eigenvalue beyond tolerance."""


class SelectionError(ObjectivityError, IndexError):
    """A fraction selection does not fit the environment it is applied to."""


class BudgetExceededError(ObjectivityError):
    """Exact enumeration would visit more subsets than the configured budget."""


class SizeGuardError(ObjectivityError):
    """The brute-force oracle was asked for a state it refuses to build."""


class NoCrossingError(ObjectivityError):
    """A curve never reaches the consensus threshold."""


class ConfigurationError(ObjectivityError):
    """Bad environment variable or experiment configuration file."""


def check_probability(x, tol=1e-12, name="probability"):
    """Return x clamped into [0, 1] when it lies within tol of the interval."""
    x = float(x)
    if math.isnan(x) or x < -tol or x > 1.0 + tol:
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")
    return min(max(x, 0.0), 1.0)


def check_indices(indices, size):
    """Validate fraction indices against an environment of `size` qubits."""
    seen = set()
    for index in indices:
        if not 0 <= index < size:
            raise SelectionError(f"qubit index {index} out of range for N={size}")
        if index in seen:
            raise SelectionError(f"qubit index {index} selected twice")
        seen.add(index)
    return seen


def check_fraction_size(l, size, minimum=0):
    if not minimum <= l <= size:
        raise DomainError(f"fraction size l={l} must lie in [{minimum}, {size}]")
    return l
