import os

from utils.validators import ConfigurationError

DEFAULT_THRESHOLD = 0.99
PLATEAU_LEVEL_TOL = 0.01

# Enumeration switches to sampling above this many subsets per fraction size
ENUMERATION_BUDGET = 10**7
ENUMERATION_BATCH = 65_536

DEFAULT_SAMPLES = 10_000
DEFAULT_EXPONENTIAL_RATE = 2.0
# Fixed chunking keeps random streams independent of the thread count
SAMPLING_CHUNK = 1024

ORACLE_MAX_ENV_QUBITS = 14
ORACLE_MAX_KEPT_DIM = 4096
# purity checks diagonalise both sides; states above this dimension skip them
ORACLE_DIRECT_MAX_DIM = 512

PROBABILITY_TOL = 1e-12
NORMALIZATION_TOL = 1e-9
SPECTRUM_TOL = 1e-9
SPECTRUM_SUM_TOL = 1e-6
EIGEN_CLAMP = 1e-12

THREADS_ENV_VAR = "QDARWIN_THREADS"


def thread_count():
    """Worker count from QDARWIN_THREADS; 0 or unset means one per CPU."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 0:
        raise ConfigurationError(f"{THREADS_ENV_VAR} must be >= 0, got {value}")
    return value or (os.cpu_count() or 1)
