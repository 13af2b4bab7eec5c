"""Seeded random streams and the worker pool used by every sampled estimator.

Work is cut into chunks of a fixed size and chunk `c` of task `key` always
draws from SeedSequence(seed, spawn_key=(*key, c)). Results are gathered in
chunk order, so they do not depend on how many threads ran them.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from config.settings import SAMPLING_CHUNK, thread_count

logger = logging.getLogger(__name__)


def chunk_sizes(total, chunk=SAMPLING_CHUNK):
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def chunk_rng(seed, key, chunk_index):
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(*key, chunk_index))
    return np.random.Generator(np.random.PCG64(sequence))


def map_chunks(func, seed, key, total, threads=None, chunk=SAMPLING_CHUNK):
    """Run func(rng, size) over the chunks of `total` draws; concatenate in order."""
    sizes = chunk_sizes(total, chunk)
    jobs = [(chunk_rng(seed, key, i), size) for i, size in enumerate(sizes)]
    workers = threads or thread_count()
    if workers <= 1 or len(jobs) <= 1:
        parts = [func(rng, size) for rng, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(lambda job: func(*job), jobs))
    logger.debug("key=%s: %d draws in %d chunks on %d workers", key, total, len(jobs), workers)
    return np.concatenate(parts)


def partial_fisher_yates(rng, size, n, l):
    """`size` uniform l-subsets of range(n), as index rows of shape (size, l)."""
    rows = np.tile(np.arange(n), (size, 1))
    picks = np.arange(size)
    for i in range(l):
        j = rng.integers(i, n, size=size)
        chosen = rows[picks, j]
        rows[picks, j] = rows[:, i]
        rows[:, i] = chosen
    return rows[:, :l]


def stats(values):
    """Mean with compensated summation, and the standard error of the mean."""
    values = np.asarray(values, dtype=float)
    count = values.size
    if count and np.all(values == values[0]):
        return float(values[0]), 0.0
    mean = math.fsum(values.tolist()) / count
    if count < 2:
        return mean, 0.0
    spread = math.fsum(((values - mean) ** 2).tolist()) / (count - 1)
    return mean, math.sqrt(spread / count)
