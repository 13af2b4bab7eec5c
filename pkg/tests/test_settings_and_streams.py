import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from config.settings import THREADS_ENV_VAR, thread_count
from utils.streams import chunk_rng, chunk_sizes, map_chunks, partial_fisher_yates, stats
from utils.validators import ConfigurationError


class TestThreadCount:
    def test_explicit(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert thread_count() == 3

    @pytest.mark.parametrize("raw", ["0", ""])
    def test_auto(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV_VAR, raw)
        assert thread_count() == (os.cpu_count() or 1)

    @pytest.mark.parametrize("raw", ["-1", "many"])
    def test_invalid(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV_VAR, raw)
        with pytest.raises(ConfigurationError):
            thread_count()


def test_chunk_sizes():
    assert chunk_sizes(2500, 1024) == [1024, 1024, 452]
    assert chunk_sizes(2048, 1024) == [1024, 1024]
    assert chunk_sizes(10, 1024) == [10]


def test_chunk_streams_differ():
    a = chunk_rng(5, (1,), 0).random(4)
    b = chunk_rng(5, (1,), 1).random(4)
    c = chunk_rng(5, (2,), 0).random(4)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)
    np.testing.assert_array_equal(a, chunk_rng(5, (1,), 0).random(4))


@pytest.mark.parametrize("threads", [1, 2, 5])
def test_map_chunks_ignores_thread_count(threads):
    def draw(rng, size):
        return rng.random(size)

    reference = map_chunks(draw, 42, (0,), 3000, threads=1, chunk=256)
    result = map_chunks(draw, 42, (0,), 3000, threads=threads, chunk=256)
    assert result.shape == (3000,)
    np.testing.assert_array_equal(result, reference)


@given(st.integers(1, 12), st.data())
def test_partial_fisher_yates_draws_subsets(n, data):
    l = data.draw(st.integers(0, n))
    rows = partial_fisher_yates(np.random.default_rng(0), 50, n, l)
    assert rows.shape == (50, l)
    for row in rows:
        assert len(set(row.tolist())) == l
        assert all(0 <= v < n for v in row)


def test_partial_fisher_yates_is_uniform_over_positions():
    rows = partial_fisher_yates(np.random.default_rng(1), 20_000, 5, 2)
    counts = np.bincount(rows.ravel(), minlength=5) / rows.size
    np.testing.assert_allclose(counts, 0.2, atol=0.01)


def test_stats():
    mean, stderr = stats([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert stderr == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2)
    assert stats([0.7] * 5) == (0.7, 0.0)
