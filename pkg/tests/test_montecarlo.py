import numpy as np
import pytest

from oneparty.code import simulate_concatenation
from oneparty.montecarlo import THREADS_ENV, chunk_sizes, default_threads, proportion, run_chunked, z_score
from oneparty.rng import make_stream


def test_chunk_sizes():
    assert chunk_sizes(25, 10) == [10, 10, 5]
    assert chunk_sizes(20, 10) == [10, 10]
    assert chunk_sizes(3, 10) == [3]
    with pytest.raises(ValueError):
        chunk_sizes(0)
    with pytest.raises(ValueError):
        chunk_sizes(5, 0)


def test_result_independent_of_thread_count():
    def task(size, rng):
        return simulate_concatenation(0.2, 2, size, rng)

    runs = [run_chunked(task, 2_500, 42, "mc-test", chunk=300, threads=t) for t in (1, 3, 8)]
    for r in runs[1:]:
        assert r == runs[0]


def test_streams_are_distinct_per_chunk():
    draws = [int(make_stream(7, "x", i).integers(1 << 62)) for i in range(5)]
    assert len(set(draws)) == 5
    assert int(make_stream(7, "x", 0).integers(1 << 62)) == draws[0]
    assert int(make_stream(7, "y", 0).integers(1 << 62)) != draws[0]


def test_default_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert default_threads() == 1
    monkeypatch.setenv(THREADS_ENV, "4")
    assert default_threads() == 4
    monkeypatch.setenv(THREADS_ENV, "zero")
    with pytest.raises(ValueError):
        default_threads()
    monkeypatch.setenv(THREADS_ENV, "0")
    with pytest.raises(ValueError):
        default_threads()


def test_custom_combine():
    out = run_chunked(lambda size, rng: [size], 25, 0, "c", chunk=10, threads=2, combine=lambda a, b: a + b)
    assert out == [10, 10, 5]


def test_proportion_and_z():
    p, se = proportion(25, 100)
    assert p == 0.25 and se == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
    assert z_score(0.3, 0.25, 100) == pytest.approx(0.05 / np.sqrt(0.25 * 0.75 / 100))
    assert z_score(0.0, 0.0, 10) == 0.0
    assert z_score(0.1, 0.0, 10) == np.inf
    with pytest.raises(ValueError):
        proportion(1, 0)
