"""Chunked, seeded Monte Carlo with thread-count-independent results.

Trials are cut into fixed-size chunks; chunk ``i`` always draws from
``make_stream(seed, name, i)`` and chunk results are summed, so the answer
does not depend on how many workers run the chunks.
"""
from __future__ import annotations

import math
import operator
import os
from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from typing import Callable, TypeVar

from .rng import make_stream

T = TypeVar("T")

DEFAULT_CHUNK = 10_000
THREADS_ENV = "ONEPARTY_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be positive")
    return n


def chunk_sizes(trials: int, chunk: int = DEFAULT_CHUNK) -> list[int]:
    if trials < 1:
        raise ValueError("trials must be positive")
    if chunk < 1:
        raise ValueError("chunk size must be positive")
    full, rest = divmod(trials, chunk)
    return [chunk] * full + ([rest] if rest else [])


def run_chunked(task: Callable[[int, object], T], trials: int, seed: int, name: str,
                chunk: int = DEFAULT_CHUNK, threads: int | None = None,
                combine: Callable[[T, T], T] = operator.add) -> T:
    """Run ``task(size, rng)`` over all chunks and fold the results with ``combine``."""
    sizes = chunk_sizes(trials, chunk)
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise ValueError("threads must be positive")

    def one(i: int):
        return task(sizes[i], make_stream(seed, name, i))

    if threads == 1 or len(sizes) == 1:
        parts = [one(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(one, range(len(sizes))))
    return reduce(combine, parts)


def proportion(successes: int, trials: int) -> tuple[float, float]:
    """Point estimate and binomial standard error."""
    if trials < 1:
        raise ValueError("trials must be positive")
    p = successes / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


def z_score(estimate: float, expected: float, trials: int) -> float:
    """Deviation in units of the standard error implied by ``expected``."""
    se = math.sqrt(expected * (1.0 - expected) / trials)
    if se == 0.0:
        return 0.0 if estimate == expected else math.inf
    return (estimate - expected) / se
