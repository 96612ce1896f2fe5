"""Named, seedable, splittable random streams.

Every stochastic routine in the package takes an explicit
:class:`numpy.random.Generator`. Streams are derived from ``(seed, name,
index)`` through :class:`numpy.random.SeedSequence` so that a trial chunk
gets the same numbers no matter which worker runs it.
"""
from __future__ import annotations

import zlib

import numpy as np

RandomStream = np.random.Generator


def _name_key(name: str) -> int:
    return zlib.crc32(name.encode("utf-8"))


def make_stream(seed: int, name: str = "", *index: int) -> RandomStream:
    """Return the generator for ``(seed, name, *index)``.

    Different names or indices give statistically independent streams.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    key = (_name_key(name), *(int(i) for i in index))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def split(rng: RandomStream, n: int) -> list[RandomStream]:
    """Spawn ``n`` child streams from ``rng``."""
    return list(rng.spawn(n))
