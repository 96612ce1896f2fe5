"""Numpy implementations of the batch kernels (fallback backend)."""
from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)


def _parity(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a) & 1).astype(np.uint64)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    b = np.ascontiguousarray(bits, dtype=np.uint8)
    n = b.shape[1]
    if n > 64:
        raise ValueError("cannot pack more than 64 bits")
    out = np.zeros(b.shape[0], dtype=np.uint64)
    for j in range(n):
        out |= b[:, j].astype(np.uint64) << np.uint64(j)
    return out


def pauli_masks(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = np.ascontiguousarray(codes, dtype=np.uint8)
    return pack_bits(c & 1), pack_bits(c >> 1)


def syndromes(words: np.ndarray, rows: np.ndarray) -> np.ndarray:
    w = np.asarray(words, dtype=np.uint64)
    out = np.zeros(w.shape, dtype=np.uint64)
    for i, row in enumerate(np.asarray(rows, dtype=np.uint64)):
        out |= _parity(w & row) << np.uint64(i)
    return out


def decode_logical(words, rows, leaders, proj) -> np.ndarray:
    w = np.asarray(words, dtype=np.uint64)
    s = syndromes(w, rows)
    resid = w ^ np.asarray(leaders, dtype=np.uint64)[s.astype(np.intp)]
    out = np.zeros(w.shape, dtype=np.uint64)
    for l, col in enumerate(np.asarray(proj, dtype=np.uint64)):
        out |= _parity(resid & col) << np.uint64(l)
    return out
