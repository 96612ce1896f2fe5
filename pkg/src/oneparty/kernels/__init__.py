"""Batch kernels on packed ``uint64`` words.

The compiled Cython module is used when it was built and importable; set
``ONEPARTY_PURE_PYTHON=1`` to force the numpy fallback. Both backends expose
the same four functions and give identical results.
"""
from __future__ import annotations

import os
from types import ModuleType

import numpy as np

from . import _pykernels


def _load_compiled() -> ModuleType | None:
    if os.environ.get("ONEPARTY_PURE_PYTHON", "").strip() not in ("", "0"):
        return None
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()
_impl: ModuleType = _compiled if _compiled is not None else _pykernels
BACKEND = "cython" if _compiled is not None else "numpy"


def available_backends() -> dict[str, ModuleType]:
    out = {"numpy": _pykernels}
    if _compiled is not None:
        out["cython"] = _compiled
    return out


def _u64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.uint64)


def pack_bits(bits) -> np.ndarray:
    return _impl.pack_bits(np.ascontiguousarray(bits, dtype=np.uint8))


def pauli_masks(codes) -> tuple[np.ndarray, np.ndarray]:
    """Split a ``(trials, n)`` array of Pauli codes into packed x and z masks."""
    return _impl.pauli_masks(np.ascontiguousarray(codes, dtype=np.uint8))


def syndromes(words, rows) -> np.ndarray:
    return _impl.syndromes(_u64(words), _u64(rows))


def decode_logical(words, rows, leaders, proj) -> np.ndarray:
    """Coset-leader decode each word and project the result onto message bits."""
    return _impl.decode_logical(_u64(words), _u64(rows), _u64(leaders), _u64(proj))
