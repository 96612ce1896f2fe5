"""GF(2) linear algebra and small classical linear codes.

Bit vectors and matrices are numpy ``uint8`` arrays holding 0/1. Packed
integer masks use bit ``j`` for position ``j``.
"""
from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rng import RandomStream

FULL_TABLE_MAX_N = 24


def as_bits(a) -> np.ndarray:
    arr = np.asarray(a, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bit array contains values other than 0/1")
    return arr


def gf2_rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2) and the pivot columns."""
    a = as_bits(m).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def gf2_rank(m) -> int:
    return len(gf2_rref(m)[1])


def gf2_nullspace(m) -> np.ndarray:
    """Basis of ``{v : m v = 0}`` as rows."""
    a = as_bits(m)
    cols = a.shape[1]
    r, pivots = gf2_rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, p in enumerate(pivots):
            basis[i, p] = r[row, f]
    return basis


def gf2_right_inverse(m) -> np.ndarray:
    """Matrix ``r`` with ``m @ r = I`` over GF(2); ``m`` must have full row rank."""
    a = as_bits(m)
    k, n = a.shape
    # row-reduce [a | I]: the right block E satisfies E a = rref(a)
    red, pivots = gf2_rref(np.concatenate([a, np.eye(k, dtype=np.uint8)], axis=1))
    if len([p for p in pivots if p < n]) != k:
        raise ValueError("matrix does not have full row rank")
    r = np.zeros((n, k), dtype=np.uint8)
    t = red[:, n:]
    for row, p in enumerate(pivots[:k]):
        r[p] = t[row]
    return r


def pack_rows(bits) -> np.ndarray:
    """Pack the last axis of a 0/1 array into ``uint64`` masks."""
    b = as_bits(bits)
    n = b.shape[-1]
    if n > 64:
        raise ValueError("cannot pack more than 64 bits")
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    return (b.astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)


def unpack_rows(masks, n: int) -> np.ndarray:
    m = np.asarray(masks, dtype=np.uint64)
    shifts = np.arange(n, dtype=np.uint64)
    return ((m[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


class DecodeStatus(str, enum.Enum):
    CORRECTED = "corrected"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True, eq=False)
class ClassicalCode:
    """An ``[n, k, t]`` binary linear code with a coset-leader decoder.

    ``gen`` is ``k x n`` and ``pchk`` is ``(n-k) x n``. For ``n <= 24`` the
    decoder is a full syndrome table; larger codes search errors up to weight
    ``t`` and fall back to an arbitrary consistent error otherwise.
    """

    n: int
    k: int
    t: int
    gen: np.ndarray
    pchk: np.ndarray
    name: str = ""
    _leaders: np.ndarray | None = field(default=None, repr=False)
    _leader_weight: np.ndarray | None = field(default=None, repr=False)
    _sparse: dict | None = field(default=None, repr=False)
    _row_ints: tuple[int, ...] = field(default=(), repr=False)

    def __post_init__(self):
        gen = as_bits(self.gen).reshape(self.k, self.n) if self.k else np.zeros((0, self.n), np.uint8)
        pchk = as_bits(self.pchk).reshape(self.n - self.k, self.n)
        object.__setattr__(self, "gen", gen)
        object.__setattr__(self, "pchk", pchk)
        if self.n < 1 or not 0 <= self.k <= self.n or self.t < 0:
            raise ValueError(f"invalid code parameters [{self.n},{self.k},{self.t}]")
        if gf2_rank(gen) != self.k:
            raise ValueError("generator matrix is rank deficient")
        if gf2_rank(pchk) != self.n - self.k:
            raise ValueError("parity-check matrix is rank deficient")
        if ((gen.astype(int) @ pchk.T.astype(int)) % 2).any():
            raise ValueError("gen . pchk^T != 0")
        gen.setflags(write=False)
        pchk.setflags(write=False)
        object.__setattr__(self, "_row_ints", tuple(int(m) for m in self.pchk_masks))
        self._build_decoder()

    # -- construction -----------------------------------------------------
    @classmethod
    def from_parity_check(cls, pchk, t: int, name: str = "") -> "ClassicalCode":
        h = as_bits(pchk)
        n = h.shape[1]
        gen = gf2_nullspace(h)
        return cls(n=n, k=gen.shape[0], t=t, gen=gen, pchk=h, name=name)

    @classmethod
    def from_generator(cls, gen, t: int, name: str = "") -> "ClassicalCode":
        g = as_bits(gen)
        return cls(n=g.shape[1], k=g.shape[0], t=t, gen=g, pchk=gf2_nullspace(g), name=name)

    # -- decoder tables ---------------------------------------------------
    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def pchk_masks(self) -> np.ndarray:
        return pack_rows(self.pchk) if self.r else np.zeros(0, np.uint64)

    @property
    def has_table(self) -> bool:
        return self._leaders is not None

    def _build_decoder(self):
        if self.n <= FULL_TABLE_MAX_N:
            leaders, weights = _coset_leader_table(self.pchk, self.n)
            object.__setattr__(self, "_leaders", leaders)
            object.__setattr__(self, "_leader_weight", weights)
            # every error of weight <= t must be its own coset leader
            for w in range(1, self.t + 1):
                for combo in itertools.combinations(range(self.n), w):
                    e = 0
                    for j in combo:
                        e |= 1 << j
                    if int(leaders[self._syndrome_int_mask(e)]) != e:
                        raise ValueError(
                            f"code does not correct all errors of weight <= {self.t}"
                        )
        else:
            table: dict[int, int] = {}
            for w in range(self.t + 1):
                for combo in itertools.combinations(range(self.n), w):
                    e = sum(1 << j for j in combo)
                    s = self._syndrome_int_mask(e)
                    if s in table:
                        raise ValueError(
                            f"code does not correct all errors of weight <= {self.t}"
                        )
                    table[s] = e
            object.__setattr__(self, "_sparse", table)

    def _syndrome_int_mask(self, e: int) -> int:
        s = 0
        for i, row in enumerate(self._row_ints):
            s |= ((row & e).bit_count() & 1) << i
        return s

    def leader_masks(self) -> np.ndarray:
        """Coset leader (packed) for every syndrome integer; table codes only."""
        if self._leaders is None:
            raise ValueError("no full syndrome table for n > %d" % FULL_TABLE_MAX_N)
        return self._leaders

    def ambiguous_flags(self) -> np.ndarray:
        if self._leader_weight is None:
            raise ValueError("no full syndrome table for n > %d" % FULL_TABLE_MAX_N)
        return (self._leader_weight > self.t).astype(np.uint8)

    def message_projector(self) -> np.ndarray:
        """Packed columns of a right inverse of ``gen``: ``message_l = parity(c & col_l)``."""
        if self.k == 0:
            return np.zeros(0, np.uint64)
        return pack_rows(gf2_right_inverse(self.gen).T)

    def encode(self, message) -> np.ndarray:
        m = as_bits(message)
        return (m.astype(np.int64) @ self.gen.astype(np.int64)) % 2

    def unencode(self, codeword) -> np.ndarray:
        c = as_bits(codeword)
        if syndrome(self, c).any():
            raise ValueError("not a codeword")
        return (c.astype(np.int64) @ gf2_right_inverse(self.gen).astype(np.int64)) % 2

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"ClassicalCode{label}[{self.n},{self.k},{self.t}]"


def _coset_leader_table(pchk: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-weight, lexicographically least error for every syndrome.

    Lexicographic order compares the bit vectors position 0 first, so among
    equal-weight candidates the one whose ones sit furthest right wins.
    """
    r = pchk.shape[0]
    size = 1 << r
    leaders = np.zeros(size, dtype=np.uint64)
    weights = np.full(size, -1, dtype=np.int64)
    rows = [int(m) for m in pack_rows(pchk)] if r else []
    filled = 0
    for w in range(n + 1):
        best: dict[int, tuple[int, int]] = {}
        for combo in itertools.combinations(range(n), w):
            mask = 0
            key = 0
            for j in combo:
                mask |= 1 << j
                key |= 1 << (n - 1 - j)
            s = 0
            for i, row in enumerate(rows):
                s |= ((row & mask).bit_count() & 1) << i
            if weights[s] >= 0:
                continue
            prev = best.get(s)
            if prev is None or key < prev[0]:
                best[s] = (key, mask)
        for s, (_, mask) in best.items():
            leaders[s] = mask
            weights[s] = w
        filled += len(best)
        if filled == size:
            break
    return leaders, weights


def syndrome(code: ClassicalCode, word) -> np.ndarray:
    w = as_bits(word)
    if w.shape[-1] != code.n:
        raise ValueError(f"word length {w.shape[-1]} != n={code.n}")
    return (w.astype(np.int64) @ code.pchk.T.astype(np.int64)) % 2


def decode(code: ClassicalCode, synd) -> tuple[np.ndarray, DecodeStatus]:
    """Coset-leader decoding of one syndrome.

    Returns the estimated error and whether its weight is within the
    guaranteed radius ``t``.
    """
    s = as_bits(synd).reshape(-1)
    if s.size != code.r:
        raise ValueError(f"syndrome length {s.size} != n-k={code.r}")
    s_int = int(sum(int(b) << i for i, b in enumerate(s)))
    if code.has_table:
        mask = int(code._leaders[s_int])
        weight = int(code._leader_weight[s_int])
    else:
        found = code._sparse.get(s_int)
        if found is None:
            mask = _any_solution(code, s)
            weight = code.t + 1
        else:
            mask = found
            weight = mask.bit_count()
    err = unpack_rows(np.uint64(mask), code.n)
    status = DecodeStatus.CORRECTED if weight <= code.t else DecodeStatus.AMBIGUOUS
    return err, status


def _any_solution(code: ClassicalCode, s: np.ndarray) -> int:
    # particular solution of pchk e = s
    sol = gf2_right_inverse(code.pchk) @ s.astype(np.int64) % 2
    return int(pack_rows(sol.astype(np.uint8)))


def weight(v) -> int:
    return int(as_bits(v).sum())


def repetition3() -> ClassicalCode:
    return ClassicalCode(
        n=3, k=1, t=1,
        gen=[[1, 1, 1]],
        pchk=[[1, 1, 0], [0, 1, 1]],
        name="repetition3",
    )


def hamming7() -> ClassicalCode:
    p = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)
    gen = np.concatenate([np.eye(4, dtype=np.uint8), p], axis=1)
    pchk = np.concatenate([p.T, np.eye(3, dtype=np.uint8)], axis=1)
    return ClassicalCode(n=7, k=4, t=1, gen=gen, pchk=pchk, name="hamming7")


def minimum_distance(code: ClassicalCode) -> int:
    """Exhaustive over codewords; only for small ``k``."""
    if code.k > 20:
        raise ValueError("exhaustive distance only for k <= 20")
    best = code.n + 1
    gen = code.gen.astype(np.int64)
    for bits in itertools.product((0, 1), repeat=code.k):
        if not any(bits):
            continue
        w = int(((np.array(bits) @ gen) % 2).sum())
        best = min(best, w)
    return best


def random_code(n: int, k: int, rng: RandomStream, name: str = "") -> ClassicalCode:
    """Random full-rank parity-check code; ``t`` set from its true minimum distance."""
    if not 0 < k < n:
        raise ValueError("need 0 < k < n")
    while True:
        h = rng.integers(0, 2, size=(n - k, n), dtype=np.uint8)
        if gf2_rank(h) == n - k:
            break
    gen = gf2_nullspace(h)
    probe = ClassicalCode(n=n, k=k, t=0, gen=gen, pchk=h)
    d = minimum_distance(probe)
    return ClassicalCode(n=n, k=k, t=(d - 1) // 2, gen=gen, pchk=h, name=name or f"random[{n},{k}]")


@dataclass(frozen=True)
class GvReport:
    rate: float
    radius: float
    capacity: float  # 1 - H(t/n)
    slack: float  # 1 - H(t/n) - k/n
    feasible: bool


def gv_report(t_over_n: float, k_over_n: float = 0.0) -> GvReport:
    """Gilbert-Varshamov analytics for a relative radius and rate.

    ``feasible`` is ``1 - H(t/n) > 0`` restricted to ``t/n < 1/2``, where the
    entropy is monotone; past one half the bound says nothing.
    """
    for v in (t_over_n, k_over_n):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"argument {v} outside [0, 1]")
    cap = 1.0 - binary_entropy(t_over_n)
    return GvReport(
        rate=k_over_n,
        radius=t_over_n,
        capacity=cap,
        slack=cap - k_over_n,
        feasible=bool(cap > 0.0 and t_over_n < 0.5),
    )


def load_code_file(path: str | Path) -> ClassicalCode:
    """Read a JSON code definition.

    Expected keys: ``n``, ``k``, ``t`` and ``parity_check`` (list of bit strings);
    optional ``name``. Unknown keys are rejected.
    """
    data = json.loads(Path(path).read_text())
    return code_from_dict(data)


def code_from_dict(data: dict) -> ClassicalCode:
    allowed = {"n", "k", "t", "parity_check", "name"}
    if not isinstance(data, dict):
        raise ValueError("code definition must be an object")
    extra = set(data) - allowed
    if extra:
        raise ValueError(f"unknown keys in code definition: {sorted(extra)}")
    missing = {"n", "k", "t", "parity_check"} - set(data)
    if missing:
        raise ValueError(f"missing keys in code definition: {sorted(missing)}")
    n, k, t = data["n"], data["k"], data["t"]
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, k, t)):
        raise ValueError("n, k, t must be integers")
    rows = data["parity_check"]
    if not isinstance(rows, list) or len(rows) != n - k:
        raise ValueError(f"expected {n - k} parity-check rows")
    for row in rows:
        if not isinstance(row, str) or len(row) != n or set(row) - {"0", "1"}:
            raise ValueError(f"bad parity-check row {row!r}")
    h = np.array([[int(c) for c in row] for row in rows], dtype=np.uint8)
    code = ClassicalCode.from_parity_check(h, t=t, name=data.get("name", ""))
    if code.k != k:
        raise ValueError(f"parity checks give k={code.k}, file says {k}")
    return code


def code_to_dict(code: ClassicalCode) -> dict:
    return {
        "name": code.name,
        "n": code.n,
        "k": code.k,
        "t": code.t,
        "parity_check": ["".join(str(int(b)) for b in row) for row in code.pchk],
    }
