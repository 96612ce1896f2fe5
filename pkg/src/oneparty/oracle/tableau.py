"""Sign-tracking stabilizer tableau (destabilizer form).

Deliberately plain: one boolean array per component and a loop-based row
product. Row ``(x, z, r)`` stands for ``(-1)^r * prod_j sigma(x_j, z_j)`` with
``sigma(1, 1) = Y``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..pauli import PauliString


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of ``i`` in ``sigma(x1, z1) sigma(x2, z2) = i^g sigma(x1^x2, z1^z2)``."""
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class SignedPauli:
    """``i^phase * prod_j sigma(x_j, z_j)``."""

    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        if len(self.x) != len(self.z):
            raise ValueError("x and z parts differ in length")
        object.__setattr__(self, "phase", self.phase % 4)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def from_pauli_string(cls, p: PauliString, sign: int = 1) -> "SignedPauli":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        x = tuple((p.x >> q) & 1 for q in range(p.n))
        z = tuple((p.z >> q) & 1 for q in range(p.n))
        return cls(x, z, 0 if sign == 1 else 2)

    @classmethod
    def from_str(cls, s: str) -> "SignedPauli":
        sign = 1
        if s[:1] in "+-":
            sign = -1 if s[0] == "-" else 1
            s = s[1:]
        return cls.from_pauli_string(PauliString.from_str(s), sign)

    @classmethod
    def identity(cls, n: int) -> "SignedPauli":
        return cls((0,) * n, (0,) * n)

    def unsigned(self) -> PauliString:
        return PauliString.from_ops([x | (z << 1) for x, z in zip(self.x, self.z)])

    @property
    def hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        if not self.hermitian:
            raise ValueError("non-Hermitian Pauli has no real sign")
        return 1 if self.phase == 0 else -1

    def __mul__(self, other: "SignedPauli") -> "SignedPauli":
        if self.n != other.n:
            raise ValueError("length mismatch")
        ph = self.phase + other.phase
        for a, b, c, d in zip(self.x, self.z, other.x, other.z):
            ph += _g(a, b, c, d)
        x = tuple(a ^ c for a, c in zip(self.x, other.x))
        z = tuple(b ^ d for b, d in zip(self.z, other.z))
        return SignedPauli(x, z, ph)

    def __neg__(self) -> "SignedPauli":
        return SignedPauli(self.x, self.z, self.phase + 2)

    def commutes(self, other: "SignedPauli") -> bool:
        s = sum(a * d + b * c for a, b, c, d in zip(self.x, self.z, other.x, other.z))
        return s % 2 == 0

    def __str__(self):
        pre = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        return pre + str(self.unsigned())


def _check_env() -> bool:
    return os.environ.get("ONEPARTY_TABLEAU_CHECK", "") not in ("", "0")


class Tableau:
    """Stabilizer state on ``n`` qubits; rows ``0..n-1`` destabilizers, ``n..2n-1`` stabilizers."""

    def __init__(self, n: int, check: bool | None = None):
        if n < 1:
            raise ValueError("need at least one qubit")
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1
        self.z[n + idx, idx] = 1
        self.check = _check_env() if check is None else check

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, n: int, check: bool | None = None) -> "Tableau":
        return cls(n, check)

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.check = self.n, self.check
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        return t

    def tensor(self, other: "Tableau") -> "Tableau":
        """State ``self (x) other``; ``self`` occupies the low qubit indices."""
        n, m = self.n, other.n
        t = Tableau(n + m, self.check or other.check)
        t.x[:] = 0
        t.z[:] = 0
        N = n + m
        for dst, src, off, size in ((0, self, 0, n), (n, other, n, m)):
            # destabilizers
            t.x[dst:dst + size, off:off + size] = src.x[:size]
            t.z[dst:dst + size, off:off + size] = src.z[:size]
            t.r[dst:dst + size] = src.r[:size]
            # stabilizers
            t.x[N + dst:N + dst + size, off:off + size] = src.x[size:]
            t.z[N + dst:N + dst + size, off:off + size] = src.z[size:]
            t.r[N + dst:N + dst + size] = src.r[size:]
        t._after_gate()
        return t

    # -- gates -------------------------------------------------------------
    def _q(self, q: int) -> int:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range")
        return q

    def h(self, q: int) -> "Tableau":
        q = self._q(q)
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()
        return self._after_gate()

    def s(self, q: int) -> "Tableau":
        q = self._q(q)
        self.r ^= self.x[:, q] & self.z[:, q]
        self.z[:, q] ^= self.x[:, q]
        return self._after_gate()

    def s_dag(self, q: int) -> "Tableau":
        for _ in range(3):
            self.s(q)
        return self

    def cnot(self, c: int, t: int) -> "Tableau":
        c, t = self._q(c), self._q(t)
        if c == t:
            raise ValueError("control equals target")
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]
        return self._after_gate()

    def t_rot(self, q: int) -> "Tableau":
        """The six-state rotation: ``S^dagger`` then ``H``."""
        self.s_dag(q)
        return self.h(q)

    def pauli(self, q: int, op: str) -> "Tableau":
        q = self._q(q)
        op = op.upper()
        if op in ("X", "Y"):
            self.r ^= self.z[:, q]
        if op in ("Z", "Y"):
            self.r ^= self.x[:, q]
        if op not in ("I", "X", "Y", "Z"):
            raise ValueError(f"unknown Pauli {op!r}")
        return self._after_gate()

    def apply_pauli(self, p: PauliString | SignedPauli) -> "Tableau":
        """Conjugate by a Pauli string (global phase is irrelevant)."""
        if isinstance(p, SignedPauli):
            p = p.unsigned()
        if p.n != self.n:
            raise ValueError("length mismatch")
        px = np.array([(p.x >> q) & 1 for q in range(self.n)], dtype=np.uint8)
        pz = np.array([(p.z >> q) & 1 for q in range(self.n)], dtype=np.uint8)
        anti = ((self.x @ pz) + (self.z @ px)) % 2
        self.r ^= anti.astype(np.uint8)
        return self._after_gate()

    # -- rows ---------------------------------------------------------------
    def row(self, i: int) -> SignedPauli:
        return SignedPauli(tuple(int(v) for v in self.x[i]), tuple(int(v) for v in self.z[i]),
                           2 * int(self.r[i]))

    def stabilizers(self) -> list[SignedPauli]:
        return [self.row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[SignedPauli]:
        return [self.row(i) for i in range(self.n)]

    def _set_row(self, i: int, p: SignedPauli) -> None:
        self.x[i] = p.x
        self.z[i] = p.z
        self.r[i] = 0 if p.sign == 1 else 1

    def _rowsum(self, h: int, i: int) -> None:
        """Row ``h`` <- row ``i`` * row ``h``."""
        ph = 2 * int(self.r[h]) + 2 * int(self.r[i])
        for j in range(self.n):
            ph += _g(int(self.x[i, j]), int(self.z[i, j]), int(self.x[h, j]), int(self.z[h, j]))
        ph %= 4
        if ph not in (0, 2):
            raise AssertionError("row product picked up an imaginary phase")
        self.r[h] = ph // 2
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    def _anticommutes(self, p: SignedPauli) -> np.ndarray:
        px = np.array(p.x, dtype=np.int64)
        pz = np.array(p.z, dtype=np.int64)
        return (((self.x.astype(np.int64) @ pz) + (self.z.astype(np.int64) @ px)) % 2).astype(bool)

    # -- measurement --------------------------------------------------------
    def _deterministic_sign(self, p: SignedPauli) -> int:
        anti = self._anticommutes(p)
        acc = SignedPauli.identity(self.n)
        for i in range(self.n):
            if anti[i]:
                acc = acc * self.row(self.n + i)
        if acc.x != p.x or acc.z != p.z:
            raise AssertionError("operator is not in the stabilizer group")
        # acc = s * (unsigned p) and p = sign_p * (unsigned p)
        return acc.sign * p.sign

    def expectation(self, p: SignedPauli | PauliString | str) -> int:
        """``<p>`` without collapsing: +1, -1, or 0 when the outcome is random."""
        p = _as_signed(p)
        if p.n != self.n:
            raise ValueError("length mismatch")
        if self._anticommutes(p)[self.n:].any():
            return 0
        return self._deterministic_sign(p)

    def measure(self, p: SignedPauli | PauliString | str, rng=None) -> int:
        """Projectively measure a Hermitian Pauli; returns its eigenvalue (+1/-1)."""
        p = _as_signed(p)
        if p.n != self.n:
            raise ValueError("length mismatch")
        if not p.hermitian:
            raise ValueError("can only measure Hermitian Paulis")
        anti = self._anticommutes(p)
        stab_hits = np.nonzero(anti[self.n:])[0]
        if stab_hits.size == 0:
            return self._deterministic_sign(p)
        if rng is None:
            raise ValueError("random outcome needs an rng")
        pr = self.n + int(stab_hits[0])
        for i in range(2 * self.n):
            # the paired destabilizer anticommutes with row pr and is replaced below
            if i != pr and i != pr - self.n and anti[i]:
                self._rowsum(i, pr)
        self.x[pr - self.n] = self.x[pr]
        self.z[pr - self.n] = self.z[pr]
        self.r[pr - self.n] = self.r[pr]
        outcome = int(rng.integers(2))
        self._set_row(pr, p if outcome == 0 else -p)
        self._after_gate()
        return 1 if outcome == 0 else -1

    def measure_z(self, q: int, rng=None) -> int:
        return self.measure(SignedPauli.from_pauli_string(PauliString.on(self.n, {self._q(q): 2})), rng)

    # -- invariants ----------------------------------------------------------
    def symplectic_ok(self) -> bool:
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        form = (x @ z.T + z @ x.T) % 2
        n = self.n
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        want[np.arange(n), n + np.arange(n)] = 1
        want[n + np.arange(n), np.arange(n)] = 1
        return bool(np.array_equal(form, want))

    def _after_gate(self) -> "Tableau":
        if self.check and not self.symplectic_ok():
            raise AssertionError("tableau lost its symplectic structure")
        return self


def _as_signed(p) -> SignedPauli:
    if isinstance(p, SignedPauli):
        return p
    if isinstance(p, PauliString):
        return SignedPauli.from_pauli_string(p)
    if isinstance(p, str):
        return SignedPauli.from_str(p)
    raise TypeError(f"cannot interpret {p!r} as a Pauli")
