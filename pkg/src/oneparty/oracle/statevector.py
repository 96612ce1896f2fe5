"""Tiny dense state-vector simulator used to check the tableau itself."""
from __future__ import annotations

import numpy as np

from ..pauli import PauliString

MAX_QUBITS = 12

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)
_SDAG = _S.conj().T
# six-state rotation: S^dagger first, then H
T_MATRIX = _H @ _SDAG

GATES = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z, "H": _H, "S": _S, "SDAG": _SDAG, "T_ROT": T_MATRIX}


def pauli_matrix(ch: str) -> np.ndarray:
    return GATES[ch.upper()]


class StateVector:
    """Amplitudes stored as an ``(2,)*n`` array; axis ``q`` is qubit ``q``."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"state vector limited to 1..{MAX_QUBITS} qubits")
        self.n = n
        self.psi = np.zeros((2,) * n, dtype=complex)
        self.psi[(0,) * n] = 1.0

    def copy(self) -> "StateVector":
        s = StateVector.__new__(StateVector)
        s.n, s.psi = self.n, self.psi.copy()
        return s

    def vector(self) -> np.ndarray:
        return self.psi.reshape(-1)

    def apply_1q(self, u: np.ndarray, q: int) -> "StateVector":
        if not 0 <= q < self.n:
            raise IndexError(q)
        self.psi = np.moveaxis(np.tensordot(u, self.psi, axes=([1], [q])), 0, q)
        return self

    def gate(self, name: str, q: int) -> "StateVector":
        return self.apply_1q(GATES[name.upper()], q)

    def cnot(self, c: int, t: int) -> "StateVector":
        if c == t:
            raise ValueError("control equals target")
        idx = [slice(None)] * self.n
        idx[c] = 1
        sub = self.psi[tuple(idx)]
        t_axis = t if t < c else t - 1
        self.psi[tuple(idx)] = np.flip(sub, axis=t_axis).copy()
        return self

    def apply_pauli(self, p: PauliString) -> "StateVector":
        for q in range(p.n):
            op = p[q].name
            if op != "I":
                self.gate(op, q)
        return self

    def _apply_string(self, p: PauliString) -> np.ndarray:
        out = self.copy()
        out.apply_pauli(p)
        return out.psi

    def expectation(self, p, sign: int = 1) -> float:
        """Real expectation of ``sign * p``; ``p`` may be a PauliString or SignedPauli."""
        p, sign = _split(p, sign)
        val = np.vdot(self.psi.reshape(-1), self._apply_string(p).reshape(-1))
        return float(np.real(sign * val))

    def measure(self, p, rng, sign: int = 1) -> int:
        p, sign = _split(p, sign)
        pp = sign * self._apply_string(p)
        plus = 0.5 * (self.psi + pp)
        prob = float(np.real(np.vdot(plus.reshape(-1), plus.reshape(-1))))
        outcome = 1 if rng.random() < prob else -1
        proj = plus if outcome == 1 else 0.5 * (self.psi - pp)
        norm = np.linalg.norm(proj)
        self.psi = proj / norm
        return outcome

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.psi.reshape(-1), other.psi.reshape(-1)))


def _split(p, sign):
    from .tableau import SignedPauli

    if isinstance(p, SignedPauli):
        return p.unsigned(), sign * p.sign
    return p, sign
