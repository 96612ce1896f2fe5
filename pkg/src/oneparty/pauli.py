"""Phase-free Pauli algebra and Bell-pair error bookkeeping.

Single-qubit Paulis are encoded as two bits ``(x, z)`` packed into an int,
``I=0, X=1, Z=2, Y=3``, so the group product modulo phase is a XOR.
Global phases are dropped everywhere in this module; measurement outcomes on
Bell pairs do not depend on them.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .rng import RandomStream


class Pauli(enum.IntEnum):
    I = 0
    X = 1
    Z = 2
    Y = 3

    @property
    def x(self) -> int:
        return self.value & 1

    @property
    def z(self) -> int:
        return self.value >> 1

    @classmethod
    def from_bits(cls, x: int, z: int) -> "Pauli":
        return cls((x & 1) | ((z & 1) << 1))

    @classmethod
    def parse(cls, ch: str) -> "Pauli":
        try:
            return cls[ch.upper().replace("_", "I")]
        except KeyError:
            raise ValueError(f"not a Pauli: {ch!r}") from None


def pauli_mul(a: Pauli, b: Pauli) -> Pauli:
    """Product of two single-qubit Paulis modulo global phase."""
    return Pauli(int(a) ^ int(b))


@dataclass(frozen=True)
class PauliString:
    """An ``n``-qubit Pauli operator without phase.

    ``x`` and ``z`` are bitmasks: bit ``q`` set in ``x`` means an X component
    on qubit ``q`` (qubit 0 is the least significant bit).
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError("Pauli string has support outside its qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_ops(cls, ops: Iterable[Pauli | int]) -> "PauliString":
        x = z = 0
        n = 0
        for q, p in enumerate(ops):
            p = Pauli(p)
            x |= p.x << q
            z |= p.z << q
            n = q + 1
        return cls(n, x, z)

    @classmethod
    def from_str(cls, s: str) -> "PauliString":
        """Parse a dense label such as ``"ZZZZII"`` (qubit 0 first)."""
        return cls.from_ops(Pauli.parse(ch) for ch in s)

    @classmethod
    def on(cls, n: int, paulis: Mapping[int, Pauli | int]) -> "PauliString":
        """Build from a sparse ``{qubit: Pauli}`` mapping."""
        x = z = 0
        for q, p in paulis.items():
            if not 0 <= q < n:
                raise IndexError(f"qubit {q} out of range for {n} qubits")
            p = Pauli(p)
            x |= p.x << q
            z |= p.z << q
        return cls(n, x, z)

    def __getitem__(self, q: int) -> Pauli:
        if not 0 <= q < self.n:
            raise IndexError(q)
        return Pauli.from_bits(self.x >> q, self.z >> q)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return (self[q] for q in range(self.n))

    def __mul__(self, other: "PauliString") -> "PauliString":
        _check_len(self, other)
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def support(self) -> tuple[int, ...]:
        m = self.x | self.z
        return tuple(q for q in range(self.n) if m >> q & 1)

    def __str__(self) -> str:
        return "".join(self[q].name for q in range(self.n))


def _check_len(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product of ``a`` and ``b`` vanishes."""
    _check_len(a, b)
    return ((a.x & b.z) ^ (a.z & b.x)).bit_count() % 2 == 0


class BellLabel(enum.Enum):
    """The four Bell states, keyed by their ``(XX, ZZ)`` eigenvalues."""

    PHI_PLUS = (1, 1)
    PSI_PLUS = (1, -1)
    PHI_MINUS = (-1, 1)
    PSI_MINUS = (-1, -1)

    @property
    def xx_sign(self) -> int:
        return self.value[0]

    @property
    def zz_sign(self) -> int:
        return self.value[1]

    @classmethod
    def from_signs(cls, xx_sign: int, zz_sign: int) -> "BellLabel":
        return cls((xx_sign, zz_sign))

    @classmethod
    def from_bits(cls, zz_flip: int, xx_flip: int) -> "BellLabel":
        """Label whose ZZ sign is flipped iff ``zz_flip`` and XX iff ``xx_flip``."""
        return cls((1 - 2 * (xx_flip & 1), 1 - 2 * (zz_flip & 1)))

    @property
    def zz_flip(self) -> int:
        return int(self.zz_sign < 0)

    @property
    def xx_flip(self) -> int:
        return int(self.xx_sign < 0)


@dataclass(frozen=True)
class PairError:
    home: Pauli = Pauli.I
    flying: Pauli = Pauli.I

    @property
    def effective(self) -> Pauli:
        """Single Pauli with the same action on the Bell label."""
        return pauli_mul(self.home, self.flying)


def bell_after_error(initial: BellLabel, e: PairError) -> BellLabel:
    p = e.effective
    return BellLabel.from_signs(
        initial.xx_sign * (1 - 2 * p.z),
        initial.zz_sign * (1 - 2 * p.x),
    )


@dataclass(frozen=True)
class ChannelParams:
    """Independent single-qubit Pauli channel."""

    p_x: float = 0.0
    p_y: float = 0.0
    p_z: float = 0.0

    def __post_init__(self):
        for name in ("p_x", "p_y", "p_z"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.p_x + self.p_y + self.p_z > 1.0 + 1e-12:
            raise ValueError("p_x + p_y + p_z exceeds 1")

    @classmethod
    def symmetric(cls, p: float) -> "ChannelParams":
        return cls(p, p, p)

    @classmethod
    def independent(cls, q_bit: float, q_phase: float | None = None) -> "ChannelParams":
        """Channel where bit and phase flips occur independently."""
        q_phase = q_bit if q_phase is None else q_phase
        return cls(
            p_x=q_bit * (1 - q_phase),
            p_y=q_bit * q_phase,
            p_z=(1 - q_bit) * q_phase,
        )

    def fidelity(self) -> float:
        return 1.0 - self.p_x - self.p_y - self.p_z

    @property
    def bit_flip_rate(self) -> float:
        return self.p_x + self.p_y

    @property
    def phase_flip_rate(self) -> float:
        return self.p_z + self.p_y

    def distribution(self) -> dict[Pauli, float]:
        return {Pauli.I: self.fidelity(), Pauli.X: self.p_x, Pauli.Y: self.p_y, Pauli.Z: self.p_z}


@dataclass(frozen=True)
class WernerParams:
    fidelity_f: float

    def __post_init__(self):
        if not 0.0 <= self.fidelity_f <= 1.0:
            raise ValueError("fidelity outside [0, 1]")

    def channel(self) -> ChannelParams:
        return ChannelParams.symmetric((1.0 - self.fidelity_f) / 3.0)


def sample_channel(params: ChannelParams, rng: RandomStream) -> Pauli:
    return Pauli(int(sample_paulis(params, 1, rng)[0]))


def sample_paulis(params: ChannelParams, size, rng: RandomStream) -> np.ndarray:
    """Vectorised :func:`sample_channel`; returns ``uint8`` Pauli codes."""
    u = rng.random(size)
    out = np.zeros(np.shape(u), dtype=np.uint8)
    c1 = params.p_x
    c2 = c1 + params.p_y
    c3 = c2 + params.p_z
    out[u < c3] = Pauli.Z
    out[u < c2] = Pauli.Y
    out[u < c1] = Pauli.X
    return out


# --- symmetrisation -------------------------------------------------------

# Conjugation T σ T† with T = [[1, -i], [1, i]]/sqrt(2) cycles X -> Y -> Z -> X
# (modulo phase); regenerated from the matrix in tests/test_pauli.py.
T_CYCLE: dict[Pauli, Pauli] = {Pauli.I: Pauli.I, Pauli.X: Pauli.Y, Pauli.Y: Pauli.Z, Pauli.Z: Pauli.X}

# Bilateral pi/2 rotations about x, y, z act on the error label as the
# transpositions below (modulo phase); regenerated from exp(-i pi/4 σ) in tests.
TWIRL_GENERATORS: dict[str, dict[Pauli, Pauli]] = {
    "B_x": {Pauli.I: Pauli.I, Pauli.X: Pauli.X, Pauli.Y: Pauli.Z, Pauli.Z: Pauli.Y},
    "B_y": {Pauli.I: Pauli.I, Pauli.X: Pauli.Z, Pauli.Y: Pauli.Y, Pauli.Z: Pauli.X},
    "B_z": {Pauli.I: Pauli.I, Pauli.X: Pauli.Y, Pauli.Y: Pauli.X, Pauli.Z: Pauli.Z},
}


def _as_table(perm: Mapping[Pauli, Pauli]) -> tuple[int, ...]:
    return tuple(int(perm[Pauli(c)]) for c in range(4))


def _closure(generators: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    gens = list(generators)
    identity = (0, 1, 2, 3)
    group = [identity]
    frontier = [identity]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(h[g[c]] for c in range(4))
                if gh not in group:
                    group.append(gh)
                    nxt.append(gh)
        frontier = nxt
    return sorted(group)


TWIRL_GROUP: list[tuple[int, ...]] = _closure(_as_table(g) for g in TWIRL_GENERATORS.values())
TWIRL_TABLE = np.array(TWIRL_GROUP, dtype=np.uint8)

_t1 = _as_table(T_CYCLE)
_t2 = tuple(_t1[_t1[c]] for c in range(4))
# row r: image of each Pauli code under conjugation by T^r
T_POWER_TABLE = np.array([(0, 1, 2, 3), _t1, _t2], dtype=np.uint8)
# row r: inverse permutation (conjugation by T^-r)
T_UNDO_TABLE = np.array([(0, 1, 2, 3), _t2, _t1], dtype=np.uint8)
HADAMARD_TABLE = np.array([0, 2, 1, 3], dtype=np.uint8)


def hadamard_conj(p: Pauli) -> Pauli:
    return Pauli(int(HADAMARD_TABLE[int(p)]))


def sixstate_symmetrize(e: Pauli, r: int) -> Pauli:
    """Conjugate ``e`` by ``T**r``."""
    if r not in (0, 1, 2):
        raise ValueError(f"rotation index must be 0, 1 or 2, got {r}")
    return Pauli(int(T_POWER_TABLE[r, int(e)]))


def sixstate_undo(e: Pauli, r: int) -> Pauli:
    """Inverse of :func:`sixstate_symmetrize`.

    An error ``E`` hitting a qubit that was rotated by ``T**r`` before the
    channel and un-rotated afterwards acts as ``sixstate_undo(E, r)``.
    """
    if r not in (0, 1, 2):
        raise ValueError(f"rotation index must be 0, 1 or 2, got {r}")
    return Pauli(int(T_UNDO_TABLE[r, int(e)]))


def twirl_distribution(dist: Mapping[Pauli, Fraction | float]) -> dict[Pauli, Fraction | float]:
    """Exact average of a Pauli-label distribution over the twirl group."""
    out = {p: 0 * next(iter(dist.values())) for p in Pauli}
    size = len(TWIRL_GROUP)
    for g in TWIRL_GROUP:
        for p, w in dist.items():
            out[Pauli(g[int(p)])] += w / size
    return out


def werner_twirl(e: PairError, rng: RandomStream) -> PairError:
    """Conjugate both halves of a pair error by one random twirl element."""
    g = TWIRL_GROUP[int(rng.integers(len(TWIRL_GROUP)))]
    return PairError(Pauli(g[int(e.home)]), Pauli(g[int(e.flying)]))


def all_pair_errors() -> Sequence[PairError]:
    return [PairError(h, f) for h, f in itertools.product(Pauli, Pauli)]
