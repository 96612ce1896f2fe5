"""One-party codes: classical ``[n, k, t]`` codes lifted onto ``n`` Bell pairs.

Qubit layout: pair ``j`` (0-based) occupies qubits ``2j`` (home, kept by the
receiver) and ``2j + 1`` (flying, sent through the channel). A pair's Bell
label is described by two bits: ``a`` (its ZZ sign is flipped) and ``b`` (its
XX sign is flipped). Logical pair ``i`` of a lifted code stores the message
bits ``(a_i, b_i)``; physically ``a = a_msg @ G`` and ``b = b_msg @ G``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .linear import (
    ClassicalCode,
    DecodeStatus,
    as_bits,
    decode,
    gf2_right_inverse,
    repetition3,
)
from .pauli import BellLabel, PairError, Pauli, PauliString, commutes


def home(j: int) -> int:
    return 2 * j


def flying(j: int) -> int:
    return 2 * j + 1


class LogicalOp(enum.Enum):
    IDENTITY = "I"
    X_ODD = "X_odd"  # bit flip of the first logical qubit of a pair (X on flying qubits)
    Z_ODD = "Z_odd"
    X_EVEN = "X_even"  # Z on home qubits
    Z_EVEN = "Z_even"
    U_EVEN = "U_even"  # X on home qubits
    V_EVEN = "V_even"  # Y on home qubits


# (zz flip, xx flip) each operator induces on the logical pair's label
_LABEL_ACTION = {
    LogicalOp.IDENTITY: (0, 0),
    LogicalOp.X_ODD: (1, 0),
    LogicalOp.Z_ODD: (0, 0),
    LogicalOp.X_EVEN: (0, 1),
    LogicalOp.Z_EVEN: (0, 0),
    LogicalOp.U_EVEN: (1, 0),
    LogicalOp.V_EVEN: (1, 1),
}

# two message bits -> the operation that prepares them from a logical Phi+
DENSE_ENCODING = {
    (0, 0): LogicalOp.IDENTITY,
    (0, 1): LogicalOp.X_EVEN,
    (1, 0): LogicalOp.U_EVEN,
    (1, 1): LogicalOp.V_EVEN,
}

_READOUT = {
    BellLabel.PHI_PLUS: (0, 0),
    BellLabel.PHI_MINUS: (0, 1),
    BellLabel.PSI_PLUS: (1, 0),
    BellLabel.PSI_MINUS: (1, 1),
}


class CorrectionStatus(str, enum.Enum):
    CORRECTED = "corrected"
    AMBIGUOUS_BIT = "ambiguous_bit"
    AMBIGUOUS_PHASE = "ambiguous_phase"
    AMBIGUOUS_BOTH = "ambiguous_both"


@dataclass(frozen=True)
class LogicalState:
    labels: tuple[BellLabel, ...]

    @classmethod
    def zero(cls, k: int) -> "LogicalState":
        return cls((BellLabel.PHI_PLUS,) * k)

    def bits(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([lab.zz_flip for lab in self.labels], dtype=np.uint8)
        b = np.array([lab.xx_flip for lab in self.labels], dtype=np.uint8)
        return a, b


@dataclass(frozen=True)
class SyndromeRecord:
    """Stabilizer outcomes (+1/-1), one per parity-check row for each type."""

    z_synd: tuple[int, ...]
    x_synd: tuple[int, ...]

    def bit_syndrome(self) -> np.ndarray:
        return np.array([s < 0 for s in self.z_synd], dtype=np.uint8)

    def phase_syndrome(self) -> np.ndarray:
        return np.array([s < 0 for s in self.x_synd], dtype=np.uint8)


def _pair_string(n_pairs: int, support, home_op: Pauli | None, flying_op: Pauli | None) -> PauliString:
    ops = {}
    for j in support:
        if home_op is not None:
            ops[home(j)] = home_op
        if flying_op is not None:
            ops[flying(j)] = flying_op
    return PauliString.on(2 * n_pairs, ops)


@dataclass(frozen=True, eq=False)
class OnePartyCode:
    """A ``[[2n, 2k, t]]`` one-party code built by :func:`lift`."""

    base: ClassicalCode
    stab_z: tuple[PauliString, ...]
    stab_x: tuple[PauliString, ...]
    logical: dict = field(repr=False)
    _proj: np.ndarray = field(repr=False, default=None)

    @property
    def n_pairs(self) -> int:
        return self.base.n

    @property
    def n_qubits(self) -> int:
        return 2 * self.base.n

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def t(self) -> int:
        return self.base.t

    @property
    def stabilizers(self) -> tuple[PauliString, ...]:
        return self.stab_z + self.stab_x

    def logical_op(self, op: LogicalOp, i: int) -> PauliString:
        if not 0 <= i < self.k:
            raise IndexError(f"logical pair {i} out of range for k={self.k}")
        if op is LogicalOp.IDENTITY:
            return PauliString.identity(self.n_qubits)
        return self.logical[(op, i)]

    # -- label bookkeeping ------------------------------------------------
    def physical_labels(self, state: LogicalState) -> list[BellLabel]:
        a, b = state.bits()
        pa, pb = self.base.encode(a), self.base.encode(b)
        return [BellLabel.from_bits(int(x), int(z)) for x, z in zip(pa, pb)]

    def logical_state(self, labels: Sequence[BellLabel]) -> LogicalState:
        """Inverse of :meth:`physical_labels`; labels must lie in the code space."""
        if len(labels) != self.n_pairs:
            raise ValueError("one label per physical pair expected")
        a = np.array([lab.zz_flip for lab in labels], dtype=np.uint8)
        b = np.array([lab.xx_flip for lab in labels], dtype=np.uint8)
        ma, mb = self.base.unencode(a), self.base.unencode(b)
        return LogicalState(tuple(BellLabel.from_bits(int(x), int(z)) for x, z in zip(ma, mb)))

    # -- batch decoding on packed words ------------------------------------
    def decode_words(self, words) -> np.ndarray:
        """Decode packed one-type observations into packed message bits."""
        return kernels.decode_logical(
            words, self.base.pchk_masks, self.base.leader_masks(), self._proj
        )

    def ambiguous_words(self, words) -> np.ndarray:
        s = kernels.syndromes(words, self.base.pchk_masks)
        return self.base.ambiguous_flags()[s.astype(np.intp)].astype(bool)

    def encode_bits(self, msg) -> np.ndarray:
        return self.base.encode(msg).astype(np.uint8)

    def decode_bits(self, observed) -> np.ndarray:
        """Decode ``(trials, n_pairs)`` observed bits of one type to ``(trials, k)``."""
        obs = as_bits(observed)
        words = kernels.pack_bits(obs.reshape(-1, self.n_pairs))
        out = self.decode_words(words)
        shifts = np.arange(self.k, dtype=np.uint64)
        return ((out[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)

    def __repr__(self):
        return f"OnePartyCode[[{self.n_qubits},{2 * self.k},{self.t}]] from {self.base!r}"


def lift(base: ClassicalCode) -> OnePartyCode:
    """Lift a classical code to Bell pairs.

    Each parity-check row with support ``S`` yields ``prod_{j in S} Z_h Z_f``
    and ``prod_{j in S} X_h X_f``. Logical bit flips use the generator rows.
    The logical Z operators use the generator rows too when ``G G^T = I``
    (as for repetition codes); otherwise they use the columns of a right
    inverse of ``G`` so that each anticommutes only with its own partner.
    """
    n = base.n
    if base.gen.shape[0] and np.linalg.matrix_rank(base.gen.astype(float)) == 0:
        raise ValueError("rank-deficient base code")
    stab_z = tuple(_pair_string(n, np.nonzero(row)[0], Pauli.Z, Pauli.Z) for row in base.pchk)
    stab_x = tuple(_pair_string(n, np.nonzero(row)[0], Pauli.X, Pauli.X) for row in base.pchk)

    gen = base.gen.astype(np.int64)
    gram = (gen @ gen.T) % 2
    if base.k and np.array_equal(gram, np.eye(base.k, dtype=np.int64)):
        z_supports = [np.nonzero(row)[0] for row in base.gen]
    else:
        rinv = gf2_right_inverse(base.gen) if base.k else np.zeros((n, 0), np.uint8)
        z_supports = [np.nonzero(col)[0] for col in rinv.T]

    logical = {}
    for i in range(base.k):
        s = np.nonzero(base.gen[i])[0]
        tz = z_supports[i]
        logical[(LogicalOp.X_ODD, i)] = _pair_string(n, s, None, Pauli.X)
        logical[(LogicalOp.Z_ODD, i)] = _pair_string(n, tz, Pauli.Z, Pauli.Z)
        logical[(LogicalOp.X_EVEN, i)] = _pair_string(n, s, Pauli.Z, None)
        logical[(LogicalOp.Z_EVEN, i)] = _pair_string(n, tz, Pauli.X, Pauli.X)
        logical[(LogicalOp.U_EVEN, i)] = _pair_string(n, s, Pauli.X, None)
        logical[(LogicalOp.V_EVEN, i)] = _pair_string(n, s, Pauli.Y, None)
    return OnePartyCode(base=base, stab_z=stab_z, stab_x=stab_x, logical=logical,
                        _proj=base.message_projector())


def error_string(n_pairs: int, errors: Sequence[PairError]) -> PauliString:
    if len(errors) != n_pairs:
        raise ValueError(f"expected {n_pairs} pair errors, got {len(errors)}")
    ops = {}
    for j, e in enumerate(errors):
        ops[home(j)] = e.home
        ops[flying(j)] = e.flying
    return PauliString.on(2 * n_pairs, ops)


def extract_syndrome(code: OnePartyCode, errors: Sequence[PairError]) -> SyndromeRecord:
    e = error_string(code.n_pairs, errors)
    z = tuple(1 if commutes(g, e) else -1 for g in code.stab_z)
    x = tuple(1 if commutes(g, e) else -1 for g in code.stab_x)
    return SyndromeRecord(z_synd=z, x_synd=x)


def decode_and_correct(code: OnePartyCode, synd: SyndromeRecord) -> tuple[tuple[Pauli, ...], CorrectionStatus]:
    """Turn a syndrome into flying-qubit corrections.

    The Z-type outcomes locate bit flips and the X-type outcomes phase flips;
    each is decoded independently with the base code's coset-leader decoder.
    """
    r = code.base.r
    if len(synd.z_synd) != r or len(synd.x_synd) != r:
        raise ValueError("syndrome does not match code")
    bit_err, bit_status = decode(code.base, synd.bit_syndrome())
    phase_err, phase_status = decode(code.base, synd.phase_syndrome())
    correction = tuple(Pauli.from_bits(int(x), int(z)) for x, z in zip(bit_err, phase_err))
    amb_bit = bit_status is DecodeStatus.AMBIGUOUS
    amb_phase = phase_status is DecodeStatus.AMBIGUOUS
    if amb_bit and amb_phase:
        status = CorrectionStatus.AMBIGUOUS_BOTH
    elif amb_bit:
        status = CorrectionStatus.AMBIGUOUS_BIT
    elif amb_phase:
        status = CorrectionStatus.AMBIGUOUS_PHASE
    else:
        status = CorrectionStatus.CORRECTED
    return correction, status


def apply_correction(errors: Sequence[PairError], correction: Sequence[Pauli]) -> list[PairError]:
    return [PairError(e.home, Pauli(int(e.flying) ^ int(c))) for e, c in zip(errors, correction)]


def labels_after_errors(labels: Sequence[BellLabel], errors: Sequence[PairError]) -> list[BellLabel]:
    from .pauli import bell_after_error

    return [bell_after_error(lab, e) for lab, e in zip(labels, errors)]


def apply_logical(code: OnePartyCode, op: LogicalOp, i: int, state: LogicalState) -> LogicalState:
    """Label-level action of a logical operator on logical pair ``i`` (0-based)."""
    if not 0 <= i < code.k:
        raise IndexError(f"logical pair {i} out of range for k={code.k}")
    if len(state.labels) != code.k:
        raise ValueError("state does not match code")
    dz, dx = _LABEL_ACTION[op]
    lab = state.labels[i]
    new = BellLabel.from_bits(lab.zz_flip ^ dz, lab.xx_flip ^ dx)
    return LogicalState(state.labels[:i] + (new,) + state.labels[i + 1:])


def encode_message(code: OnePartyCode, message) -> LogicalState:
    bits = as_bits(message).reshape(-1)
    if bits.size != 2 * code.k:
        raise ValueError(f"message must have {2 * code.k} bits")
    state = LogicalState.zero(code.k)
    for i in range(code.k):
        op = DENSE_ENCODING[(int(bits[2 * i]), int(bits[2 * i + 1]))]
        state = apply_logical(code, op, i, state)
    return state


def logical_bell_readout(code: OnePartyCode, labels: Sequence[BellLabel] | LogicalState) -> np.ndarray:
    if isinstance(labels, LogicalState):
        labels = labels.labels
    if len(labels) != code.k:
        raise ValueError("one label per logical pair expected")
    return np.array([b for lab in labels for b in _READOUT[lab]], dtype=np.uint8)


@dataclass(frozen=True)
class FrameResult:
    syndrome: SyndromeRecord
    correction: tuple[Pauli, ...]
    status: CorrectionStatus
    physical_labels: tuple[BellLabel, ...]
    logical: LogicalState
    readout: np.ndarray


def run_frame(code: OnePartyCode, message, errors: Sequence[PairError]) -> FrameResult:
    """Encode, corrupt, correct and read out one block in the Pauli frame."""
    state = encode_message(code, message)
    labels = labels_after_errors(code.physical_labels(state), errors)
    synd = extract_syndrome(code, errors)
    corr, status = decode_and_correct(code, synd)
    labels = labels_after_errors(labels, [PairError(flying=c) for c in corr])
    logical = code.logical_state(labels)
    return FrameResult(synd, corr, status, tuple(labels), logical, logical_bell_readout(code, logical))


# --- concatenation ----------------------------------------------------------

@dataclass(frozen=True)
class ConcatSchedule:
    rounds: int
    q0: float

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("need at least one round")
        if not 0.0 <= self.q0 <= 1.0:
            raise ValueError("q0 outside [0, 1]")


def recursion_q(q: float) -> float:
    """Per-type error rate of the logical pair after one [[6,2,1]] round."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"rate {q} outside [0, 1]")
    return (3.0 - 2.0 * q) * q * q


def iterate_recursion(schedule: ConcatSchedule) -> list[float]:
    out = []
    q = schedule.q0
    for _ in range(schedule.rounds):
        q = recursion_q(q)
        out.append(q)
    return out


def convergence_bounds(q0: float, rounds: int) -> dict[str, list[float]]:
    """Two closed-form upper bounds on ``q_k`` for reporting.

    ``induction`` follows from ``q_k < 3 q_{k-1}^2``:
    ``q_k < (3 q0)^(2^k) / 3``. ``sqrt3_power`` is ``(sqrt(3) q0)^(2k)``,
    which is not implied by that inequality and is reported, not asserted.
    """
    ks = range(1, rounds + 1)
    return {
        "induction": [(3.0 * q0) ** (2 ** k) / 3.0 for k in ks],
        "sqrt3_power": [(3.0 ** 0.5 * q0) ** (2 * k) for k in ks],
    }


_REP3 = lift(repetition3())


def code_621() -> OnePartyCode:
    return _REP3


def simulate_concat_round(x_bits, z_bits) -> tuple[np.ndarray, np.ndarray]:
    """One concatenation round on per-pair bit/phase flip indicators.

    Consecutive triples are decoded as [[6,2,1]] blocks; the returned arrays
    hold one logical bit/phase flip indicator per block.
    """
    x = as_bits(x_bits).reshape(-1)
    z = as_bits(z_bits).reshape(-1)
    if x.size % 3 or x.size != z.size:
        raise ValueError("input length must be a multiple of 3 and equal for both types")
    xw = kernels.pack_bits(x.reshape(-1, 3))
    zw = kernels.pack_bits(z.reshape(-1, 3))
    return (_REP3.decode_words(xw).astype(np.uint8), _REP3.decode_words(zw).astype(np.uint8))


def concat_round_pairs(errors: Sequence[PairError]) -> list[PairError]:
    """Object-level version of :func:`simulate_concat_round`."""
    if len(errors) % 3:
        raise ValueError("input length must be a multiple of 3")
    out = []
    for g in range(0, len(errors), 3):
        group = list(errors[g:g + 3])
        corr, _ = decode_and_correct(_REP3, extract_syndrome(_REP3, group))
        resid = apply_correction(group, corr)
        a = np.array([e.effective.x for e in resid], dtype=np.uint8)
        b = np.array([e.effective.z for e in resid], dtype=np.uint8)
        (la,), (lb,) = _REP3.base.unencode(a), _REP3.base.unencode(b)
        out.append(PairError(flying=Pauli.from_bits(int(la), int(lb))))
    return out


@dataclass
class ConcatResult:
    q0: float
    groups: list[int]
    bit_failures: list[int]
    phase_failures: list[int]

    def rates(self, kind: str = "bit") -> list[float]:
        fails = self.bit_failures if kind == "bit" else self.phase_failures
        return [f / g for f, g in zip(fails, self.groups)]

    def __add__(self, other: "ConcatResult") -> "ConcatResult":
        return ConcatResult(
            self.q0,
            [a + b for a, b in zip(self.groups, other.groups)],
            [a + b for a, b in zip(self.bit_failures, other.bit_failures)],
            [a + b for a, b in zip(self.phase_failures, other.phase_failures)],
        )


def simulate_concatenation(q0: float, rounds: int, final_groups: int, rng,
                           mode: str = "physical", q_phase: float | None = None) -> ConcatResult:
    """Monte Carlo of concatenated [[6,2,1]] decoding.

    ``mode="physical"`` samples ``3**rounds * final_groups`` physical pairs and
    decodes them round by round. ``mode="recursion"`` feeds every round fresh
    pairs at the previous round's analytic rate, with ``final_groups`` blocks
    per round.
    """
    q_phase = q0 if q_phase is None else q_phase
    if mode == "physical":
        n = final_groups * 3 ** rounds
        x = (rng.random(n) < q0).astype(np.uint8)
        z = (rng.random(n) < q_phase).astype(np.uint8)
        groups, bf, pf = [], [], []
        for _ in range(rounds):
            x, z = simulate_concat_round(x, z)
            groups.append(int(x.size))
            bf.append(int(x.sum()))
            pf.append(int(z.sum()))
        return ConcatResult(q0, groups, bf, pf)
    if mode == "recursion":
        qb, qp = q0, q_phase
        groups, bf, pf = [], [], []
        for _ in range(rounds):
            x = (rng.random(3 * final_groups) < qb).astype(np.uint8)
            z = (rng.random(3 * final_groups) < qp).astype(np.uint8)
            x, z = simulate_concat_round(x, z)
            groups.append(final_groups)
            bf.append(int(x.sum()))
            pf.append(int(z.sum()))
            qb, qp = recursion_q(qb), recursion_q(qp)
        return ConcatResult(q0, groups, bf, pf)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class ConcatenatedCode:
    """Concatenated [[6,2,1]] code: ``3**rounds`` pairs carry one logical pair."""

    rounds: int

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("need at least one round")

    @property
    def n_pairs(self) -> int:
        return 3 ** self.rounds

    @property
    def k(self) -> int:
        return 1

    @property
    def t(self) -> int:
        # guaranteed: 2**rounds - 1 flips of each type are always corrected
        return 2 ** self.rounds - 1

    def encode_bits(self, msg) -> np.ndarray:
        m = as_bits(msg).reshape(-1, 1)
        return np.repeat(m, self.n_pairs, axis=1)

    def decode_bits(self, observed) -> np.ndarray:
        obs = as_bits(observed).reshape(-1, self.n_pairs)
        cur = obs.reshape(-1)
        for _ in range(self.rounds):
            cur, _ = simulate_concat_round(cur, np.zeros_like(cur))
        return cur.reshape(-1, 1)

    def __repr__(self):
        return f"ConcatenatedCode(rounds={self.rounds})"
