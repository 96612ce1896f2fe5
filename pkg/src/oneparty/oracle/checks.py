"""Tableau pipelines that shadow the Pauli-frame shortcuts."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..code import (
    LogicalOp,
    LogicalState,
    OnePartyCode,
    SyndromeRecord,
    decode_and_correct,
    error_string,
    flying,
    home,
    lift,
    logical_bell_readout,
    run_frame,
)
from ..linear import hamming7, repetition3
from ..pauli import BellLabel, PairError, Pauli, PauliString
from .circuit import load_builtin, run_circuit
from .tableau import SignedPauli, Tableau

SYNDROME_CIRCUIT_621 = "syndrome_621.circ"
N_ANCILLA_621 = 4


def prepare_bell_pairs(n_pairs: int, check: bool | None = None) -> Tableau:
    """``n_pairs`` copies of Phi+ on qubits ``(2j, 2j+1)``."""
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    tab = Tableau.zero(2 * n_pairs, check)
    for j in range(n_pairs):
        tab.h(home(j))
        tab.cnot(home(j), flying(j))
    return tab


def canonical_string(labels) -> PauliString:
    """``X`` on flying qubits with a ZZ flip, ``Z`` on home qubits with an XX flip."""
    ops = {}
    for j, lab in enumerate(labels):
        if lab.zz_flip:
            ops[flying(j)] = Pauli.X
        if lab.xx_flip:
            ops[home(j)] = Pauli.Z
    return PauliString.on(2 * len(labels), ops)


def encoded_tableau(code: OnePartyCode, state: LogicalState, check: bool | None = None) -> Tableau:
    tab = prepare_bell_pairs(code.n_pairs, check)
    tab.apply_pauli(canonical_string(code.physical_labels(state)))
    return tab


def tableau_syndrome(code: OnePartyCode, tab: Tableau, rng=None) -> SyndromeRecord:
    z = tuple(tab.measure(SignedPauli.from_pauli_string(g), rng) for g in code.stab_z)
    x = tuple(tab.measure(SignedPauli.from_pauli_string(g), rng) for g in code.stab_x)
    return SyndromeRecord(z_synd=z, x_synd=x)


def tableau_bell_labels(tab: Tableau, n_pairs: int, rng=None) -> list[BellLabel]:
    """Bell-measure every pair (XX then ZZ)."""
    out = []
    for j in range(n_pairs):
        xx = PauliString.on(tab.n, {home(j): Pauli.X, flying(j): Pauli.X})
        zz = PauliString.on(tab.n, {home(j): Pauli.Z, flying(j): Pauli.Z})
        sx = tab.measure(SignedPauli.from_pauli_string(xx), rng)
        sz = tab.measure(SignedPauli.from_pauli_string(zz), rng)
        out.append(BellLabel.from_signs(sx, sz))
    return out


def measure_syndrome_circuit_621(data: Tableau, rng=None) -> tuple[tuple[int, ...], Tableau]:
    """Run the stored extraction circuit with four fresh ancillas.

    Returns the outcomes in register order (X1X2X3X4, X3X4X5X6, Z1Z2Z3Z4,
    Z3Z4Z5Z6) and the joint post-measurement tableau.
    """
    if data.n != 6:
        raise ValueError("the [[6,2,1]] circuit needs six data qubits")
    circ = load_builtin(SYNDROME_CIRCUIT_621)
    tab = Tableau.zero(N_ANCILLA_621, data.check).tensor(data)
    out = run_circuit(circ, tab, rng)
    return tuple(out), tab


def circuit_outcomes_to_syndrome(outcomes) -> SyndromeRecord:
    o = tuple(outcomes)
    return SyndromeRecord(z_synd=(o[2], o[3]), x_synd=(o[0], o[1]))


# --- encoded-state transforms --------------------------------------------

TRANSFORM_OPS = {
    "X1": LogicalOp.X_ODD,
    "Z1": LogicalOp.Z_ODD,
    "X2": LogicalOp.X_EVEN,
    "Z2": LogicalOp.Z_EVEN,
}


def _state_from_bits(bits: str) -> LogicalState:
    labs = []
    for i in range(0, len(bits), 2):
        labs.append(BellLabel.from_bits(int(bits[i]), int(bits[i + 1])))
    return LogicalState(tuple(labs))


def transform_with_sign(code: OnePartyCode, op: LogicalOp, i: int, state: LogicalState,
                        check: bool | None = None) -> tuple[int, LogicalState]:
    """Apply a logical operator on the tableau and report ``(sign, new state)``.

    The new logical state comes from Bell-measuring the result. The sign is
    the eigenvalue of ``C(new)^dagger P C(old)`` on the all-Phi+ state, where
    ``C`` is the canonical preparation string of each encoded state.
    """
    p = code.logical_op(op, i)
    tab = encoded_tableau(code, state, check)
    tab.apply_pauli(p)
    labels = tableau_bell_labels(tab.copy(), code.n_pairs)
    new = code.logical_state(labels)
    c_old = SignedPauli.from_pauli_string(canonical_string(code.physical_labels(state)))
    c_new = SignedPauli.from_pauli_string(canonical_string(code.physical_labels(new)))
    q = c_new * SignedPauli.from_pauli_string(p) * c_old
    sign = prepare_bell_pairs(code.n_pairs, check).expectation(q)
    if sign == 0:
        raise AssertionError("logical operator left the code space")
    return sign, new


def transform_table(code: OnePartyCode | None = None) -> dict[tuple[str, str], tuple[int, str]]:
    """``{(state, op): (sign, result)}`` for the [[6,2,1]] transform table."""
    code = code or lift(repetition3())
    if code.k != 1:
        raise ValueError("transform table is defined for a single logical pair")
    out = {}
    for bits in ("00", "01", "10", "11"):
        st = _state_from_bits(bits)
        for name, op in TRANSFORM_OPS.items():
            sign, new = transform_with_sign(code, op, 0, st)
            out[(bits, name)] = (sign, "".join(str(b) for b in logical_bell_readout(code, new)))
    return out


# --- frame vs tableau ----------------------------------------------------

@dataclass
class EquivalenceReport:
    code: str
    trials: int = 0
    syndrome_mismatches: int = 0
    label_mismatches: int = 0
    readout_mismatches: int = 0
    circuit_mismatches: int = 0
    examples: list = field(default_factory=list)

    @property
    def mismatches(self) -> int:
        return (self.syndrome_mismatches + self.label_mismatches
                + self.readout_mismatches + self.circuit_mismatches)

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def random_pair_errors(n_pairs: int, rng, home_rate: float = 0.2) -> list[PairError]:
    f = rng.integers(0, 4, size=n_pairs)
    h = np.where(rng.random(n_pairs) < home_rate, rng.integers(0, 4, size=n_pairs), 0)
    return [PairError(Pauli(int(a)), Pauli(int(b))) for a, b in zip(h, f)]


def tableau_pipeline(code: OnePartyCode, message, errors, rng=None):
    from ..code import encode_message

    state = encode_message(code, message)
    tab = encoded_tableau(code, state)
    tab.apply_pauli(error_string(code.n_pairs, errors))
    synd = tableau_syndrome(code, tab, rng)
    corr, status = decode_and_correct(code, synd)
    tab.apply_pauli(PauliString.on(code.n_qubits, {flying(j): c for j, c in enumerate(corr)}))
    labels = tableau_bell_labels(tab, code.n_pairs, rng)
    logical = code.logical_state(labels)
    return synd, tuple(labels), logical_bell_readout(code, logical)


def oracle_equivalence(code: OnePartyCode, trials: int, rng, use_circuit: bool | None = None) -> EquivalenceReport:
    """Compare frame and tableau pipelines on random messages and errors.

    For the [[6,2,1]] code the syndrome is also taken from the gate-level
    extraction circuit (every trial by default).
    """
    from ..code import encode_message

    if use_circuit is None:
        use_circuit = code.n_pairs == 3 and code.k == 1
    rep = EquivalenceReport(code=repr(code))
    for _ in range(trials):
        msg = rng.integers(0, 2, size=2 * code.k).astype(np.uint8)
        errs = random_pair_errors(code.n_pairs, rng)
        frame = run_frame(code, msg, errs)
        synd, labels, readout = tableau_pipeline(code, msg, errs, rng)
        rep.trials += 1
        bad = False
        if synd != frame.syndrome:
            rep.syndrome_mismatches += 1
            bad = True
        if labels != frame.physical_labels:
            rep.label_mismatches += 1
            bad = True
        if not np.array_equal(readout, frame.readout):
            rep.readout_mismatches += 1
            bad = True
        if use_circuit:
            tab = encoded_tableau(code, encode_message(code, msg))
            tab.apply_pauli(error_string(code.n_pairs, errs))
            outcomes, _ = measure_syndrome_circuit_621(tab, rng)
            if circuit_outcomes_to_syndrome(outcomes) != frame.syndrome:
                rep.circuit_mismatches += 1
                bad = True
        if bad and len(rep.examples) < 5:
            rep.examples.append({"message": msg.tolist(), "errors": [(e.home.name, e.flying.name) for e in errs]})
    return rep


def default_equivalence_suite(rng, trials_621: int = 10_000, trials_hamming: int = 1_000) -> list[EquivalenceReport]:
    return [
        oracle_equivalence(lift(repetition3()), trials_621, rng),
        oracle_equivalence(lift(hamming7()), trials_hamming, rng),
    ]
