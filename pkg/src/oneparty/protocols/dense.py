"""Dense coding over impure pairs protected by a one-party code."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ..code import (
    OnePartyCode,
    decode_and_correct,
    encode_message,
    extract_syndrome,
    labels_after_errors,
    logical_bell_readout,
)
from ..linear import as_bits
from ..pauli import (
    T_UNDO_TABLE,
    TWIRL_TABLE,
    ChannelParams,
    PairError,
    Pauli,
    WernerParams,
    sample_paulis,
    twirl_distribution,
)
from .common import ProtocolOutcome


@dataclass(frozen=True)
class DenseCodingConfig:
    code: OnePartyCode
    message: tuple[int, ...]
    initial_fidelity: float = 1.0
    channel: ChannelParams = ChannelParams()
    symmetrize: bool = True
    twirl: bool = True
    permute: bool = False
    # fixed channel errors on the flying qubits; replaces channel sampling
    injected: tuple[PairError, ...] | None = None
    seed: int | None = None

    def __post_init__(self):
        msg = tuple(int(b) for b in as_bits(self.message).reshape(-1))
        object.__setattr__(self, "message", msg)
        if len(msg) != 2 * self.code.k:
            raise ValueError(f"message must have {2 * self.code.k} bits, got {len(msg)}")
        if not 0.0 <= self.initial_fidelity <= 1.0:
            raise ValueError("initial fidelity outside [0, 1]")
        if self.injected is not None and len(self.injected) != self.code.n_pairs:
            raise ValueError("one injected error per pair expected")


@dataclass(frozen=True)
class SuccessCondition:
    guaranteed_regime: bool
    fidelity_gate: bool


def fidelity_gate_bound(t_over_n: float) -> float:
    """Smallest channel fidelity admitted by the symmetric success condition."""
    return 1.0 - 1.5 * t_over_n


def check_success_condition(code: OnePartyCode, channel: ChannelParams) -> SuccessCondition:
    ratio = code.t / code.n_pairs
    guaranteed = ratio >= channel.p_z + channel.p_y and ratio >= channel.p_x + channel.p_y
    return SuccessCondition(guaranteed, channel.fidelity() >= fidelity_gate_bound(ratio))


# --- sampling -------------------------------------------------------------

def sample_dense_errors(trials: int, n_pairs: int, initial_fidelity: float, channel: ChannelParams,
                        rng, symmetrize: bool = True, twirl: bool = True,
                        permute: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(initial, channel)`` Pauli codes of shape ``(trials, n_pairs)``.

    ``initial`` is the (optionally twirled) pair error of the shared state,
    ``channel`` the flying-qubit error after the receiver undoes the random
    rotation layer. The label-level error of each pair is their XOR.
    """
    shape = (trials, n_pairs)
    init = sample_paulis(WernerParams(initial_fidelity).channel(), shape, rng)
    if twirl:
        g = rng.integers(0, TWIRL_TABLE.shape[0], size=shape)
        init = TWIRL_TABLE[g, init]
    raw = sample_paulis(channel, shape, rng)
    if symmetrize:
        r = rng.integers(0, 3, size=shape)
        raw = T_UNDO_TABLE[r, raw]
    if permute:
        raw = rng.permuted(raw, axis=1)
    return init.astype(np.uint8), raw.astype(np.uint8)


@dataclass
class DenseBatch:
    trials: int
    successes: int
    bit_failures: int
    phase_failures: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    def __add__(self, other: "DenseBatch") -> "DenseBatch":
        return DenseBatch(self.trials + other.trials, self.successes + other.successes,
                          self.bit_failures + other.bit_failures,
                          self.phase_failures + other.phase_failures)


def decode_dense(code: OnePartyCode, messages: np.ndarray, effective: np.ndarray) -> np.ndarray:
    """Readout bits for ``messages`` (trials, 2k) under per-pair Pauli codes."""
    a_msg, b_msg = messages[:, 0::2], messages[:, 1::2]
    x = (effective & 1).astype(np.uint8)
    z = (effective >> 1).astype(np.uint8)
    a_obs = code.encode_bits(a_msg) ^ x
    b_obs = code.encode_bits(b_msg) ^ z
    out = np.empty_like(messages)
    out[:, 0::2] = code.decode_bits(a_obs)
    out[:, 1::2] = code.decode_bits(b_obs)
    return out


def dense_coding_batch(code: OnePartyCode, trials: int, rng, initial_fidelity: float = 1.0,
                       channel: ChannelParams = ChannelParams(), symmetrize: bool = True,
                       twirl: bool = True, permute: bool = False, messages=None) -> DenseBatch:
    if messages is None:
        messages = rng.integers(0, 2, size=(trials, 2 * code.k)).astype(np.uint8)
    messages = as_bits(messages).reshape(trials, 2 * code.k)
    init, ch = sample_dense_errors(trials, code.n_pairs, initial_fidelity, channel, rng,
                                   symmetrize, twirl, permute)
    readout = decode_dense(code, messages, init ^ ch)
    wrong = readout != messages
    ok = ~wrong.any(axis=1)
    return DenseBatch(trials, int(ok.sum()), int(wrong[:, 0::2].any(axis=1).sum()),
                      int(wrong[:, 1::2].any(axis=1).sum()))


def run_dense_coding(cfg: DenseCodingConfig, rng) -> ProtocolOutcome:
    """One protocol run tracked pair by pair in the Pauli frame."""
    code = cfg.code
    message = np.array(cfg.message, dtype=np.uint8)
    out = ProtocolOutcome(message=message, delivered=None)
    tr = out.transcript

    init, ch = sample_dense_errors(1, code.n_pairs, cfg.initial_fidelity, cfg.channel, rng,
                                   cfg.symmetrize, cfg.twirl, cfg.permute)
    initial = [PairError(home=Pauli(int(p))) for p in init[0]]
    tr.log("share", "both", "state", initial_fidelity=cfg.initial_fidelity,
           twirled=cfg.twirl, pairs=code.n_pairs)

    state = encode_message(code, message)
    labels = labels_after_errors(code.physical_labels(state), initial)
    tr.log("encode", "Alice", "operation", message=message)

    if cfg.injected is not None:
        channel_errs = list(cfg.injected)
    else:
        channel_errs = [PairError(flying=Pauli(int(p))) for p in ch[0]]
    tr.log("transmit", "Alice", "announce", symmetrized=cfg.symmetrize, permuted=cfg.permute)
    labels = labels_after_errors(labels, channel_errs)

    total = [PairError(Pauli(int(a.home) ^ int(b.home)), b.flying) for a, b in zip(initial, channel_errs)]
    synd = extract_syndrome(code, total)
    corr, status = decode_and_correct(code, synd)
    labels = labels_after_errors(labels, [PairError(flying=c) for c in corr])
    tr.log("correct", "Bob", "measurement", z_synd=synd.z_synd, x_synd=synd.x_synd, status=status.value)

    logical = code.logical_state(labels)
    out.delivered = logical_bell_readout(code, logical)
    tr.log("readout", "Bob", "measurement", bits=out.delivered)
    out.syndrome_stats = {"z_synd": list(synd.z_synd), "x_synd": list(synd.x_synd)}
    out.decoder_status = {status.value: 1}
    return out


# --- exact references -----------------------------------------------------

def _xor_convolve(a: Mapping[Pauli, object], b: Mapping[Pauli, object]) -> dict[Pauli, object]:
    zero = 0 * next(iter(a.values()))
    out = {p: zero for p in Pauli}
    for p, wp in a.items():
        for q, wq in b.items():
            out[Pauli(int(p) ^ int(q))] += wp * wq
    return out


def _werner_distribution(f):
    third = (1 - f) / 3
    return {Pauli.I: f, Pauli.X: third, Pauli.Y: third, Pauli.Z: third}


def effective_pair_distribution(initial, channel, symmetrize: bool = True, twirl: bool = True) -> dict[Pauli, object]:
    """Exact label-level error distribution of one pair.

    ``initial`` is a fidelity or an explicit distribution over the pair error;
    ``channel`` a :class:`ChannelParams` or explicit distribution. Works with
    :class:`fractions.Fraction` weights.
    """
    init = _werner_distribution(initial) if not isinstance(initial, Mapping) else dict(initial)
    if twirl:
        init = twirl_distribution(init)
    ch = channel.distribution() if isinstance(channel, ChannelParams) else dict(channel)
    if symmetrize:
        zero = 0 * next(iter(ch.values()))
        sym = {p: zero for p in Pauli}
        third = Fraction(1, 3) if isinstance(zero, Fraction) else 1.0 / 3.0
        for r in range(3):
            for p, w in ch.items():
                sym[Pauli(int(T_UNDO_TABLE[r, int(p)]))] += w * third
        ch = sym
    return _xor_convolve(init, ch)


def enumerate_success_probability(code: OnePartyCode, dist: Mapping[Pauli, object],
                                  max_pairs: int = 10) -> object:
    """Sum the probability of every pattern with at most ``t`` bit-flip and ``t`` phase-flip components.

    Exact success probability for perfect base codes (repetition-3, Hamming-7),
    where the coset leaders are exactly the patterns of weight at most ``t``.
    """
    n = code.n_pairs
    if n > max_pairs:
        raise ValueError(f"enumeration over 4^{n} patterns refused")
    total = 0 * next(iter(dist.values()))
    for pattern in itertools.product(list(Pauli), repeat=n):
        xw = sum(p.x for p in pattern)
        zw = sum(p.z for p in pattern)
        if xw <= code.t and zw <= code.t:
            w = 1
            for p in pattern:
                w = w * dist[p]
            total += w
    return total


def pattern_success_table(code: OnePartyCode) -> dict[tuple[Pauli, ...], bool]:
    """Decoder verdict for every flying-qubit pattern (used to cross-check the weight rule)."""
    out = {}
    zero_msg = np.zeros((1, 2 * code.k), dtype=np.uint8)
    for pattern in itertools.product(list(Pauli), repeat=code.n_pairs):
        eff = np.array([[int(p) for p in pattern]], dtype=np.uint8)
        out[pattern] = bool(np.array_equal(decode_dense(code, zero_msg, eff), zero_msg))
    return out
