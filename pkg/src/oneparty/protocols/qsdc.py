"""Two-phase secure direct communication over shared pairs.

All pairs are tracked in the receiver's unrotated frame: a flying-qubit
error ``E`` that strikes while the qubit is Hadamard-rotated shows up as
``H E H`` once the rotation is undone. Z-basis comparisons on both halves of
a pair detect exactly the X component of that error.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..code import ConcatenatedCode, OnePartyCode, lift
from ..linear import as_bits, code_from_dict, hamming7, repetition3
from ..pauli import HADAMARD_TABLE, ChannelParams, Pauli, sample_paulis
from .common import ProtocolOutcome, Transcript, default_threshold, estimate_check_error

EAVESDROPPER_KINDS = ("none", "intercept_resend")


@dataclass(frozen=True)
class Eavesdropper:
    """Z-basis intercept-resend on each phase-one qubit with probability ``eta``."""

    kind: str = "none"
    eta: float = 0.0

    def __post_init__(self):
        if self.kind not in EAVESDROPPER_KINDS:
            raise ValueError(f"unknown eavesdropper {self.kind!r}")
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta outside [0, 1]")

    @property
    def active(self) -> bool:
        return self.kind != "none" and self.eta > 0


@dataclass(frozen=True)
class QsdcConfig:
    n_blocks: int
    message: tuple[int, ...] | None = None
    channel_phase1: ChannelParams = ChannelParams()
    channel_phase2: ChannelParams = ChannelParams()
    epp_residual: float = 0.0
    epp_yield: float = 1.0
    check_threshold: float | None = None
    eavesdropper: Eavesdropper = Eavesdropper()
    code: OnePartyCode | ConcatenatedCode | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.n_blocks < 1:
            raise ValueError("n_blocks must be positive")
        if self.check_threshold is not None and not 0.0 <= self.check_threshold <= 1.0:
            raise ValueError("check threshold outside [0, 1]")
        if not 0.0 <= self.epp_residual <= 1.0:
            raise ValueError("epp_residual outside [0, 1]")
        if not 0.0 < self.epp_yield <= 1.0:
            raise ValueError("epp_yield outside (0, 1]")
        if self.message is not None:
            object.__setattr__(self, "message", tuple(int(b) for b in as_bits(self.message).reshape(-1)))


def x_error_rate(ch: ChannelParams) -> float:
    """Probability of an X component after a uniformly random Hadamard frame."""
    return 0.5 * (ch.bit_flip_rate + ch.phase_flip_rate)


def _xor_rate(p: float, q: float) -> float:
    return p + q - 2 * p * q


def _threshold(cfg: QsdcConfig, expected: float, checks: int) -> float:
    return cfg.check_threshold if cfg.check_threshold is not None else default_threshold(expected, checks)


def _phase_one(cfg: QsdcConfig, rng, tr: Transcript) -> tuple[np.ndarray, np.ndarray]:
    n_pairs = 3 * cfg.n_blocks
    b = rng.integers(0, 2, size=n_pairs).astype(np.uint8)
    tr.log("1", "Bob", "prepare", pairs=n_pairs)
    err = sample_paulis(cfg.channel_phase1, n_pairs, rng)
    if cfg.eavesdropper.active:
        hit = rng.random(n_pairs) < cfg.eavesdropper.eta
        dephase = hit & (rng.random(n_pairs) < 0.5)
        err = err ^ (dephase.astype(np.uint8) * np.uint8(Pauli.Z))
    err = np.where(b == 1, HADAMARD_TABLE[err], err).astype(np.uint8)
    tr.log("2", "Bob", "send", qubits=n_pairs)
    tr.log("3", "Alice", "receipt", qubits=n_pairs)
    return b, err


def _check(out: ProtocolOutcome, tr: Transcript, step: str, party: str, err: np.ndarray,
           idx: np.ndarray, threshold: float) -> bool:
    mism = (err[idx] & 1).astype(bool)
    est = estimate_check_error(mism, threshold)
    out.check_rates.append(est.rate)
    out.checks.append(est)
    tr.log(step, party, "check", positions=np.sort(idx), mismatches=est.mismatches,
           checks=est.checks, rate=est.rate, threshold=threshold, abort=est.abort)
    if est.abort:
        out.aborted = True
        tr.log(step, party, "abort")
    return est.abort


def run_qsdc_noiseless(cfg: QsdcConfig, rng) -> ProtocolOutcome:
    """Baseline protocol: no coding, S = XZ marks message bits on raw pairs."""
    n = cfg.n_blocks
    msg = np.array(cfg.message if cfg.message is not None else rng.integers(0, 2, size=n), dtype=np.uint8)
    if msg.size != n:
        raise ValueError(f"message must have n_blocks={n} bits")
    out = ProtocolOutcome(message=msg, delivered=None)
    tr = out.transcript

    b, err = _phase_one(cfg, rng, tr)
    perm = rng.permutation(3 * n)
    check1, rest = perm[:n], perm[n:]
    tr.log("4", "Bob", "announce", b_at_checks=b[np.sort(check1)])
    q1 = x_error_rate(cfg.channel_phase1)
    if _check(out, tr, "4", "both", err, check1, _threshold(cfg, q1, n)):
        return out

    rest = rng.permutation(rest)
    check2, code_pairs = rest[:n], rest[n:]
    err = err.copy()
    # S = XZ is Y up to phase and commutes with the Hadamard frame up to sign
    err[code_pairs] ^= msg * np.uint8(Pauli.Y)
    ch2 = sample_paulis(cfg.channel_phase2, 3 * n, rng)
    ch2 = np.where(b == 1, HADAMARD_TABLE[ch2], ch2).astype(np.uint8)
    err[rest] ^= ch2[rest]
    tr.log("6", "Alice", "send", qubits=2 * n)
    tr.log("7", "Bob", "receipt", qubits=2 * n)
    q2 = _xor_rate(q1, x_error_rate(cfg.channel_phase2))
    if _check(out, tr, "8", "Bob", err, check2, _threshold(cfg, q2, n)):
        return out

    out.delivered = (err[code_pairs] & 1).astype(np.uint8)
    tr.log("9", "Bob", "readout", bits=out.delivered)
    return out


def _resolve_code(code):
    return code if code is not None else ConcatenatedCode(3)


def message_capacity(cfg: QsdcConfig) -> int:
    code = _resolve_code(cfg.code)
    survivors = int(2 * cfg.n_blocks * cfg.epp_yield) // 2 * 2
    m = survivors // 2
    return (m // code.n_pairs) * code.k


def run_qsdc_one_party(cfg: QsdcConfig, rng) -> ProtocolOutcome:
    """Protocol with purification after phase one and a one-party code in phase two.

    Purification is not simulated: surviving pairs get fresh independent bit
    and phase flips at ``epp_residual`` and ``epp_yield`` of them survive.
    The message rides on the ZZ label bit through ``V`` (Y on home qubits).
    """
    n = cfg.n_blocks
    code = _resolve_code(cfg.code)
    cap = message_capacity(cfg)
    if cap < 1:
        raise ValueError("too few pairs survive to carry a single code block")
    if cfg.message is None:
        msg = rng.integers(0, 2, size=cap).astype(np.uint8)
    else:
        msg = np.array(cfg.message, dtype=np.uint8)
        if msg.size > cap:
            raise ValueError(f"message of {msg.size} bits exceeds capacity {cap}")
    out = ProtocolOutcome(message=msg, delivered=None)
    tr = out.transcript

    b, err = _phase_one(cfg, rng, tr)
    tr.log("3", "Bob", "announce", b=b)
    perm = rng.permutation(3 * n)
    check1 = perm[:n]
    q1 = x_error_rate(cfg.channel_phase1)
    if _check(out, tr, "4", "both", err, check1, _threshold(cfg, q1, n)):
        return out

    survivors = int(2 * n * cfg.epp_yield) // 2 * 2
    r = cfg.epp_residual
    ex = (rng.random(survivors) < r).astype(np.uint8)
    ez = (rng.random(survivors) < r).astype(np.uint8)
    tr.log("5", "both", "purify", input_pairs=2 * n, output_pairs=survivors, residual=r)

    m = survivors // 2
    order = rng.permutation(survivors)
    check2, code_pairs = order[:m], order[m:]
    b2 = rng.integers(0, 2, size=survivors).astype(np.uint8)

    blocks = m // code.n_pairs
    padded = np.zeros(blocks * code.k, dtype=np.uint8)
    padded[:msg.size] = msg
    used = code_pairs[:blocks * code.n_pairs]
    a = code.encode_bits(padded.reshape(blocks, code.k)).reshape(-1).astype(np.uint8)
    ex[used] ^= a
    ez[used] ^= a
    tr.log("7", "Alice", "encode", blocks=blocks, code=repr(code))

    ch2 = sample_paulis(cfg.channel_phase2, survivors, rng)
    ch2 = np.where(b2 == 1, HADAMARD_TABLE[ch2], ch2).astype(np.uint8)
    ex ^= ch2 & 1
    ez ^= ch2 >> 1
    tr.log("7", "Alice", "send", qubits=survivors)
    tr.log("8", "Bob", "receipt", qubits=survivors)
    tr.log("8", "Alice", "announce", b_prime=b2)

    err2 = (ex | (ez << 1)).astype(np.uint8)
    q2 = _xor_rate(r, x_error_rate(cfg.channel_phase2))
    tr.log("9", "Alice", "announce", code=repr(code))
    if _check(out, tr, "9", "Bob", err2, check2, _threshold(cfg, q2, m)):
        return out

    obs = ex[used].reshape(blocks, code.n_pairs)
    decoded = code.decode_bits(obs).reshape(-1)
    status = {"corrected": blocks}
    if isinstance(code, OnePartyCode):
        from ..kernels import pack_bits

        amb = int(code.ambiguous_words(pack_bits(obs)).sum())
        status = {"corrected": blocks - amb, "ambiguous_bit": amb}
    out.decoder_status = status
    out.syndrome_stats = {"blocks": blocks, "raw_bit_flips": int((ex[used] ^ a).sum())}
    tr.log("10", "Bob", "correct", blocks=blocks)
    out.delivered = decoded[:msg.size].astype(np.uint8)
    tr.log("11", "Bob", "readout", bits=out.delivered)
    return out


# --- configuration files ----------------------------------------------------

_BUILTIN_CODES = {"repetition3": repetition3, "hamming7": hamming7}


def code_from_spec(spec) -> OnePartyCode | ConcatenatedCode | None:
    """``None``, ``"repetition3"``, ``"hamming7"``, ``{"concatenated": r}`` or a code dict."""
    if spec is None:
        return None
    if isinstance(spec, str):
        if spec not in _BUILTIN_CODES:
            raise ValueError(f"unknown code {spec!r}")
        return lift(_BUILTIN_CODES[spec]())
    if isinstance(spec, dict) and "concatenated" in spec:
        return ConcatenatedCode(int(spec["concatenated"]))
    if isinstance(spec, dict):
        return lift(code_from_dict(spec))
    raise ValueError(f"cannot interpret code spec {spec!r}")


def channel_from_spec(spec) -> ChannelParams:
    if spec is None:
        return ChannelParams()
    if isinstance(spec, (int, float)):
        return ChannelParams.symmetric(float(spec))
    spec = dict(spec)
    if "independent" in spec:
        return ChannelParams.independent(*([spec["independent"]] if np.isscalar(spec["independent"])
                                           else spec["independent"]))
    unknown = set(spec) - {"p_x", "p_y", "p_z"}
    if unknown:
        raise ValueError(f"unknown channel keys {sorted(unknown)}")
    return ChannelParams(**{k: float(v) for k, v in spec.items()})


_QSDC_KEYS = {"n_blocks", "message", "channel_phase1", "channel_phase2", "epp_residual", "epp_yield",
              "check_threshold", "eavesdropper", "code", "seed"}


def qsdc_config_from_dict(data: dict) -> QsdcConfig:
    unknown = set(data) - _QSDC_KEYS
    if unknown:
        raise ValueError(f"unknown qsdc keys {sorted(unknown)}")
    eve = data.get("eavesdropper") or {}
    return QsdcConfig(
        n_blocks=int(data["n_blocks"]),
        message=data.get("message"),
        channel_phase1=channel_from_spec(data.get("channel_phase1")),
        channel_phase2=channel_from_spec(data.get("channel_phase2")),
        epp_residual=float(data.get("epp_residual", 0.0)),
        epp_yield=float(data.get("epp_yield", 1.0)),
        check_threshold=data.get("check_threshold"),
        eavesdropper=Eavesdropper(eve.get("kind", "none"), float(eve.get("eta", 0.0))),
        code=code_from_spec(data.get("code")),
        seed=data.get("seed"),
    )


def load_qsdc_config(path: str | Path) -> QsdcConfig:
    return qsdc_config_from_dict(json.loads(Path(path).read_text()))
