"""Outcome records, transcripts and check-pair statistics shared by the protocols."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import binomtest


@dataclass
class Transcript:
    """Append-only log of classical announcements and measurement batches."""

    records: list = field(default_factory=list)

    def log(self, step: str, party: str, kind: str, **data) -> None:
        rec = {"step": step, "party": party, "kind": kind}
        rec.update({k: _plain(v) for k, v in data.items()})
        self.records.append(rec)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_jsonl())


def _plain(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


@dataclass(frozen=True)
class CheckEstimate:
    mismatches: int
    checks: int
    rate: float
    ci_low: float
    ci_high: float
    threshold: float
    abort: bool


def estimate_check_error(outcomes, threshold: float, confidence: float = 0.95) -> CheckEstimate:
    """Rate of inconsistent check pairs with a Wilson interval; abort iff rate > threshold.

    ``outcomes`` is a boolean array (True = mismatch) or a ``(mismatches, checks)`` pair.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold outside [0, 1]")
    if isinstance(outcomes, tuple) and len(outcomes) == 2 and np.isscalar(outcomes[0]):
        k, n = int(outcomes[0]), int(outcomes[1])
    else:
        arr = np.asarray(outcomes, dtype=bool)
        k, n = int(arr.sum()), int(arr.size)
    if n < 1:
        raise ValueError("need at least one check pair")
    if not 0 <= k <= n:
        raise ValueError("mismatch count outside [0, checks]")
    ci = binomtest(k, n).proportion_ci(confidence_level=confidence, method="wilson")
    rate = k / n
    return CheckEstimate(k, n, rate, float(ci.low), float(ci.high), threshold, rate > threshold)


def default_threshold(expected_rate: float, checks: int, n_sigma: float = 3.0) -> float:
    """Expected mismatch rate plus ``n_sigma`` binomial standard deviations, capped at 1."""
    if checks < 1:
        raise ValueError("need at least one check pair")
    sd = math.sqrt(expected_rate * (1.0 - expected_rate) / checks)
    return min(1.0, expected_rate + n_sigma * sd)


@dataclass
class ProtocolOutcome:
    message: np.ndarray
    delivered: np.ndarray | None
    aborted: bool = False
    check_rates: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    syndrome_stats: dict = field(default_factory=dict)
    decoder_status: dict = field(default_factory=dict)
    transcript: Transcript = field(default_factory=Transcript)

    @property
    def success(self) -> bool:
        return (not self.aborted and self.delivered is not None
                and np.array_equal(self.delivered, self.message))

    @property
    def bit_errors(self) -> int:
        if self.delivered is None:
            return 0
        return int(np.count_nonzero(self.delivered != self.message))

    def summary(self) -> dict:
        return {
            "success": self.success,
            "aborted": self.aborted,
            "message_bits": int(self.message.size),
            "bit_errors": self.bit_errors,
            "check_rates": [float(r) for r in self.check_rates],
            "decoder_status": dict(self.decoder_status),
        }
