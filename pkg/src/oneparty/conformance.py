"""Golden data for the [[6,2,1]] code and diffs against derived values.

Published rows use 1-based qubit labels; qubit ``j`` belongs to pair
``ceil(j / 2)``. Syndrome columns are ordered X1X2X3X4, X3X4X5X6, Z1Z2Z3Z4,
Z3Z4Z5Z6.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .code import PairError, decode_and_correct, extract_syndrome, lift
from .linear import repetition3
from .pauli import Pauli

# (syndrome, bit-flip qubit, phase-flip qubit, correction) as printed
PUBLISHED_SYNDROMES = (
    ((1, 1, 1, 1), None, None, "I"),
    ((1, 1, 1, -1), 5, None, "X5"),
    ((1, 1, -1, 1), 1, None, "X1"),
    ((1, 1, -1, -1), 3, None, "X3"),
    ((1, -1, 1, 1), None, 5, "Z5"),
    ((1, -1, 1, -1), 5, 5, "Z5 X5"),
    ((1, -1, -1, 1), 1, 5, "Z5 X1"),
    ((1, -1, -1, -1), 3, 5, "Z5 X3"),
    ((-1, 1, 1, 1), None, 1, "Z1"),
    ((-1, 1, 1, -1), 5, 1, "Z1 X5"),
    ((-1, 1, -1, 1), 1, 1, "Z1 X1"),
    ((-1, 1, -1, -1), 3, 1, "Z1 X3"),
    ((-1, -1, 1, 1), None, 3, "Z3"),
    ((1, -1, 1, -1), 5, 3, "Z3 X5"),
    ((-1, -1, -1, 1), 1, 3, "Z3 X1"),
    ((-1, -1, -1, -1), 3, 3, "Z3 X3"),
)

# (state, operator) -> (sign, resulting state)
PUBLISHED_TRANSFORMS = {
    ("00", "X1"): (1, "10"), ("00", "Z1"): (1, "00"), ("00", "X2"): (1, "01"), ("00", "Z2"): (1, "00"),
    ("01", "X1"): (1, "11"), ("01", "Z1"): (1, "01"), ("01", "X2"): (1, "00"), ("01", "Z2"): (-1, "01"),
    ("10", "X1"): (1, "00"), ("10", "Z1"): (-1, "10"), ("10", "X2"): (1, "11"), ("10", "Z2"): (1, "10"),
    ("11", "X1"): (1, "01"), ("11", "Z1"): (-1, "11"), ("11", "X2"): (1, "10"), ("11", "Z2"): (-1, "11"),
}


def pair_of(qubit: int) -> int:
    """0-based pair index of a 1-based qubit label."""
    return (qubit - 1) // 2


def parse_correction(text: str) -> tuple[int | None, int | None]:
    """``"Z5 X1"`` -> (bit pair, phase pair), 0-based; ``"I"`` -> (None, None)."""
    bit = phase = None
    for kind, q in re.findall(r"([XZ])(\d+)", text):
        if kind == "X":
            bit = pair_of(int(q))
        else:
            phase = pair_of(int(q))
    return bit, phase


@dataclass(frozen=True)
class SyndromeRow:
    description: str
    published_syndrome: tuple[int, ...]
    derived_syndrome: tuple[int, ...]
    published_correction: tuple[int | None, int | None]
    derived_correction: tuple[int | None, int | None]

    @property
    def matches(self) -> bool:
        return (self.published_syndrome == self.derived_syndrome
                and self.published_correction == self.derived_correction)


def _describe(bit, phase) -> str:
    if bit is None and phase is None:
        return "no error"
    if phase is None:
        return f"bit {bit} flip"
    if bit is None:
        return f"phase {phase} flip"
    if bit == phase:
        return f"both bit and phase {bit} flip"
    return f"bit {bit} and phase {phase} flip"


def syndrome_table_report() -> list[SyndromeRow]:
    """Derive every row from the construction and line it up with the print."""
    code = lift(repetition3())
    rows = []
    for synd_pub, bit_q, phase_q, corr_pub in PUBLISHED_SYNDROMES:
        errs = [PairError() for _ in range(3)]
        bx = pair_of(bit_q) if bit_q else None
        pz = pair_of(phase_q) if phase_q else None
        for j in range(3):
            p = Pauli.from_bits(int(j == bx), int(j == pz))
            errs[j] = PairError(flying=p)
        rec = extract_syndrome(code, errs)
        derived = rec.x_synd + rec.z_synd
        corr, _ = decode_and_correct(code, rec)
        cb = next((j for j, c in enumerate(corr) if c.x), None)
        cp = next((j for j, c in enumerate(corr) if c.z), None)
        rows.append(SyndromeRow(_describe(bit_q, phase_q), synd_pub, derived,
                              parse_correction(corr_pub), (cb, cp)))
    return rows


def syndrome_table_discrepancies() -> list[SyndromeRow]:
    return [r for r in syndrome_table_report() if not r.matches]


def transform_table_report() -> list[tuple[tuple[str, str], tuple[int, str], tuple[int, str]]]:
    """``(key, published, derived)`` for every transform-table entry."""
    from .oracle import transform_table

    derived = transform_table()
    return [(key, PUBLISHED_TRANSFORMS[key], derived[key]) for key in PUBLISHED_TRANSFORMS]
