"""Plain-text Clifford circuits for golden tests.

Format, one step per line (``#`` starts a comment)::

    version 1
    qubits 10
    H 0
    CNOT 0 4
    PHASE 3
    PAULI X 5
    T_ROT 2
    MEASURE_Z 0 -> 0
    MEASURE_PAULI_PRODUCT XXXX 4 5 6 7 -> 1

``MEASURE_PAULI_PRODUCT`` is never executed directly. :func:`expand` rewrites
it as an ancilla-coupled measurement, and the runner refuses unexpanded steps.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

FORMAT_VERSION = 1


class GateKind(str, enum.Enum):
    H = "H"
    CNOT = "CNOT"
    PHASE = "PHASE"
    PAULI = "PAULI"
    T_ROT = "T_ROT"
    MEASURE_Z = "MEASURE_Z"
    MEASURE_PAULI_PRODUCT = "MEASURE_PAULI_PRODUCT"


_ARITY = {GateKind.H: 1, GateKind.PHASE: 1, GateKind.PAULI: 1, GateKind.T_ROT: 1,
          GateKind.CNOT: 2, GateKind.MEASURE_Z: 1}


@dataclass(frozen=True)
class CircuitStep:
    kind: GateKind
    targets: tuple[int, ...]
    creg: int | None = None
    pauli: str | None = None  # "X"/"Y"/"Z" for PAULI, a word like "XXXX" for products

    def validate(self, n_qubits: int) -> None:
        if any(not 0 <= q < n_qubits for q in self.targets):
            raise ValueError(f"{self}: target out of range for {n_qubits} qubits")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"{self}: repeated target")
        if self.kind is GateKind.MEASURE_PAULI_PRODUCT:
            if not self.pauli or len(self.pauli) != len(self.targets):
                raise ValueError(f"{self}: Pauli word does not match targets")
        elif len(self.targets) != _ARITY[self.kind]:
            raise ValueError(f"{self}: wrong number of targets")
        if self.kind in (GateKind.MEASURE_Z, GateKind.MEASURE_PAULI_PRODUCT) and self.creg is None:
            raise ValueError(f"{self}: measurement needs a classical register")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    steps: tuple[CircuitStep, ...]

    def __post_init__(self):
        for s in self.steps:
            s.validate(self.n_qubits)

    @property
    def n_cregs(self) -> int:
        regs = [s.creg for s in self.steps if s.creg is not None]
        return max(regs) + 1 if regs else 0


def parse_circuit(text: str) -> Circuit:
    n_qubits = None
    version = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        creg = None
        if "->" in line:
            line, reg = line.split("->")
            creg = int(reg.strip())
            line = line.strip()
        tok = line.split()
        head = tok[0].upper()
        try:
            if head == "VERSION":
                version = int(tok[1])
                continue
            if head == "QUBITS":
                n_qubits = int(tok[1])
                continue
            kind = GateKind(head)
            pauli = None
            args = tok[1:]
            if kind in (GateKind.PAULI, GateKind.MEASURE_PAULI_PRODUCT):
                pauli, args = args[0].upper(), args[1:]
            steps.append(CircuitStep(kind, tuple(int(a) for a in args), creg, pauli))
        except (ValueError, IndexError) as exc:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}") from exc
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported circuit format version {version}")
    if n_qubits is None:
        raise ValueError("missing 'qubits' declaration")
    return Circuit(n_qubits, tuple(steps))


def load_circuit(path: str | Path) -> Circuit:
    return parse_circuit(Path(path).read_text())


def load_builtin(name: str) -> Circuit:
    return parse_circuit(resources.files("oneparty.data").joinpath(name).read_text())


def format_circuit(circ: Circuit) -> str:
    lines = [f"version {FORMAT_VERSION}", f"qubits {circ.n_qubits}"]
    for s in circ.steps:
        parts = [s.kind.value]
        if s.pauli:
            parts.append(s.pauli)
        parts += [str(q) for q in s.targets]
        line = " ".join(parts)
        if s.creg is not None:
            line += f" -> {s.creg}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def product_measurement(word: str, data: tuple[int, ...], ancilla: int, creg: int) -> list[CircuitStep]:
    """Measure a product of X-only or Z-only Paulis via a fresh |0> ancilla."""
    word = word.upper()
    if set(word) == {"Z"}:
        steps = [CircuitStep(GateKind.CNOT, (d, ancilla)) for d in data]
    elif set(word) == {"X"}:
        steps = [CircuitStep(GateKind.H, (ancilla,))]
        steps += [CircuitStep(GateKind.CNOT, (ancilla, d)) for d in data]
        steps.append(CircuitStep(GateKind.H, (ancilla,)))
    else:
        raise ValueError("only homogeneous X or Z products are supported")
    steps.append(CircuitStep(GateKind.MEASURE_Z, (ancilla,), creg))
    return steps


def expand(circ: Circuit, first_ancilla: int | None = None) -> Circuit:
    """Replace product measurements with ancilla-coupled gates on new qubits."""
    nxt = circ.n_qubits if first_ancilla is None else first_ancilla
    out = []
    for s in circ.steps:
        if s.kind is GateKind.MEASURE_PAULI_PRODUCT:
            out += product_measurement(s.pauli, s.targets, nxt, s.creg)
            nxt += 1
        else:
            out.append(s)
    return Circuit(max(nxt, circ.n_qubits), tuple(out))


def run_circuit(circ: Circuit, tab, rng=None) -> list[int]:
    """Execute on a tableau in place; returns the +1/-1 outcome of each register."""
    if tab.n != circ.n_qubits:
        raise ValueError(f"circuit needs {circ.n_qubits} qubits, tableau has {tab.n}")
    out = [0] * circ.n_cregs
    for s in circ.steps:
        k = s.kind
        if k is GateKind.H:
            tab.h(s.targets[0])
        elif k is GateKind.PHASE:
            tab.s(s.targets[0])
        elif k is GateKind.T_ROT:
            tab.t_rot(s.targets[0])
        elif k is GateKind.PAULI:
            tab.pauli(s.targets[0], s.pauli)
        elif k is GateKind.CNOT:
            tab.cnot(*s.targets)
        elif k is GateKind.MEASURE_Z:
            out[s.creg] = tab.measure_z(s.targets[0], rng)
        else:
            raise ValueError("expand() product measurements before running")
    return out
