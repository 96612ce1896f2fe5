"""Independent stabilizer simulators used as ground truth for the Pauli frame."""
from .checks import (
    EquivalenceReport,
    canonical_string,
    circuit_outcomes_to_syndrome,
    encoded_tableau,
    measure_syndrome_circuit_621,
    oracle_equivalence,
    prepare_bell_pairs,
    transform_table,
    tableau_bell_labels,
    tableau_syndrome,
    transform_with_sign,
)
from .circuit import Circuit, CircuitStep, GateKind, expand, load_builtin, parse_circuit, run_circuit
from .statevector import StateVector, T_MATRIX
from .tableau import SignedPauli, Tableau
