"""Bell-pair (one-party) quantum error correcting codes in the Pauli frame."""
__version__ = "0.1.0"

from .code import (
    ConcatenatedCode,
    ConcatSchedule,
    CorrectionStatus,
    LogicalOp,
    LogicalState,
    OnePartyCode,
    SyndromeRecord,
    apply_logical,
    decode_and_correct,
    extract_syndrome,
    iterate_recursion,
    lift,
    logical_bell_readout,
    recursion_q,
    simulate_concat_round,
    simulate_concatenation,
)
from .linear import ClassicalCode, gv_report, hamming7, repetition3
from .pauli import BellLabel, ChannelParams, PairError, Pauli, PauliString, WernerParams
