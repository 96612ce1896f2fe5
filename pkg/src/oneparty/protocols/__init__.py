"""Dense coding and secure direct communication built on one-party codes."""
from .common import CheckEstimate, ProtocolOutcome, Transcript, default_threshold, estimate_check_error
from .dense import (
    DenseBatch,
    DenseCodingConfig,
    SuccessCondition,
    check_success_condition,
    dense_coding_batch,
    effective_pair_distribution,
    enumerate_success_probability,
    fidelity_gate_bound,
    run_dense_coding,
)
from .qsdc import (
    Eavesdropper,
    QsdcConfig,
    load_qsdc_config,
    message_capacity,
    qsdc_config_from_dict,
    run_qsdc_noiseless,
    run_qsdc_one_party,
)
