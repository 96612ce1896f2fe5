import itertools
import json
from fractions import Fraction

import numpy as np
import pytest

from oneparty.code import ConcatSchedule, ConcatenatedCode, code_621, iterate_recursion, lift
from oneparty.linear import hamming7
from oneparty.pauli import ChannelParams, PairError, Pauli
from oneparty.protocols import (
    DenseCodingConfig,
    Eavesdropper,
    QsdcConfig,
    check_success_condition,
    default_threshold,
    dense_coding_batch,
    effective_pair_distribution,
    enumerate_success_probability,
    estimate_check_error,
    fidelity_gate_bound,
    load_qsdc_config,
    message_capacity,
    qsdc_config_from_dict,
    run_dense_coding,
    run_qsdc_noiseless,
    run_qsdc_one_party,
)
from oneparty.protocols.dense import pattern_success_table
from oneparty.protocols.qsdc import channel_from_spec, code_from_spec, x_error_rate


# --- dense coding -----------------------------------------------------------

@pytest.mark.parametrize("code", [code_621(), lift(hamming7())], ids=["621", "hamming"])
def test_dense_noiseless_round_trip(code, rng):
    for _ in range(100):
        msg = rng.integers(0, 2, 2 * code.k)
        out = run_dense_coding(DenseCodingConfig(code, msg), rng)
        assert out.success and np.array_equal(out.delivered, msg)
    batch = dense_coding_batch(code, 2000, rng)
    assert batch.successes == 2000


def test_dense_injected_single_bit_flip(rng):
    inj = (PairError(), PairError(flying=Pauli.X), PairError())
    cfg = DenseCodingConfig(code_621(), [1, 0], channel=ChannelParams.symmetric(0.1), injected=inj)
    out = run_dense_coding(cfg, rng)
    assert out.success
    assert out.decoder_status == {"corrected": 1}
    assert out.syndrome_stats["z_synd"] == [-1, -1]
    kinds = [r["step"] for r in out.transcript.records]
    assert kinds == ["share", "encode", "transmit", "correct", "readout"]


def test_dense_config_validation():
    with pytest.raises(ValueError):
        DenseCodingConfig(code_621(), [1])
    with pytest.raises(ValueError):
        DenseCodingConfig(code_621(), [1, 0], initial_fidelity=1.2)
    with pytest.raises(ValueError):
        DenseCodingConfig(code_621(), [1, 0], injected=(PairError(),))


def test_weight_rule_matches_decoder():
    table = pattern_success_table(code_621())
    assert len(table) == 64
    for pattern, ok in table.items():
        rule = sum(p.x for p in pattern) <= 1 and sum(p.z for p in pattern) <= 1
        assert ok == rule


def test_dense_mc_matches_enumeration(rng):
    code = code_621()
    ch = ChannelParams.symmetric(0.05)
    exact = enumerate_success_probability(code, effective_pair_distribution(1.0, ch))
    batch = dense_coding_batch(code, 50_000, rng, channel=ch)
    se = np.sqrt(exact * (1 - exact) / batch.trials)
    assert abs(batch.success_rate - exact) < 4 * se


def test_symmetrization_invisible_without_noise():
    code = lift(hamming7())
    for seed in range(20):
        msg = np.random.default_rng(seed).integers(0, 2, 8)
        a = run_dense_coding(DenseCodingConfig(code, msg, symmetrize=True), np.random.default_rng(seed))
        b = run_dense_coding(DenseCodingConfig(code, msg, symmetrize=False), np.random.default_rng(seed))
        assert np.array_equal(a.delivered, b.delivered) and a.success


def test_symmetrization_equalizes_effective_distribution():
    ch = {Pauli.I: Fraction(7, 10), Pauli.X: Fraction(3, 10), Pauli.Y: Fraction(0), Pauli.Z: Fraction(0)}
    d = effective_pair_distribution(Fraction(1), ch, symmetrize=True, twirl=False)
    assert d[Pauli.X] == d[Pauli.Y] == d[Pauli.Z] == Fraction(1, 10)


def test_twirl_is_exactly_safe_for_symmetric_input():
    ch = ChannelParams()
    for f in (Fraction(1), Fraction(9, 10), Fraction(1, 2)):
        werner = {Pauli.I: f, Pauli.X: (1 - f) / 3, Pauli.Y: (1 - f) / 3, Pauli.Z: (1 - f) / 3}
        chd = {p: Fraction(w).limit_denominator() for p, w in ch.distribution().items()}
        on = effective_pair_distribution(werner, chd, symmetrize=False, twirl=True)
        off = effective_pair_distribution(werner, chd, symmetrize=False, twirl=False)
        assert on == off
        assert enumerate_success_probability(code_621(), on) == enumerate_success_probability(code_621(), off)


def test_permutation_has_no_statistical_effect(rng):
    code = code_621()
    ch = ChannelParams.symmetric(0.04)
    a = dense_coding_batch(code, 40_000, rng, channel=ch, permute=False)
    b = dense_coding_batch(code, 40_000, rng, channel=ch, permute=True)
    p = (a.successes + b.successes) / 80_000
    se = np.sqrt(2 * p * (1 - p) / 40_000)
    assert abs(a.success_rate - b.success_rate) < 4 * se


def test_success_condition_examples():
    c = code_621()
    assert check_success_condition(c, ChannelParams.symmetric(0.1)).guaranteed_regime
    assert not check_success_condition(c, ChannelParams.symmetric(0.2)).guaranteed_regime
    none = check_success_condition(lift(hamming7()), ChannelParams())
    assert none.guaranteed_regime and none.fidelity_gate
    assert fidelity_gate_bound(0.5) == pytest.approx(0.25)
    assert fidelity_gate_bound(0.0) == 1.0


# --- check statistics ---------------------------------------------------------

def test_check_estimate_examples():
    e = estimate_check_error((0, 100), 0.25)
    assert e.rate == 0 and not e.abort and e.ci_low == 0
    e = estimate_check_error((30, 100), 0.25)
    assert e.abort and e.ci_low < 0.3 < e.ci_high
    e = estimate_check_error(np.array([True, False, False, False]), 0.3)
    assert e.rate == 0.25 and not e.abort
    with pytest.raises(ValueError):
        estimate_check_error((0, 0), 0.1)
    with pytest.raises(ValueError):
        estimate_check_error((5, 4), 0.1)
    with pytest.raises(ValueError):
        estimate_check_error((0, 4), 1.5)


def test_check_sampling_consistency(rng):
    eps = 0.07
    outcomes = rng.random(10_000) < eps
    est = estimate_check_error(outcomes, 1.0)
    assert abs(est.rate - eps) < 4 * np.sqrt(eps * (1 - eps) / 10_000)


def test_default_threshold():
    assert default_threshold(0.0, 100) == 0.0
    assert default_threshold(0.25, 300) == pytest.approx(0.25 + 3 * np.sqrt(0.25 * 0.75 / 300))
    assert default_threshold(0.9, 1) == 1.0


# --- QSDC ---------------------------------------------------------------------

def test_p2_noiseless_delivers(rng):
    for _ in range(20):
        out = run_qsdc_noiseless(QsdcConfig(n_blocks=50), rng)
        assert out.success and out.check_rates == [0.0, 0.0]


def test_p2_message_length_checked(rng):
    with pytest.raises(ValueError):
        run_qsdc_noiseless(QsdcConfig(n_blocks=5, message=[1, 0]), rng)


def test_p2_eavesdropper_disturbance_rate(rng):
    cfg = QsdcConfig(n_blocks=2000, eavesdropper=Eavesdropper("intercept_resend", 1.0), check_threshold=1.0)
    rates = [run_qsdc_noiseless(cfg, rng).check_rates[0] for _ in range(20)]
    assert np.mean(rates) == pytest.approx(0.25, abs=4 * np.sqrt(0.25 * 0.75 / 40_000))


def test_p2_abort_soundness_grows_with_checks(rng):
    eve = Eavesdropper("intercept_resend", 1.0)
    freq = []
    for n in (10, 50, 300):
        cfg = QsdcConfig(n_blocks=n, eavesdropper=eve, check_threshold=0.15)
        runs = [run_qsdc_noiseless(cfg, rng) for _ in range(200)]
        assert all(r.delivered is None for r in runs if r.aborted)
        freq.append(np.mean([r.aborted for r in runs]))
    assert freq[0] <= freq[1] <= freq[2]
    assert freq[2] > 0.99


def test_p2_uncoded_phase_two_error_propagates(rng):
    eps = 0.1
    cfg = QsdcConfig(n_blocks=2000, channel_phase2=ChannelParams.independent(eps), check_threshold=1.0)
    errs = bits = 0
    for _ in range(10):
        out = run_qsdc_noiseless(cfg, rng)
        errs += out.bit_errors
        bits += out.message.size
    assert errs / bits == pytest.approx(eps, abs=4 * np.sqrt(eps * (1 - eps) / bits))


def test_x_error_rate():
    assert x_error_rate(ChannelParams.independent(0.3)) == pytest.approx(0.3)
    assert x_error_rate(ChannelParams(p_z=0.2)) == pytest.approx(0.1)


@pytest.mark.parametrize("code", [None, code_621(), lift(hamming7()), ConcatenatedCode(2)], ids=repr)
def test_p3_noiseless_delivers(code, rng):
    for _ in range(10):
        out = run_qsdc_one_party(QsdcConfig(n_blocks=200, code=code), rng)
        assert out.success and out.message.size == message_capacity(QsdcConfig(n_blocks=200, code=code))


def test_p3_capacity_and_attrition():
    assert message_capacity(QsdcConfig(n_blocks=270)) == 270 // 27
    assert message_capacity(QsdcConfig(n_blocks=270, epp_yield=0.5)) == 135 // 27
    assert message_capacity(QsdcConfig(n_blocks=270, code=lift(hamming7()))) == (270 // 7) * 4


def test_p3_residual_error_follows_recursion(rng):
    cfg = QsdcConfig(n_blocks=2700, channel_phase2=ChannelParams.independent(0.3), check_threshold=1.0)
    errs = bits = 0
    for _ in range(20):
        out = run_qsdc_one_party(cfg, rng)
        errs += out.bit_errors
        bits += out.message.size
    want = iterate_recursion(ConcatSchedule(3, 0.3))[-1]
    assert abs(errs / bits - want) < 4 * np.sqrt(want * (1 - want) / bits)


def test_p3_threshold_bracket(rng):
    def ber(q, rounds):
        cfg = QsdcConfig(n_blocks=3 ** rounds * 40, channel_phase2=ChannelParams.independent(q),
                         check_threshold=1.0, code=ConcatenatedCode(rounds))
        errs = bits = 0
        for _ in range(5):
            out = run_qsdc_one_party(cfg, rng)
            errs += out.bit_errors
            bits += out.message.size
        return errs / bits

    assert ber(0.45, 6) < 0.25 < 0.5 < ber(0.55, 6)
    # deeper codes tolerate per-type rates above the 25% comparator
    assert ber(0.3, 5) < 0.05


def test_p3_abort_path(rng):
    cfg = QsdcConfig(n_blocks=300, eavesdropper=Eavesdropper("intercept_resend", 1.0), check_threshold=0.1)
    out = run_qsdc_one_party(cfg, rng)
    assert out.aborted and out.delivered is None and not out.success
    cfg = QsdcConfig(n_blocks=300, channel_phase2=ChannelParams.independent(0.3), check_threshold=0.1)
    out = run_qsdc_one_party(cfg, rng)
    assert out.aborted and len(out.check_rates) == 2


def test_p3_transcript_records_announcements(rng):
    out = run_qsdc_one_party(QsdcConfig(n_blocks=30), rng)
    lines = [json.loads(x) for x in out.transcript.to_jsonl().splitlines()]
    kinds = {(r["step"], r["kind"]) for r in lines}
    assert ("3", "announce") in kinds and ("8", "announce") in kinds and ("11", "readout") in kinds
    b_prime = next(r for r in lines if r["step"] == "8" and r["kind"] == "announce")["b_prime"]
    assert set(b_prime) <= {0, 1}


def test_config_parsing(tmp_path):
    data = {"n_blocks": 10, "channel_phase2": {"independent": 0.2}, "code": {"concatenated": 2},
            "eavesdropper": {"kind": "intercept_resend", "eta": 0.5}}
    p = tmp_path / "q.json"
    p.write_text(json.dumps(data))
    cfg = load_qsdc_config(p)
    assert cfg.code == ConcatenatedCode(2) and cfg.eavesdropper.eta == 0.5
    assert cfg.channel_phase2.bit_flip_rate == pytest.approx(0.2)
    assert code_from_spec("hamming7").k == 4
    assert channel_from_spec(0.1) == ChannelParams.symmetric(0.1)
    assert channel_from_spec({"p_x": 0.1}).p_x == 0.1
    for bad in ({"n_blocks": 1, "bogus": 1}, {"n_blocks": 0}, {"n_blocks": 1, "code": "golay"},
                {"n_blocks": 1, "channel_phase1": {"p_w": 0.1}},
                {"n_blocks": 1, "eavesdropper": {"kind": "beamsplit"}}):
        with pytest.raises(ValueError):
            qsdc_config_from_dict(bad)


def test_every_message_bit_pattern_p2(rng):
    for msg in itertools.product((0, 1), repeat=4):
        out = run_qsdc_noiseless(QsdcConfig(n_blocks=4, message=msg), rng)
        assert out.success
