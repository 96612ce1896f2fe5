"""Command-line experiments: ``oneparty <command> [options]``.

Every command writes a CSV (``--out`` or stdout) that starts with a ``#``
comment block recording the seed, the trial count, every parameter value and
the meaning of each column. A short summary goes to stderr.

Exit codes: 0 success, 2 configuration error, 3 acceptance check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .code import ConcatSchedule, ConcatenatedCode, iterate_recursion, lift, simulate_concatenation
from .linear import gv_report
from .montecarlo import default_threads, proportion, run_chunked, z_score

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ACCEPTANCE = 3
Z_LIMIT = 3.0


class ConfigError(Exception):
    pass


@dataclass
class ResultTable:
    experiment: str
    seed: int
    trials: int | None
    params: dict
    columns: list[tuple[str, str]]
    rows: list[list] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return ""
        return f"{float(v):.12g}"
    if v is None:
        return ""
    return str(v)


def format_csv(table: ResultTable) -> str:
    buf = io.StringIO()
    buf.write(f"# oneparty {__version__}\n")
    buf.write(f"# experiment: {table.experiment}\n")
    buf.write(f"# seed: {table.seed}\n")
    if table.trials is not None:
        buf.write(f"# trials: {table.trials}\n")
    buf.write(f"# params: {json.dumps(table.params, sort_keys=True)}\n")
    buf.write("# columns:\n")
    for name, desc in table.columns:
        buf.write(f"#   {name}: {desc}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([c for c, _ in table.columns])
    for row in table.rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


# --- parameters ---------------------------------------------------------------

DEFAULTS = {
    "conformance": {"table": "syndromes"},
    "concat": {"q0": [0.1, 0.3, 0.45], "rounds": 3, "mode": "physical", "chunk": 10_000},
    "dense": {"code": "repetition3", "p": 0.05, "initial_fidelity": 1.0, "symmetrize": True,
              "twirl": True, "chunk": 10_000},
    "qsdc": {"protocol": 3, "n_blocks": 8100, "channel_phase1": None,
             "channel_phase2": {"independent": 0.3}, "epp_residual": 0.0, "epp_yield": 1.0,
             "check_threshold": None, "eavesdropper": None, "code": {"concatenated": 3}, "chunk": 10},
    "oracle": {"trials_621": 10_000, "trials_hamming": 1_000, "chunk": 1_000},
    "sweep": {"kind": "recursion", "q0": [round(0.1 * i, 1) for i in range(1, 10)], "rounds": 6,
              "t_over_n": [round(0.05 * i, 2) for i in range(0, 11)], "p": 0.1},
}
DEFAULT_TRIALS = {"concat": 100_000, "dense": 100_000, "qsdc": 10}


def _parse_set(items) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = json.loads(v)
        except json.JSONDecodeError:
            out[k.strip()] = v
    return out


def resolve(args) -> tuple[dict, int, int | None, int, str | None]:
    """Merge defaults, config file and flags into ``(params, seed, trials, threads, out)``."""
    cmd = args.command
    params = dict(DEFAULTS[cmd])
    seed, trials, threads, out = 0, DEFAULT_TRIALS.get(cmd), None, None
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        unknown_top = set(data) - {"seed", "trials", "threads", "out"} - set(DEFAULTS)
        if unknown_top:
            raise ConfigError(f"unknown config sections {sorted(unknown_top)}")
        seed = data.get("seed", seed)
        trials = data.get("trials", trials)
        threads = data.get("threads", threads)
        out = data.get("out", out)
        section = data.get(cmd, {})
        if not isinstance(section, dict):
            raise ConfigError(f"section {cmd!r} must be an object")
        params.update(section)
    overrides = {k: getattr(args, k) for k in DEFAULTS[cmd] if getattr(args, k, None) is not None}
    params.update(overrides)
    params.update(_parse_set(args.set))
    unknown = set(params) - set(DEFAULTS[cmd])
    if unknown:
        raise ConfigError(f"unknown parameters for {cmd}: {sorted(unknown)}")
    if args.seed is not None:
        seed = args.seed
    if args.trials is not None:
        trials = args.trials
    if args.threads is not None:
        threads = args.threads
    if args.out is not None:
        out = args.out
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a non-negative integer")
    if trials is not None and (not isinstance(trials, int) or trials < 1):
        raise ConfigError("trials must be a positive integer")
    try:
        threads = default_threads() if threads is None else int(threads)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if threads < 1:
        raise ConfigError("threads must be positive")
    return params, seed, trials, threads, out


def _as_list(v) -> list:
    return list(v) if isinstance(v, (list, tuple)) else [v]


# --- experiments ----------------------------------------------------------------

def exp_conformance(params, seed, trials, threads) -> ResultTable:
    from .conformance import syndrome_table_report, transform_table_report

    table = params["table"]
    if table == "syndromes":
        t = ResultTable("conformance", seed, None, params, [
            ("error", "injected flying-qubit error, qubit labels 1..6"),
            ("pub_x1234", "printed outcome of X1X2X3X4 (+1/-1)"),
            ("pub_x3456", "printed outcome of X3X4X5X6"),
            ("pub_z1234", "printed outcome of Z1Z2Z3Z4"),
            ("pub_z3456", "printed outcome of Z3Z4Z5Z6"),
            ("der_x1234", "derived outcome of X1X2X3X4"),
            ("der_x3456", "derived outcome of X3X4X5X6"),
            ("der_z1234", "derived outcome of Z1Z2Z3Z4"),
            ("der_z3456", "derived outcome of Z3Z4Z5Z6"),
            ("correction", "derived correction, pairs numbered 1..3 (X = bit, Z = phase)"),
            ("flagged", "true when the printed row disagrees with the derivation"),
        ])
        flagged = []
        for r in syndrome_table_report():
            b, p = r.derived_correction
            corr = " ".join(s for s in ((f"Z{p + 1}" if p is not None else ""),
                                        (f"X{b + 1}" if b is not None else "")) if s) or "I"
            t.rows.append([r.description, *r.published_syndrome, *r.derived_syndrome, corr, not r.matches])
            if not r.matches:
                flagged.append(r)
        expected = [("bit 5 and phase 3 flip", (-1, -1, 1, -1))]
        got = [(r.description, r.derived_syndrome) for r in flagged]
        if got != expected:
            t.failures.append(f"flagged rows {got} differ from {expected}")
        t.summary.append(f"syndrome table: {16 - len(flagged)} rows agree, flagged: {[g[0] for g in got]}")
        return t
    if table == "transforms":
        t = ResultTable("conformance", seed, None, params, [
            ("state", "input logical state"),
            ("operator", "logical operator (X1, Z1 act on the first logical qubit)"),
            ("pub_sign", "printed sign"), ("pub_result", "printed result state"),
            ("der_sign", "sign from the stabilizer tableau"), ("der_result", "result from the tableau"),
            ("match", "true when printed and derived agree"),
        ])
        for (state, op), pub, der in transform_table_report():
            t.rows.append([state, op, pub[0], pub[1], der[0], der[1], pub == der])
            if pub != der:
                t.failures.append(f"transform entry {state},{op}: printed {pub}, derived {der}")
        t.summary.append(f"transform table: {16 - len(t.failures)} of 16 entries agree")
        return t
    raise ConfigError("table must be 'syndromes' or 'transforms'")


def exp_concat(params, seed, trials, threads) -> ResultTable:
    rounds = int(params["rounds"])
    mode = params["mode"]
    if mode not in ("physical", "recursion"):
        raise ConfigError("mode must be 'physical' or 'recursion'")
    t = ResultTable("concat", seed, trials, params, [
        ("q0", "physical per-type flip probability"),
        ("round", "concatenation level k"),
        ("groups", "logical pairs produced at this level"),
        ("analytic", "q_k from iterating q -> (3-2q)q^2"),
        ("bit_rate", "observed fraction of logical bit flips"),
        ("bit_se", "binomial standard error of bit_rate"),
        ("bit_z", "(bit_rate - analytic) / analytic standard error"),
        ("phase_rate", "observed fraction of logical phase flips"),
        ("phase_se", "binomial standard error of phase_rate"),
        ("phase_z", "(phase_rate - analytic) / analytic standard error"),
    ])
    for qi, q0 in enumerate(_as_list(params["q0"])):
        q0 = float(q0)
        analytic = iterate_recursion(ConcatSchedule(rounds, q0))
        res = run_chunked(lambda size, rng: simulate_concatenation(q0, rounds, size, rng, mode=mode),
                          trials, seed, f"concat/{qi}", chunk=int(params["chunk"]), threads=threads)
        for k in range(rounds):
            g = res.groups[k]
            br, bse = proportion(res.bit_failures[k], g)
            pr, pse = proportion(res.phase_failures[k], g)
            bz, pz = z_score(br, analytic[k], g), z_score(pr, analytic[k], g)
            t.rows.append([q0, k + 1, g, analytic[k], br, bse, bz, pr, pse, pz])
            if abs(bz) > Z_LIMIT or abs(pz) > Z_LIMIT:
                t.failures.append(f"q0={q0} round {k + 1}: z=({bz:.2f}, {pz:.2f}) exceeds {Z_LIMIT}")
        t.summary.append(f"q0={q0}: analytic {', '.join(f'{a:.6g}' for a in analytic)}")
    return t


def exp_dense(params, seed, trials, threads) -> ResultTable:
    from .pauli import ChannelParams
    from .protocols import (check_success_condition, dense_coding_batch, effective_pair_distribution,
                            enumerate_success_probability)
    from .protocols.qsdc import code_from_spec

    try:
        code = code_from_spec(params["code"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if code is None or isinstance(code, ConcatenatedCode):
        raise ConfigError("dense coding needs a lifted block code")
    t = ResultTable("dense", seed, trials, params, [
        ("code", "one-party code"),
        ("p", "per-Pauli channel probability p_x = p_y = p_z"),
        ("initial_fidelity", "fidelity of the shared pairs before encoding"),
        ("trials", "protocol runs"),
        ("success_rate", "fraction of runs whose readout equals the message"),
        ("success_se", "binomial standard error"),
        ("exact", "success probability by enumerating all error patterns (blank if too large)"),
        ("z", "(success_rate - exact) / exact standard error"),
        ("guaranteed_regime", "t/n >= p_z+p_y and t/n >= p_x+p_y"),
        ("fidelity_gate", "channel fidelity >= 1 - 1.5 t/n"),
    ])
    for p in _as_list(params["p"]):
        ch = ChannelParams.symmetric(float(p))
        f0 = float(params["initial_fidelity"])
        batch = run_chunked(
            lambda size, rng: dense_coding_batch(code, size, rng, f0, ch, bool(params["symmetrize"]),
                                                 bool(params["twirl"])),
            trials, seed, f"dense/{p}", chunk=int(params["chunk"]), threads=threads)
        rate, se = proportion(batch.successes, batch.trials)
        exact = z = float("nan")
        if code.n_pairs <= 8:
            dist = effective_pair_distribution(f0, ch, bool(params["symmetrize"]), bool(params["twirl"]))
            exact = float(enumerate_success_probability(code, dist))
            z = z_score(rate, exact, batch.trials)
            if abs(z) > Z_LIMIT:
                t.failures.append(f"p={p}: z={z:.2f} exceeds {Z_LIMIT}")
        cond = check_success_condition(code, ch)
        t.rows.append([repr(code), float(p), f0, batch.trials, rate, se, exact, z,
                       cond.guaranteed_regime, cond.fidelity_gate])
        t.summary.append(f"p={p}: success {rate:.5f} +- {se:.5f} (exact {exact:.5f})")
    return t


@dataclass
class _QsdcTally:
    runs: int = 0
    aborts: int = 0
    bits: int = 0
    bit_errors: int = 0
    check1: float = 0.0
    check2: float = 0.0
    checked2: int = 0

    def __add__(self, o):
        return _QsdcTally(self.runs + o.runs, self.aborts + o.aborts, self.bits + o.bits,
                          self.bit_errors + o.bit_errors, self.check1 + o.check1,
                          self.check2 + o.check2, self.checked2 + o.checked2)


def exp_qsdc(params, seed, trials, threads) -> ResultTable:
    from .protocols.qsdc import (qsdc_config_from_dict, run_qsdc_noiseless, run_qsdc_one_party,
                                 x_error_rate)

    proto = int(params["protocol"])
    if proto not in (2, 3):
        raise ConfigError("protocol must be 2 or 3")
    keys = ("n_blocks", "channel_phase1", "channel_phase2", "epp_residual", "epp_yield",
            "check_threshold", "eavesdropper", "code")
    try:
        cfg = qsdc_config_from_dict({k: params[k] for k in keys})
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from exc
    runner = run_qsdc_noiseless if proto == 2 else run_qsdc_one_party

    def task(size, rng):
        tally = _QsdcTally()
        for _ in range(size):
            o = runner(cfg, rng)
            tally.runs += 1
            tally.aborts += int(o.aborted)
            tally.check1 += o.check_rates[0]
            if len(o.check_rates) > 1:
                tally.check2 += o.check_rates[1]
                tally.checked2 += 1
            if not o.aborted:
                tally.bits += int(o.message.size)
                tally.bit_errors += o.bit_errors
        return tally

    tally = run_chunked(task, trials, seed, f"qsdc/{proto}", chunk=int(params["chunk"]), threads=threads)
    q2 = x_error_rate(cfg.channel_phase2)
    if proto == 2:
        q1 = x_error_rate(cfg.channel_phase1)
        predicted = q1 + q2 - 2 * q1 * q2
    elif isinstance(cfg.code, ConcatenatedCode) or cfg.code is None:
        r = cfg.epp_residual
        rounds = cfg.code.rounds if cfg.code is not None else 3
        predicted = iterate_recursion(ConcatSchedule(rounds, r + q2 - 2 * r * q2))[-1]
    else:
        predicted = float("nan")
    ber, ber_se = proportion(tally.bit_errors, tally.bits) if tally.bits else (float("nan"),) * 2
    t = ResultTable("qsdc", seed, trials, params, [
        ("protocol", "2 = uncoded baseline, 3 = one-party code in phase two"),
        ("runs", "protocol executions"),
        ("aborts", "runs stopped by a check round"),
        ("abort_rate", "aborts / runs"),
        ("message_bits", "message bits delivered by non-aborted runs"),
        ("bit_errors", "delivered bits that differ from the message"),
        ("ber", "bit_errors / message_bits"),
        ("ber_se", "binomial standard error of ber"),
        ("predicted_ber", "analytic delivered bit error rate (blank when unavailable)"),
        ("mean_check1", "mean first-round mismatch rate"),
        ("mean_check2", "mean second-round mismatch rate over runs that reached it"),
    ])
    t.rows.append([proto, tally.runs, tally.aborts, tally.aborts / tally.runs, tally.bits,
                   tally.bit_errors, ber, ber_se, predicted, tally.check1 / tally.runs,
                   tally.check2 / tally.checked2 if tally.checked2 else float("nan")])
    if tally.bits and not math.isnan(predicted):
        z = z_score(ber, predicted, tally.bits)
        if abs(z) > Z_LIMIT:
            t.failures.append(f"ber {ber:.5f} vs predicted {predicted:.5f}: z={z:.2f}")
    t.summary.append(f"protocol {proto}: abort rate {tally.aborts / tally.runs:.4f}, ber {ber:.5f}"
                     f" (predicted {predicted:.5f})")
    return t


def exp_oracle(params, seed, trials, threads) -> ResultTable:
    from .linear import hamming7, repetition3
    from .oracle import EquivalenceReport, oracle_equivalence

    def combine(a: EquivalenceReport, b: EquivalenceReport) -> EquivalenceReport:
        return EquivalenceReport(a.code, a.trials + b.trials, a.syndrome_mismatches + b.syndrome_mismatches,
                                 a.label_mismatches + b.label_mismatches,
                                 a.readout_mismatches + b.readout_mismatches,
                                 a.circuit_mismatches + b.circuit_mismatches, (a.examples + b.examples)[:5])

    t = ResultTable("oracle", seed, None, params, [
        ("code", "one-party code under test"),
        ("trials", "random message/error instances"),
        ("syndrome_mismatches", "frame and tableau syndromes differ"),
        ("label_mismatches", "post-correction Bell labels differ"),
        ("readout_mismatches", "decoded message bits differ"),
        ("circuit_mismatches", "gate-level extraction circuit disagrees with the frame syndrome"),
    ])
    for name, base, n in (("621", repetition3, params["trials_621"]), ("hamming", hamming7, params["trials_hamming"])):
        code = lift(base())
        rep = run_chunked(lambda size, rng: oracle_equivalence(code, size, rng), int(n), seed,
                          f"oracle/{name}", chunk=int(params["chunk"]), threads=threads, combine=combine)
        t.rows.append([repr(code), rep.trials, rep.syndrome_mismatches, rep.label_mismatches,
                       rep.readout_mismatches, rep.circuit_mismatches])
        if not rep.ok:
            t.failures.append(f"{code!r}: {rep.mismatches} mismatches, e.g. {rep.examples[:1]}")
        t.summary.append(f"{code!r}: {rep.trials} trials, {rep.mismatches} mismatches")
    return t


def exp_sweep(params, seed, trials, threads) -> ResultTable:
    from .pauli import ChannelParams
    from .protocols import fidelity_gate_bound

    kind = params["kind"]
    if kind == "recursion":
        rounds = int(params["rounds"])
        t = ResultTable("sweep", seed, None, params, [
            ("q0", "physical per-type flip probability"),
            ("round", "concatenation level k (0 = physical)"),
            ("q", "q_k from iterating q -> (3-2q)q^2"),
        ])
        for q0 in _as_list(params["q0"]):
            q0 = float(q0)
            seq = [q0] + iterate_recursion(ConcatSchedule(rounds, q0))
            for k, q in enumerate(seq):
                t.rows.append([q0, k, q])
            # strict until the float sequence lands on a fixed point (0 or 1)
            prev = np.array(seq[:-1])
            steps = np.diff(seq)
            if 0 < q0 < 0.5 and not ((steps < 0) | ((steps == 0) & (prev == 0))).all():
                t.failures.append(f"q0={q0}: sequence not strictly decreasing")
            if 0.5 < q0 < 1 and not ((steps > 0) | ((steps == 0) & (prev == 1))).all():
                t.failures.append(f"q0={q0}: sequence not strictly increasing")
        t.summary.append(f"{len(_as_list(params['q0']))} starting points, {rounds} rounds")
        return t
    if kind == "gv":
        p = float(params["p"])
        ch = ChannelParams.symmetric(p)
        t = ResultTable("sweep", seed, None, params, [
            ("t_over_n", "correctable fraction t/n"),
            ("capacity", "1 - H(t/n), the GV rate bound"),
            ("slack", "capacity minus the requested rate (rate 0 here)"),
            ("feasible", "GV bound admits codes at this t/n"),
            ("fidelity_bound", "1 - 1.5 t/n, least channel fidelity tolerated"),
            ("fidelity_gate", f"channel fidelity {ch.fidelity():.6g} (p={p}) meets fidelity_bound"),
            ("guaranteed_regime", f"t/n >= 2p at p={p}"),
        ])
        for r in _as_list(params["t_over_n"]):
            r = float(r)
            g = gv_report(r)
            fb = fidelity_gate_bound(r)
            t.rows.append([r, g.capacity, g.slack, g.feasible, fb, ch.fidelity() >= fb, r >= 2 * p])
        half = gv_report(0.5).capacity
        if abs(half) > 1e-12:
            t.failures.append(f"capacity at t/n=0.5 is {half}, not 0")
        t.summary.append(f"capacity at 0.5: {half:.3g}; fidelity bound at 0.5: {fidelity_gate_bound(0.5)}")
        return t
    raise ConfigError("sweep kind must be 'recursion' or 'gv'")


EXPERIMENTS = {
    "conformance": exp_conformance,
    "concat": exp_concat,
    "dense": exp_dense,
    "qsdc": exp_qsdc,
    "oracle": exp_oracle,
    "sweep": exp_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oneparty", description="One-party code experiments.")
    ap.add_argument("--version", action="version", version=f"oneparty {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with top-level seed/trials/threads/out and per-command sections")
        p.add_argument("--seed", type=int, help="master seed (default 0)")
        p.add_argument("--trials", type=int, help="Monte Carlo trials")
        p.add_argument("--out", help="CSV output path (default stdout)")
        p.add_argument("--threads", type=int, help="worker threads (default $ONEPARTY_THREADS or 1)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override any parameter; VALUE is parsed as JSON when possible")
        return p

    p = common(sub.add_parser("conformance", help="[[6,2,1]] tables against the derivation"))
    p.add_argument("--table", choices=("syndromes", "transforms"))
    p = common(sub.add_parser("concat", help="concatenation Monte Carlo vs the recursion"))
    p.add_argument("--q0", type=float, nargs="+")
    p.add_argument("--rounds", type=int)
    p.add_argument("--mode", choices=("physical", "recursion"))
    p = common(sub.add_parser("dense", help="dense coding success rate"))
    p.add_argument("--code")
    p.add_argument("--p", type=float, nargs="+")
    p.add_argument("--initial-fidelity", dest="initial_fidelity", type=float)
    p = common(sub.add_parser("qsdc", help="secure direct communication runs"))
    p.add_argument("--protocol", type=int, choices=(2, 3))
    p.add_argument("--n-blocks", dest="n_blocks", type=int)
    p = common(sub.add_parser("oracle", help="Pauli frame vs stabilizer tableau"))
    p.add_argument("--trials-621", dest="trials_621", type=int)
    p.add_argument("--trials-hamming", dest="trials_hamming", type=int)
    p = common(sub.add_parser("sweep", help="analytic curves over a parameter grid"))
    p.add_argument("--kind", choices=("recursion", "gv"))
    p.add_argument("--rounds", type=int)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params, seed, trials, threads, out = resolve(args)
        table = EXPERIMENTS[args.command](params, seed, trials, threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = format_csv(table)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    for line in table.summary:
        print(line, file=sys.stderr)
    if table.failures:
        for f in table.failures:
            print(f"FAIL: {f}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
