"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--words 1000000] [--repeat 5]

Prints the best-of-N wall time per kernel and backend, and the speedup of
the compiled module. Also times one full concatenation Monte Carlo with each
backend selected, since that is the hot loop the kernels exist for.
"""
import argparse
import time

import numpy as np

from oneparty import kernels
from oneparty.code import simulate_concatenation
from oneparty.linear import hamming7


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--words", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only numpy timings shown")
    rng = np.random.default_rng(args.seed)
    code = hamming7()
    bits = rng.integers(0, 2, size=(args.words, code.n), dtype=np.uint8)
    codes = rng.integers(0, 4, size=(args.words, code.n), dtype=np.uint8)
    rows, leaders, proj = code.pchk_masks, code.leader_masks(), code.message_projector()
    words = backends["numpy"].pack_bits(bits)

    cases = {
        "pack_bits": lambda m: m.pack_bits(bits),
        "pauli_masks": lambda m: m.pauli_masks(codes),
        "syndromes": lambda m: m.syndromes(words, rows),
        "decode_logical": lambda m: m.decode_logical(words, rows, leaders, proj),
    }
    print(f"{'kernel':<16}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, fn in cases.items():
        t = {name: best_of(lambda: fn(mod), args.repeat) for name, mod in backends.items()}
        speed = t["numpy"] / t["cython"] if "cython" in t else float("nan")
        print(f"{label:<16}" + "".join(f"{t[n] * 1e3:>10.2f}ms" for n in backends) + f"{speed:>9.1f}x")

    saved = kernels._impl
    try:
        line = []
        for name, mod in backends.items():
            kernels._impl = mod
            el = best_of(lambda: simulate_concatenation(0.3, 3, 50_000, np.random.default_rng(1)), args.repeat)
            line.append(f"{name} {el * 1e3:.1f}ms")
        print("concat MC, 3 rounds, 50000 groups: " + ", ".join(line))
    finally:
        kernels._impl = saved


if __name__ == "__main__":
    main()
