"""Benchmark the compiled kernel extension against the pure-numpy twin.

Times the hot kernels on synthetic workloads sized like the verification
sweeps: batched norms, interval-renorm sweeps, the James DP, and end-to-end
LP solves. Run:

    python benchmarks/bench_backends.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from seqfpp._codes import C0, JAMES, LIN
from seqfpp.backend import available_backends


def timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads(seed: int = 7):
    g = np.random.Generator(np.random.PCG64(seed))
    rows_lin = g.standard_normal((100_000, 24))
    rows_james = g.standard_normal((3_000, 24))
    coeffs = g.standard_normal((5_000, 16))
    expansion = np.triu(np.ones((16, 16)))
    james_single = g.standard_normal(600)

    # a displacement-style LP tableau family, rebuilt per run
    def lp_tableau():
        m, k = 40, 90
        T = np.zeros((m + 1, k + 1))
        T[:m, :k] = g.standard_normal((m, k))
        T[:m, k] = np.abs(g.standard_normal(m)) + 0.5
        basis = np.arange(k - m, k, dtype=np.int64)
        for i, b in enumerate(basis):
            T[:m, b] = 0.0
            T[i, b] = 1.0
        T[m, : k - m] = g.standard_normal(k - m)
        return T, basis

    return {
        "norms_rows[lin] 1e5x24": lambda k: k.norms_rows(rows_lin, LIN, 0.0),
        "norms_rows[james] 3e3x24": lambda k: k.norms_rows(rows_james, JAMES, 2.0),
        "interval_norms 5e3x16": lambda k: k.interval_norms(coeffs, expansion, C0, 0.0),
        "james_norm n=600": lambda k: k.james_norm(james_single, 2.0),
        "simplex pivots 40x90": lambda k: k.simplex_iterate(*lp_tableau(), 10_000, 1e-9),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", type=str, default=None)
    args = ap.parse_args()

    backends = available_backends()
    workloads = make_workloads()
    results: dict[str, dict[str, float]] = {}
    width = max(len(n) for n in workloads)
    header = f"{'workload':<{width}}  " + "  ".join(f"{b:>12}" for b in sorted(backends))
    if len(backends) > 1:
        header += f"  {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, fn in workloads.items():
        results[name] = {}
        for bname in sorted(backends):
            results[name][bname] = timeit(lambda: fn(backends[bname]), args.repeat)
        row = f"{name:<{width}}  " + "  ".join(
            f"{results[name][b] * 1e3:>10.2f}ms" for b in sorted(backends)
        )
        if "compiled" in results[name] and "python" in results[name]:
            row += f"  {results[name]['python'] / results[name]['compiled']:>8.1f}x"
        print(row)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)
        print(f"\nwrote {args.json}")


if __name__ == "__main__":
    main()
