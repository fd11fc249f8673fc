"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--graph grid3x3] [--repeat 3]

"states" counts currents (3^m) for the current kernels and spin
configurations (4^n) for spin_bins.
"""

import argparse
import random
import time

from atlab import families, kernels, sampling
from atlab.currents import coefficient_table
from atlab.model import Phi, _factors


def best_of(repeat, fn):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(g):
    w = sampling.general(g.m, random.Random(0))
    X, Y, D = w.kernel_triplet()
    src, markers, coef = coefficient_table(g, Phi(A1={g.vertices[0]}, B1={g.vertices[-1]}))
    F0, F1, F2 = _factors(w)
    win = tuple(range(min(4, g.n)))
    return {
        "scan_trits": (lambda b: kernels.scan_trits(g, 0, backend=b), 3 ** g.m),
        "current_sum": (lambda b: kernels.current_sum(g, X, Y, D, src, markers, coef, backend=b), 3 ** g.m),
        "spin_bins": (lambda b: kernels.spin_bins(g, F0, F1, F2, 0, 0, win, win, backend=b), 4 ** g.n),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default="grid3x3")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    g = families.by_name(args.graph)
    backends = ["compiled", "python"] if kernels.compiled_available() else ["python"]
    print(f"{'kernel':<12} {'backend':<9} {'graph':<9} {'states':>10} {'seconds':>9} {'states/s':>10}")
    for backend in backends:
        for name, (fn, states) in cases(g).items():
            dt = best_of(args.repeat, lambda: fn(backend))
            print(f"{name:<12} {backend:<9} {args.graph:<9} {states:>10} {dt:>9.4f} {states / dt:>10.3g}")


if __name__ == "__main__":
    main()
