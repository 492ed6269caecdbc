"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from cohomlab import _pykernels
from cohomlab.catalog import load_scenario
from cohomlab.curvature_oracle import LeftInvariantMetric

try:
    from cohomlab import _ckernels
except ImportError:
    _ckernels = None


def inputs(name, n, seed=42):
    s = load_scenario(name)
    A = s.algebra
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.5, 2.0, A.dim)
    m = LeftInvariantMetric.diagonal(A, w)
    X = rng.standard_normal((n, A.dim))
    Y = rng.standard_normal((n, A.dim))
    c = np.ascontiguousarray(A.c, dtype=float)
    G = np.ascontiguousarray(m.gamma, dtype=float)
    P = np.ascontiguousarray(np.diag(w))
    return c, G, P, X, Y


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the numpy fallback is available")
    print(f"{'scenario':<14}{'kernel':<12}{'numpy ms':>10}{'cython ms':>11}{'speedup':>9}{'max diff':>11}")
    for name in ("su2-berger", "so4-stiefel", "so5-two-block"):
        c, G, P, X, Y = inputs(name, args.n)
        cases = {
            "bracket": lambda mod: mod.bracket_batch(c, X, Y),
            "connection": lambda mod: mod.connection_batch(G, X, Y),
            "curvature": lambda mod: mod.curvature_batch(c, G, P, X, Y),
        }
        for kernel, fn in cases.items():
            tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
            if _ckernels is None:
                print(f"{name:<14}{kernel:<12}{tp:>10.2f}{'-':>11}{'-':>9}{'-':>11}")
                continue
            tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
            diff = float(np.max(np.abs(np.asarray(fn(_pykernels)) - np.asarray(fn(_ckernels)))))
            print(f"{name:<14}{kernel:<12}{tp:>10.2f}{tc:>11.2f}{tp / tc:>9.1f}{diff:>11.1e}")


if __name__ == "__main__":
    main()
