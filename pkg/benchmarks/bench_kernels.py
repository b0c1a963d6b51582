"""Time the compiled kernel against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each row
reports the best wall time per call for both backends, their ratio and the
largest relative difference between their results.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from varweyl._kernels import backends


def _cases(rng: np.random.Generator):
    n = 4000
    w = rng.uniform(0.0, 1e-3, n)
    h = rng.uniform(0.0, 5.0, n)
    p_mixed = rng.choice([1.0, 1.5, 2.0, 4.0], n)
    edges = np.sort(rng.uniform(0.0, 100.0, 801))
    heights = rng.uniform(-2.0, 2.0, 800)
    starts = np.linspace(edges[0], edges[-1] - 5.0, 400)
    yield ("modular_weighted n=4000", "modular_weighted", (w, h, p_mixed, 1.7))
    yield ("luxemburg_weighted n=4000", "luxemburg_weighted", (w, h, p_mixed, 1e-12))
    yield ("window_norms p=2 (bisection)", "window_norms",
           (edges, heights, starts, 5.0, np.empty(0), np.array([2.0]), False, 1.0, 1e-12, False))
    yield ("window_norms mixed p", "window_norms",
           (edges, heights, starts, 5.0, np.array([50.0]), np.array([1.5, 3.0]), False, 1.0, 1e-12, True))


def _first(x):
    return float(np.ravel(x)[0]) if isinstance(x, (tuple, list)) else np.asarray(x, dtype=float)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    found = backends()
    if "cython" not in found:
        print("compiled kernel not available; only the pure-Python backend can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':34s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, name, call_args in _cases(rng):
        times, results = {}, {}
        for backend, mod in found.items():
            fn = getattr(mod, name)
            results[backend] = _first(fn(*call_args))
            number = 1 if backend == "python" else 10
            t = min(timeit.repeat(lambda: fn(*call_args), number=number, repeat=args.repeat)) / number
            times[backend] = t * 1e3
        if "cython" in found:
            a, b = np.asarray(results["python"]), np.asarray(results["cython"])
            diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
            print(f"{label:34s} {times['python']:12.3f} {times['cython']:12.3f} "
                  f"{times['python'] / times['cython']:8.1f} {diff:13.2e}")
        else:
            print(f"{label:34s} {times['python']:12.3f} {'-':>12s} {'-':>8s} {'-':>13s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
