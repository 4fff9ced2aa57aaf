"""Benchmark the numba kernel twins against the pure-numpy fallback.

Times each per-sample kernel on synthetic draws shaped like real estimator
input and reports throughput plus the numba/numpy speedup. Run from the repo
root:

    python3 benchmarks/bench_kernels.py --rows 1048576 --cols 2 8 --repeat 5
"""
import argparse
import timeit

import numpy as np

from misosec import _kernels


def make_inputs(rows: int, cols: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    abs2 = rng.exponential(scale=1.0, size=(rows, cols))
    d = rng.uniform(0.5, 2.0, size=cols)
    q = abs2 @ d
    return abs2, d, q


def cases(abs2, d, q, a: float = 0.25):
    return [
        ("quad_form", lambda fn: fn(abs2, d), "quad_form"),
        ("coupled_integrand", lambda fn: fn(q, a), "coupled_integrand"),
        ("log_rate", lambda fn: fn(q), "log_rate"),
        ("grad_weights", lambda fn: fn(q, a), "grad_weights"),
    ]


def best_seconds(call, fn, repeat: int) -> float:
    return min(timeit.repeat(lambda: call(fn), number=1, repeat=repeat))


def run(rows: int, cols: int, repeat: int) -> None:
    abs2, d, q = make_inputs(rows, cols)
    print(f"\nrows={rows} cols={cols} (best of {repeat})")
    print(f"{'kernel':<18} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for name, call, base in cases(abs2, d, q):
        numpy_fn = getattr(_kernels, base + "_numpy")
        t_numpy = best_seconds(call, numpy_fn, repeat)
        line = f"{name:<18} {rows / t_numpy:>10.3g}/s"
        if _kernels.have_numba():
            numba_fn = getattr(_kernels, base + "_numba")
            call(numba_fn)  # compile outside the timed region
            t_numba = best_seconds(call, numba_fn, repeat)
            line += f" {rows / t_numba:>10.3g}/s {t_numpy / t_numba:>7.2f}x"
        else:
            line += f" {'n/a':>12} {'n/a':>8}"
        print(line)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rows", type=int, default=1 << 20, help="samples per call")
    parser.add_argument("--cols", type=int, nargs="+", default=[2, 8],
                        help="antenna counts to try")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    args = parser.parse_args()
    print(f"active backend: {_kernels.active_backend()}"
          + ("" if _kernels.have_numba() else " (numba not installed)"))
    for cols in args.cols:
        run(args.rows, cols, args.repeat)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
