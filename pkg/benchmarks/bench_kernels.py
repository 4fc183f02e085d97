"""Timing comparison of the compiled kernels against the NumPy fallback.

Runs the two hot kernels on identical inputs through both backends and
prints the best-of-repeats wall time plus the speedup.  Usage:

    python3 benchmarks/bench_kernels.py [--n 15] [--k 400] [--trials 20000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hmix import _kernels_py

try:
    from hmix import _kernels
except ImportError:
    _kernels = None


def best_of(repeats: int, fn) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_gather(backend, states: int, sweeps: int) -> float:
    rng = np.random.default_rng(1)
    p = rng.uniform(size=states)
    p /= p.sum()
    grid = np.arange(states, dtype=np.intp)
    idx = np.stack([(grid + s) % states for s in (1, -1, 17, -17)])
    w = np.full(4, 0.25)
    out = np.empty_like(p)

    def run():
        cur, nxt = p.copy(), out
        for _ in range(sweeps):
            backend.gather_mix(cur, idx, w, nxt)
            cur, nxt = nxt, cur

    return best_of(3, run)


def bench_walks(backend, trials: int, k: int) -> float:
    rng = np.random.default_rng(2)
    codes = rng.integers(0, 4, size=(trials, k), dtype=np.uint8)
    x = np.empty(trials, dtype=np.int64)
    y = np.empty(trials, dtype=np.int64)
    z = np.empty(trials, dtype=np.int64)
    return best_of(3, lambda: backend.walk_endpoints(codes, x, y, z))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=15, help="group modulus for the gather")
    parser.add_argument("--sweeps", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=20000)
    parser.add_argument("--k", type=int, default=400)
    args = parser.parse_args()

    states = args.n**3
    cases = [
        ("gather_mix", lambda b: bench_gather(b, states, args.sweeps),
         f"{states} states x {args.sweeps} sweeps"),
        ("walk_endpoints", lambda b: bench_walks(b, args.trials, args.k),
         f"{args.trials} walks x {args.k} steps"),
    ]
    print(f"{'kernel':<16} {'size':<28} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    for name, fn, size in cases:
        t_py = fn(_kernels_py)
        if _kernels is None:
            print(f"{name:<16} {size:<28} {t_py:>9.4f}s {'n/a':>10} {'n/a':>8}")
            continue
        t_c = fn(_kernels)
        print(
            f"{name:<16} {size:<28} {t_py:>9.4f}s {t_c:>9.4f}s "
            f"{t_py / t_c:>7.2f}x"
        )


if __name__ == "__main__":
    main()
