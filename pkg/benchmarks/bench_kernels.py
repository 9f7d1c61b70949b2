"""Time the numba and numpy kernel backends against each other.

    python3 benchmarks/bench_kernels.py [--angles 100000] [--limit 30000000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from pyramid_geometry import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--angles", type=int, default=100_000)
    ap.add_argument("--limit", type=int, default=30_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy backend can be timed")
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    thetas = np.radians(np.random.default_rng(0).uniform(1.0, 120.0, args.angles))

    # compile once outside the timed region
    if "numba" in backends:
        _kernels.trisect_sweep(thetas[:2], 1.0, 1e-10, 60, backend="numba")
        _kernels.consecutive_leg_scan(100, backend="numba")

    cases = {
        f"trisect_sweep ({args.angles} angles)": lambda b: _kernels.trisect_sweep(thetas, 1.0, 1e-10, 60, backend=b),
        f"consecutive_leg_scan (a < {args.limit})": lambda b: _kernels.consecutive_leg_scan(args.limit, backend=b),
    }
    print(f"{'kernel':<42}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, run in cases.items():
        results = {b: run(b) for b in backends}
        if len(backends) == 2:
            a, b = results["numpy"], results["numba"]
            same = all(np.allclose(x, y, atol=1e-11) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
            if not same:
                raise SystemExit(f"{name}: backends disagree")
        t = {b: best_of(lambda b=b: run(b), args.repeat) for b in backends}
        line = f"{name:<42}" + "".join(f"{t[b]:>11.4f}s" for b in backends)
        if len(backends) == 2:
            line += f"{t['numpy'] / t['numba']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
