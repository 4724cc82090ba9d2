"""Timing comparison of the compiled and pure-Python sliding-argmin cores.

Runs each backend on the same random-walk array and prints per-call times
and the speedup.  The compiled extension is optional; when it is absent the
script still reports the fallback numbers.

    python3 benchmarks/bench_window.py --n 2000000 --widths 101,1001,10001
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from argminproc import _window_py

try:
    from argminproc import _window_cy
except ImportError:
    _window_cy = None


def _time_backend(impl, values: np.ndarray, width: int, repeats: int) -> float:
    out = np.empty(len(values) - width + 1, dtype=np.int64)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        impl.last_argmin_offsets(values, width, out)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2_000_000, help="walk length")
    ap.add_argument("--widths", default="101,1001,10001")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    widths = [int(w) for w in args.widths.split(",")]
    rng = np.random.default_rng(args.seed)
    values = np.cumsum(rng.standard_normal(args.n))

    backends = [("python", _window_py)]
    if _window_cy is not None:
        backends.append(("cython", _window_cy))
    else:
        print("compiled extension not importable; timing the fallback only")

    print(f"walk length {args.n}, best of {args.repeats} runs")
    print(f"{'width':>8} " + "".join(f"{name:>14}" for name, _ in backends) + f"{'speedup':>10}")
    for width in widths:
        if width > args.n:
            continue
        times = [_time_backend(impl, values, width, args.repeats) for _, impl in backends]
        row = f"{width:>8} " + "".join(f"{t * 1e3:>12.1f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)

    # equal outputs on a tie-heavy integer walk, so the timing compares
    # genuinely identical semantics
    check = np.cumsum(rng.integers(-1, 2, size=50_000).astype(np.float64))
    for width in (3, 64, 999):
        a = np.empty(len(check) - width + 1, dtype=np.int64)
        _window_py.last_argmin_offsets(check, width, a)
        if _window_cy is not None:
            b = np.empty_like(a)
            _window_cy.last_argmin_offsets(check, width, b)
            assert np.array_equal(a, b), f"backends disagree at width {width}"
    print("cross-check: backends agree" if _window_cy is not None else "cross-check: skipped")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
