"""Compare the compiled merge-sweep kernel against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--sizes 128,256,512] [--repeat 3]

Both backends are run on the same synthetic scenes (noise on, so the diagram
is large) and their outputs are checked for equality before timing is
reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import topoprompt as tp
from topoprompt._kernels import _sweep_py

try:
    from topoprompt._kernels import _sweep as _sweep_cy
except ImportError:
    _sweep_cy = None


def order_and_pos(values: np.ndarray):
    order = np.argsort(-values, kind="stable").astype(np.int64)
    pos = np.empty(values.size, dtype=np.int64)
    pos[order] = np.arange(values.size, dtype=np.int64)
    return order, pos


def time_backend(sweep, order, pos, width, height, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = sweep(order, pos, width, height, 8)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="128,256,512",
                        help="comma-separated square image sizes")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if _sweep_cy is None:
        print("compiled kernel unavailable; timing the fallback only")

    print(f"{'size':>6} {'pairs':>8} {'python':>10} {'cython':>10} {'speedup':>8}")
    for size in sizes:
        count = max(1, (size * size) // 13000)
        img, _ = tp.generate_scene(
            tp.SceneConfig(seed=1, width=size, height=size, count=count))
        values = tp.normalize(img).values
        order, pos = order_and_pos(values)

        t_py, res_py = time_backend(_sweep_py.sweep, order, pos, size, size,
                                    args.repeat)
        n_pairs = res_py[0].size + res_py[2].size
        if _sweep_cy is None:
            print(f"{size:>6} {n_pairs:>8} {t_py:>9.3f}s {'-':>10} {'-':>8}")
            continue

        t_cy, res_cy = time_backend(_sweep_cy.sweep, order, pos, size, size,
                                    args.repeat)
        for a, b in zip(res_py, res_cy):
            assert np.array_equal(a, b), "backend mismatch"
        print(f"{size:>6} {n_pairs:>8} {t_py:>9.3f}s {t_cy:>9.3f}s "
              f"{t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
