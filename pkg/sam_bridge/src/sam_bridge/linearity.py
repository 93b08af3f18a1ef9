"""Least-squares timing fit: does bridge wall time grow linearly with prompts?

One forward pass per point implies cost = a * n + b; the fit quality over a
few prompt budgets is a cheap sanity check that nothing superlinear (or
cached) is hiding in the loop.
"""

from __future__ import annotations


def fit_line(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    """Return (slope, intercept, r_squared) of the least-squares line."""
    n = len(xs)
    if n < 2 or len(ys) != n:
        raise ValueError("need at least two (x, y) samples")
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise ValueError("x values must not be constant")
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - my) ** 2 for y in ys)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return slope, intercept, r2
