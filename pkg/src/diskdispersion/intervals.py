"""Exact dispersion on the line and on a closed curve.

One point per interior-disjoint interval, maximizing the minimum gap
between consecutive points (plus the wraparound gap on a closed curve).
Both variants are solved exactly through the LP core; an independent
binary-search + greedy oracle ships alongside for verification.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lp import LPModel, OPTIMAL, solve_lp

_ORACLE_TOL = 1e-12


@dataclass(frozen=True)
class IntervalInstance:
    """Sorted interior-disjoint intervals [a_i, b_i]; cyclic instances carry
    the curve length and must satisfy 0 <= a_1 and b_n <= length."""

    intervals: tuple
    length: Optional[float] = None

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        if not ivs:
            raise ValueError("an interval instance needs at least one interval")
        for i, (a, b) in enumerate(ivs):
            if not (np.isfinite(a) and np.isfinite(b)):
                raise ValueError(f"interval {i} is not finite")
            if a > b:
                raise ValueError(f"interval {i} has a > b: [{a}, {b}]")
        for i in range(len(ivs) - 1):
            if ivs[i][1] > ivs[i + 1][0]:
                raise ValueError(
                    f"intervals {i} and {i + 1} are unsorted or overlap: "
                    f"b_{i} = {ivs[i][1]} > a_{i + 1} = {ivs[i + 1][0]}"
                )
        if self.length is not None:
            L = float(self.length)
            object.__setattr__(self, "length", L)
            if L <= 0:
                raise ValueError("a cyclic instance needs length > 0")
            if ivs[0][0] < 0 or ivs[-1][1] > L:
                raise ValueError("cyclic intervals must lie within [0, length]")

    @property
    def n(self) -> int:
        return len(self.intervals)


def _build_model(inst: IntervalInstance, cyclic: bool) -> LPModel:
    n = inst.n
    model = LPModel.maximize_variable(n + 1, n)  # x_1..x_n then z
    for i, (a, b) in enumerate(inst.intervals):
        row = np.zeros(n + 1)
        row[i] = 1.0
        model.add_constraint(row, ">=", a)
        model.add_constraint(row.copy(), "<=", b)
    for i in range(n - 1):
        row = np.zeros(n + 1)
        row[i + 1] = 1.0
        row[i] = -1.0
        row[n] = -1.0
        model.add_constraint(row, ">=", 0.0)
    if cyclic:
        row = np.zeros(n + 1)
        row[0] = 1.0
        row[n - 1] -= 1.0
        row[n] = -1.0
        model.add_constraint(row, ">=", -inst.length)
    return model


def _solve(inst: IntervalInstance, cyclic: bool):
    if inst.n < 2:
        raise ValueError("dispersion needs at least two intervals")
    if cyclic and inst.length is None:
        raise ValueError("cyclic dispersion needs the curve length")
    sol = solve_lp(_build_model(inst, cyclic), backend="simplex")
    if sol.status != OPTIMAL:
        raise RuntimeError(f"interval LP unexpectedly {sol.status}")
    return float(sol.objective), sol.x[: inst.n].copy()


def solve_line(inst: IntervalInstance):
    """Exact optimum of the max-min-gap placement on the line.

    Returns (z*, points), one point per interval in order.
    """
    return _solve(inst, cyclic=False)


def solve_cycle(inst: IntervalInstance):
    """Exact optimum on a closed curve, including the wraparound gap."""
    return _solve(inst, cyclic=True)


# ---------------------------------------------------------------------------
# independent verification oracle (not the primary path)


def _greedy_line(intervals, z: float, x1: float | None = None):
    """Leftmost placement with gaps >= z; None when infeasible."""
    a0, b0 = intervals[0]
    x = a0 if x1 is None else x1
    if x < a0 or x > b0:
        return None
    out = [x]
    for a, b in intervals[1:]:
        x = max(a, x + z)
        if x > b:
            return None
        out.append(x)
    return out


def line_oracle(inst: IntervalInstance):
    """Binary search on z with greedy feasibility; independent of the LP."""
    if inst.n < 2:
        raise ValueError("dispersion needs at least two intervals")
    ivs = inst.intervals
    lo, hi = 0.0, ivs[-1][1] - ivs[0][0]
    if _greedy_line(ivs, hi) is not None:
        lo = hi
    while hi - lo > _ORACLE_TOL:
        mid = 0.5 * (lo + hi)
        if _greedy_line(ivs, mid) is not None:
            lo = mid
        else:
            hi = mid
    return lo, np.asarray(_greedy_line(ivs, lo), dtype=float)


def _cycle_window(inst: IntervalInstance, z: float):
    """Feasible range of the first point at gap z, or None.

    The greedy chains A_i (leftmost placement ignoring the first point)
    determine everything: x_i = max(A_i, x_1 + i z), so the interval
    constraints cap x_1 from above, the wraparound gap bounds it from
    below, and feasibility is a window test on x_1.
    """
    ivs = inst.intervals
    n, L = inst.n, inst.length
    a1, b1 = ivs[0]
    lo, hi = a1, b1
    chain = -np.inf
    for i in range(1, n):
        a, b = ivs[i]
        chain = max(chain + z, a)
        if chain > b:
            return None
        hi = min(hi, b - i * z)
    if n * z > L:
        return None
    lo = max(lo, chain + z - L)
    if lo > hi:
        return None
    return lo, hi


def cycle_oracle(inst: IntervalInstance):
    """Binary search on z; feasibility reduces to the line via the greedy
    chains plus the wraparound window on the first point."""
    if inst.n < 2:
        raise ValueError("dispersion needs at least two intervals")
    if inst.length is None:
        raise ValueError("cyclic dispersion needs the curve length")
    lo, hi = 0.0, float(inst.length)
    while hi - lo > _ORACLE_TOL:
        mid = 0.5 * (lo + hi)
        if _cycle_window(inst, mid) is not None:
            lo = mid
        else:
            hi = mid
    # materialize a placement; back off by an ulp-scale amount if the
    # sequential greedy disagrees with the window test at the boundary
    for z in (lo, lo - 1e-12 * (1.0 + lo)):
        window = _cycle_window(inst, z)
        if window is None:
            continue
        for x1 in (0.5 * (window[0] + window[1]), window[0], window[1]):
            pts = _greedy_line(inst.intervals, z, x1=x1)
            if pts is not None:
                return lo, np.asarray(pts, dtype=float)
    raise AssertionError("cycle oracle failed to materialize its own feasible placement")
