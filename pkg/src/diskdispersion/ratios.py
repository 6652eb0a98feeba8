"""Approximation-ratio curves and certified constants.

Scalar analysis behind the solvers: the three-disk packing bound ``f``,
the balance parameter ``sigma`` and the matching-perturbation ratio ``c``,
the placement/centers ratio curves ``c1``/``c2``, the unit-disk portfolio
curves ``a1``/``a2`` with the crossover and floor machinery, and a table
of certified constants with residuals.

All functions accept floats or numpy arrays and are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import DegenerateDeltaError

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)

_BISECT_MAX_ITER = 200
_SIGMA_RESIDUAL_TOL = 1e-12


def _as_float_array(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _scalar_or_array(arr, scalar: bool):
    return float(arr) if scalar else arr


def f(s):
    """Three-disk packing bound: max-min distance of points in three unit
    disks whose outer centers are within ``s`` of the middle center.

    Strictly increasing, with s + 1 < f(s) < s + 2 for all s >= 0.
    """
    arr, scalar = _as_float_array(s)
    if np.any(arr < 0):
        raise ValueError("f(s) needs s >= 0")
    t = (1.0 + arr) ** 2
    out = np.sqrt(t + 0.5 + np.sqrt(3.0 * t - 0.75))
    return _scalar_or_array(out, scalar)


def solve_sigma(delta):
    """Unique root sigma of delta/f(sigma) = (sigma + delta) / (2 (delta + 2)).

    Found by bisection on (delta, delta + 4): the left side decreases and
    the right side increases in sigma, and they strictly bracket the root
    at both ends for any delta > 0. The returned value satisfies the
    equation to a residual of at most 1e-12 and lies strictly inside
    (delta, delta + 4).
    """
    arr, scalar = _as_float_array(delta)
    if np.any(arr <= 0):
        raise DegenerateDeltaError("sigma is only defined for delta > 0 (the bracketing fails at delta = 0)")
    d = np.atleast_1d(arr)
    lo = d.copy()
    hi = d + 4.0
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        g = d / f(mid) - (mid + d) / (2.0 * (d + 2.0))
        pos = g > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.max(hi - lo) <= 1e-15 * np.max(hi):
            break
    sigma = 0.5 * (lo + hi)
    residual = np.abs(d / f(sigma) - (sigma + d) / (2.0 * (d + 2.0)))
    if np.any(residual > _SIGMA_RESIDUAL_TOL):
        raise ArithmeticError(f"sigma bisection residual {np.max(residual):.3e} exceeds {_SIGMA_RESIDUAL_TOL}")
    out = sigma if not scalar else sigma[0]
    return _scalar_or_array(np.asarray(out), scalar)


def sigma_residual(delta, sigma) -> float:
    """Absolute residual of the sigma balance equation at (delta, sigma)."""
    delta = float(delta)
    sigma = float(sigma)
    return abs(delta / f(sigma) - (sigma + delta) / (2.0 * (delta + 2.0)))


def c(delta):
    """Guaranteed ratio of the matching-perturbation solver at minimum
    center distance ``delta``; increasing in delta.

    Computed from both closed forms, delta/f(sigma) and
    (sigma + delta)/(2 (delta + 2)), which must agree to 1e-9.
    """
    arr, scalar = _as_float_array(delta)
    sigma = np.atleast_1d(np.asarray(solve_sigma(arr)))
    d = np.atleast_1d(arr)
    via_f = d / f(sigma)
    via_linear = (sigma + d) / (2.0 * (d + 2.0))
    if np.any(np.abs(via_f - via_linear) > 1e-9):
        raise ArithmeticError("the two closed forms of c(delta) disagree beyond 1e-9")
    out = via_linear if not scalar else via_linear[0]
    return _scalar_or_array(np.asarray(out), scalar)


def c1(x):
    """Ratio curve of the placement algorithm for unit disks, on [0, 2].

    Constant 1/2 below x = 1, then (-sqrt3 + sqrt3 x + sqrt(3 + 2x - x^2)) / (4x);
    the two pieces join continuously at x = 1.
    """
    arr, scalar = _as_float_array(x)
    if np.any(arr < 0):
        raise ValueError("c1(x) needs x >= 0")
    if np.any(arr > 2):
        raise ValueError("c1(x) is defined on [0, 2]")
    safe = np.maximum(arr, 1.0)
    formula = (-SQRT3 + SQRT3 * safe + np.sqrt(3.0 + 2.0 * safe - safe * safe)) / (4.0 * safe)
    out = np.where(arr < 1.0, 0.5, formula)
    return _scalar_or_array(out, scalar)


def c2(x):
    """Ratio curve of center selection: (x - 1) / x for x >= 1."""
    arr, scalar = _as_float_array(x)
    if np.any(arr < 1):
        raise ValueError("c2(x) needs x >= 1")
    out = (arr - 1.0) / arr
    return _scalar_or_array(out, scalar)


def a1(x):
    """Unit-disk ratio curve of the matching-perturbation solver: c(2x - 2).

    Degenerate at x <= 1, where the inner ratio has no positive minimum
    center distance to work with.
    """
    arr, scalar = _as_float_array(x)
    if np.any(arr <= 1):
        raise DegenerateDeltaError("a1(x) needs x > 1 (it evaluates c at 2x - 2)")
    out = np.asarray(c(2.0 * arr - 2.0))
    return _scalar_or_array(out, scalar)


def a2(x, mu):
    """Unit-disk ratio curve of the projection-LP solver run on shrunk disks:
    (x - 1 + mu) / (x sqrt2), increasing in both arguments."""
    xa, xs = _as_float_array(x)
    ma, ms = _as_float_array(mu)
    if np.any(xa < 1) or np.any(xa > 2):
        raise ValueError("a2 needs x in [1, 2]")
    if np.any(ma < 0) or np.any(ma > 1):
        raise ValueError("a2 needs mu in [0, 1]")
    out = (xa - 1.0 + ma) / (xa * SQRT2)
    return _scalar_or_array(np.asarray(out), xs and ms)


def y1(mu):
    """Positive root (in y = x - 1) of c1(x) = a2(x, mu); decreasing in mu."""
    arr, scalar = _as_float_array(mu)
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError("y1 needs mu in [0, 1]")
    out = (-(4.0 - SQRT6) * arr + np.sqrt(12.0 - 4.0 * SQRT6 - 2.0 * arr * arr)) / (2.0 * (3.0 - SQRT6))
    return _scalar_or_array(out, scalar)


def x1(mu):
    """Crossover abscissa of c1 and a2 at fixed mu: 1 + y1(mu)."""
    arr, scalar = _as_float_array(mu)
    out = 1.0 + np.asarray(y1(arr))
    return _scalar_or_array(out, scalar)


def mu0() -> float:
    """Fixed point of y1: the shrink parameter where the portfolio floor is
    attained. Closed form 1 / sqrt(9 - 2 sqrt6), cross-checked against the
    equivalent form sqrt((9 + 2 sqrt6) / 57) and against a bisection root
    of y1(mu) - mu; the three must agree to 1e-12.
    """
    closed = 1.0 / math.sqrt(9.0 - 2.0 * SQRT6)
    alt = math.sqrt((9.0 + 2.0 * SQRT6) / 57.0)
    lo, hi = 0.0, 1.0
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if y1(mid) - mid > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(closed - alt) > 1e-12 or abs(closed - root) > 1e-12:
        raise ArithmeticError("closed forms and bisection root of mu0 disagree")
    return closed


@dataclass(frozen=True)
class RatioCurve:
    """A named scalar ratio curve with its domain of definition."""

    name: str
    domain: tuple[float, float]
    func: Callable[[float], float]

    def __call__(self, x):
        return self.func(x)


CURVE_F = RatioCurve("f", (0.0, math.inf), f)
CURVE_C = RatioCurve("c", (0.0, math.inf), c)
CURVE_C1 = RatioCurve("c1", (0.0, 2.0), c1)
CURVE_C2 = RatioCurve("c2", (1.0, math.inf), c2)
CURVE_A1 = RatioCurve("a1", (1.0, math.inf), a1)


def a2_curve(mu: float) -> RatioCurve:
    """The a2 curve with its second argument frozen."""
    return RatioCurve(f"a2(mu={mu:g})", (1.0, 2.0), lambda x: a2(x, mu))


@dataclass(frozen=True)
class CrossoverResult:
    """Intersection of two curves: abscissa, common value, and residual."""

    x_star: float
    value: float
    residual: float


def crossover(curve_a, curve_b, lo: float, hi: float) -> CrossoverResult:
    """Bisection intersection of two curves on [lo, hi].

    The difference curve must change sign on the bracket; the result's
    residual |A(x*) - B(x*)| is at most 1e-9.
    """

    def g(x: float) -> float:
        return float(curve_a(x)) - float(curve_b(x))

    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return CrossoverResult(lo, float(curve_a(lo)), 0.0)
    if ghi == 0.0:
        return CrossoverResult(hi, float(curve_a(hi)), 0.0)
    if (glo > 0) == (ghi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}] (g({lo}) = {glo:.3g}, g({hi}) = {ghi:.3g})")
    pos_lo = glo > 0
    a, b = float(lo), float(hi)
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (a + b)
        if (g(mid) > 0) == pos_lo:
            a = mid
        else:
            b = mid
    x_star = 0.5 * (a + b)
    va, vb = float(curve_a(x_star)), float(curve_b(x_star))
    residual = abs(va - vb)
    if residual > 1e-9:
        raise ArithmeticError(f"crossover residual {residual:.3e} exceeds 1e-9")
    return CrossoverResult(x_star, 0.5 * (va + vb), residual)


def hybrid_floor(mu: float, grid: int) -> float:
    """Worst case over x in [1, 1 + mu] of the better of c1 and a2(., mu),
    evaluated on a uniform grid of the given size."""
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise ValueError("hybrid_floor needs mu in [0, 1]")
    grid = int(grid)
    if grid < 2:
        raise ValueError("hybrid_floor needs a grid of at least 2 points")
    xs = np.linspace(1.0, 1.0 + mu, grid)
    vals = np.maximum(np.asarray(c1(xs)), np.asarray(a2(xs, mu)))
    return float(np.min(vals))


@dataclass(frozen=True)
class ConstantRow:
    name: str
    value: float
    residual: float
    note: str


def certified_constants(epsilon: float = 1e-4) -> list[ConstantRow]:
    """The headline constants, each with the residual of its defining check."""
    sigma2 = float(solve_sigma(2.0))
    c2_val = float(c(2.0))
    c2_split = abs(2.0 / f(sigma2) - (sigma2 + 2.0) / 8.0)
    m0 = mu0()
    floor_closed = SQRT2 / (1.0 + math.sqrt(9.0 - 2.0 * SQRT6))
    floor = hybrid_floor(m0, 10001)
    cross_cc = crossover(CURVE_C1, CURVE_C2, 1.0, 2.0)
    cross_ca = crossover(CURVE_C1, CURVE_A1, 1.01, 2.0)
    lp_ratio = (1.0 - epsilon) / SQRT2
    return [
        ConstantRow("sigma(2)", sigma2, sigma_residual(2.0, sigma2), "root of the sigma balance equation"),
        ConstantRow("c(2)", c2_val, c2_split, "disjoint-unit ratio of the perturbation solver"),
        ConstantRow("mu0", m0, abs(float(y1(m0)) - m0), "fixed point of y1"),
        ConstantRow("y1(0)", float(y1(0.0)), abs(float(y1(0.0)) - 1.0 / math.sqrt(3.0 - SQRT6)), "c1/a2 crossover at mu = 0"),
        ConstantRow("hybrid_floor", floor, abs(floor - floor_closed), "min over mu of the certified portfolio ratio"),
        ConstantRow("c1/c2 crossover x", cross_cc.x_star, cross_cc.residual, "placement vs centers"),
        ConstantRow("c1/c2 crossover value", cross_cc.value, cross_cc.residual, ""),
        ConstantRow("c1/a1 crossover x", cross_ca.x_star, cross_ca.residual, "placement vs perturbation"),
        ConstantRow("c1/a1 crossover value", cross_ca.value, cross_ca.residual, ""),
        ConstantRow(f"(1-eps)/sqrt2 at eps={epsilon:g}", lp_ratio, 0.0, "projection-LP guarantee for disjoint balls"),
    ]
