"""Instance-level optimum bounds, a grid brute-force oracle, and ratio
certificates.

The upper bounds come from closed forms: for disjoint balls the smallest
pairwise value of center distance plus both radii; for unit disks the
minimum of delta + 2 and the three-disk packing bound evaluated at the
smallest second-nearest center distance; for two balls the exact optimum.
The brute-force oracle maximizes the minimum pairwise distance over the
product of per-ball grids and reports best-found only: a lower bound on
the true optimum, never a claim of optimality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import (
    Ball,
    BallInstance,
    Solution,
    TOL,
    UndefinedDeltaError,
    min_pairwise_distance,
    neighbor_info,
    require_disjoint,
    require_unit,
    validate,
)
from .ratios import f

#: Hard cap on the nominal grid-product cost k^(d n) of the brute force.
BUDGET = 1e13
_MAX_BALLS = 5


class BudgetExceededError(ValueError):
    """The requested brute-force search exceeds the cost budget."""


def opt_upper_disjoint(inst: BallInstance) -> float:
    """For disjoint balls: min over pairs of (center distance + r_i + r_j).

    Any two selected points are at most that far apart, and disjointness
    makes the bound at most twice the minimum center distance.
    """
    if inst.n < 2:
        raise UndefinedDeltaError("the pairwise bound needs at least two balls")
    require_disjoint(inst)
    centers, radii = inst.centers, inst.radii
    diff = centers[:, None, :] - centers[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    bound = dist + radii[:, None] + radii[None, :]
    iu = np.triu_indices(inst.n, k=1)
    return float(np.min(bound[iu]))


def opt_upper_unit(inst: BallInstance) -> float:
    """For unit disks: min(delta + 2, f(s2)), where s2 is the smallest
    second-nearest center distance (the packing-bound term needs n >= 3)."""
    if inst.n < 2:
        raise UndefinedDeltaError("the unit bound needs at least two balls")
    require_unit(inst)
    info = neighbor_info(inst)
    delta = float(np.min(info.nearest_distance))
    bound = delta + 2.0
    if inst.n >= 3:
        s2 = float(np.min(info.second_distance))
        bound = min(bound, float(f(s2)))
    return bound


def opt_two_balls(b1: Ball, b2: Ball) -> float:
    """Exact two-ball optimum: antipodal points on the center line."""
    diff = b1.center - b2.center
    return float(np.sqrt(np.sum(diff * diff))) + b1.radius + b2.radius


def grid_resolution_error(inst: BallInstance, k: int) -> float:
    """Worst-case distance from any ball point to its grid: r_max sqrt(d) / (k - 1)."""
    if k < 2:
        raise ValueError("grids need k >= 2 points per axis")
    return float(np.max(inst.radii)) * math.sqrt(inst.dimension) / (k - 1)


def _ball_grid(center: np.ndarray, radius: float, k: int) -> np.ndarray:
    """Boundary-inclusive grid over the ball's bounding box, kept to the ball."""
    if radius == 0.0:
        return center[None, :].copy()
    axes = [np.linspace(c - radius, c + radius, k) for c in center]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    diff = pts - center
    keep = np.sqrt(np.sum(diff * diff, axis=1)) <= radius + TOL * (1.0 + radius)
    return pts[keep]


def _component_best(counts: list[int], pmat) -> float:
    """Exact max-min over the candidate product of one active component.

    ``pmat(i, j)`` is the candidate distance matrix oriented rows = i,
    columns = j. Depth-first search over the balls in order, pruning with a
    coordinate-ascent incumbent and per-candidate upper bounds; the last
    level is evaluated vectorized.
    """
    m = len(counts)
    if m == 1:
        return math.inf
    if m == 2:
        return float(pmat(0, 1).max())

    # per-candidate upper bound: the best minimum this candidate can reach
    ub = [
        np.minimum.reduce([pmat(i, j).max(axis=1) for j in range(m) if j != i])
        for i in range(m)
    ]

    def selection_value(sel: list[int]) -> float:
        return min(
            float(pmat(i, j)[sel[i], sel[j]]) for i in range(m) for j in range(i + 1, m)
        )

    # incumbent: coordinate ascent from the most promising candidates
    sel = [int(np.argmax(ub[i])) for i in range(m)]
    best = selection_value(sel)
    for _ in range(20):
        improved = False
        for i in range(m):
            vec = np.minimum.reduce([pmat(i, j)[:, sel[j]] for j in range(m) if j != i])
            cand = int(np.argmax(vec))
            if cand != sel[i]:
                trial = sel.copy()
                trial[i] = cand
                val = selection_value(trial)
                if val > best:
                    sel, best, improved = trial, val, True
        if not improved:
            break

    def dfs(level: int, chosen: list[int], current: float) -> None:
        nonlocal best
        if level == m - 1:
            vec = np.full(counts[level], current)
            for t, p in enumerate(chosen):
                vec = np.minimum(vec, pmat(t, level)[p])
            cand = int(np.argmax(vec))
            if vec[cand] > best:
                best = float(vec[cand])
            return
        mask = ub[level] > best
        for t, p in enumerate(chosen):
            mask &= pmat(t, level)[p] > best
        for cand in np.nonzero(mask)[0]:
            nxt = current
            for t, p in enumerate(chosen):
                nxt = min(nxt, float(pmat(t, level)[p, cand]))
            if nxt > best:
                dfs(level + 1, chosen + [int(cand)], nxt)

    dfs(0, [], math.inf)
    return best


def brute_force_opt(inst: BallInstance, k: int) -> float:
    """Best-found minimum pairwise distance over the product of per-ball
    grids (k points per axis, boundary-inclusive). A lower bound on the
    optimum; exact as a maximum over the finite grids.

    Limited to n <= 5 balls and a nominal cost k^(d n) within BUDGET.
    """
    n, d = inst.n, inst.dimension
    if n > _MAX_BALLS:
        raise BudgetExceededError(f"the brute force handles at most {_MAX_BALLS} balls, got {n}")
    if k < 2:
        raise ValueError("grids need k >= 2 points per axis")
    if float(k) ** (d * n) > BUDGET:
        raise BudgetExceededError(f"nominal cost {k}^{d * n} exceeds the budget {BUDGET:g}")
    if n == 1:
        return math.inf

    grids = [_ball_grid(inst.centers[i], float(inst.radii[i]), k) for i in range(n)]
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            diff = grids[i][:, None, :] - grids[j][None, :, :]
            dist[(i, j)] = np.sqrt(np.sum(diff * diff, axis=-1))

    # Pairs whose minimum candidate distance already meets the global cap
    # can never be the bottleneck; dropping them splits the search into
    # independent components, and the achievable value is then
    # min(cap, worst component).
    cap = min(dist[p].max() for p in dist)
    active = {p for p in dist if dist[p].min() < cap}
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in active:
        parent[find(i)] = find(j)
    components: dict[int, list[int]] = {}
    for i in range(n):
        components.setdefault(find(i), []).append(i)

    best = float(cap)
    for members in components.values():
        if len(members) == 1:
            continue

        def pmat(a: int, b: int, members=members) -> np.ndarray:
            i, j = members[a], members[b]
            return dist[(i, j)] if i < j else dist[(j, i)].T

        counts = [grids[i].shape[0] for i in members]
        best = min(best, _component_best(counts, pmat))
    return float(best)


@dataclass(frozen=True)
class Certificate:
    """Achieved value, an upper bound on the optimum, and the implied
    lower bound on the realized approximation ratio."""

    achieved: float
    opt_upper: float
    opt_lower: Optional[float]
    ratio_lower_bound: float
    bound_provenance: tuple


def certify(sol: Solution, inst: BallInstance, opt_lower: Optional[float] = None) -> Certificate:
    """Certificate for a solution: recomputes the achieved value, applies
    every applicable optimum bound, and reports achieved / upper."""
    pts = np.asarray(sol.points, dtype=float)
    if pts.shape != inst.centers.shape:
        raise ValueError(f"solution has shape {pts.shape}, instance needs {inst.centers.shape}")
    offsets = pts - inst.centers
    dist_to_center = np.sqrt(np.sum(offsets * offsets, axis=1))
    outside = np.nonzero(dist_to_center > inst.radii + TOL)[0]
    if outside.size:
        i = int(outside[0])
        raise ValueError(f"solution point {i} lies outside its ball by {dist_to_center[i] - inst.radii[i]:.3g}")

    achieved = min_pairwise_distance(pts)
    if inst.n == 1:
        return Certificate(achieved, math.inf, opt_lower, 1.0, ("single-ball convention",))

    bounds = []
    if validate(inst, require_disjoint=True).ok:
        bounds.append((opt_upper_disjoint(inst), "disjoint pairwise bound"))
    if inst.is_unit():
        bounds.append((opt_upper_unit(inst), "unit-disk bound"))
    if inst.n == 2:
        bounds.append((opt_two_balls(inst.ball(0), inst.ball(1)), "two-ball closed form"))

    if bounds:
        opt_upper, _ = min(bounds)
        provenance = tuple(name for value, name in bounds if value <= opt_upper + TOL)
        ratio = min(1.0, max(0.0, achieved / opt_upper))
    else:
        opt_upper = math.inf
        provenance = ("none applicable",)
        ratio = 0.0

    if opt_lower is not None and opt_lower > opt_upper + 1e-6:
        raise ArithmeticError(
            f"claimed lower bound {opt_lower} exceeds the upper bound {opt_upper}; one of them is wrong"
        )
    return Certificate(achieved, opt_upper, opt_lower, ratio, provenance)
