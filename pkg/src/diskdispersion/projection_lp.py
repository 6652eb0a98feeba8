"""Projection-LP dispersion for disjoint balls in 2 or 3 dimensions.

Each point's feasible region is shrunk from its ball to a convex container
polytope sandwiched between the concentric balls of radius r/2 and 3r/4
(an axis-aligned square of side r in the plane, a regular icosahedron with
inradius r/2 in space). A linear program then maximizes the smallest
projection of any inter-point segment onto the corresponding center line;
since projections never exceed distances and, for half-shrunk disjoint
balls, never fall below distance/sqrt2, the LP value certifies the solver's
(1 - eps)/sqrt2 guarantee.

Constraints are only written for pairs of balls within 7 delta of each
other (delta = minimum center distance): the LP value never exceeds
7 delta / 4, while any pair beyond the cutoff keeps its points at distance
at least a quarter of its center distance, which is larger.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .geometry import (
    BallInstance,
    Ball,
    Solution,
    TOL,
    UndefinedDeltaError,
    min_center_distance,
    min_pairwise_distance,
    require_disjoint,
)
from .lp import FEASIBILITY_TOL, LPModel, OPTIMAL, solve_lp

LAMBDA_IN = 0.5
LAMBDA_OUT = 0.75

PRUNE_FACTOR = 7.0


class UnsupportedDimensionError(ValueError):
    """Container polytopes are only constructed for d in {2, 3}."""


@dataclass(frozen=True)
class ContainerPolytope:
    """Convex feasible region for one ball: {q : normals @ (q - center) <= offsets}.

    Normals are unit outward; ``inradius``/``circumradius`` are certified
    radii of the largest centered inscribed ball and the smallest centered
    enclosing ball.
    """

    center: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    inradius: float
    circumradius: float

    def __post_init__(self):
        for name in ("center", "normals", "offsets"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_facets(self) -> int:
        return self.normals.shape[0]

    def contains(self, point, tol: float = FEASIBILITY_TOL) -> bool:
        gap = self.normals @ (np.asarray(point, dtype=float) - self.center) - self.offsets
        return bool(np.max(gap) <= tol)


def polytope_metrics(normals, offsets) -> tuple[float, float]:
    """Certified (inradius, circumradius) of {x : normals @ x <= offsets}
    around the origin, for unit normals and positive offsets.

    The inradius of the centered inscribed ball is the smallest facet
    offset; the circumradius is the largest vertex norm, with vertices
    enumerated by halfspace intersection.
    """
    from scipy.spatial import HalfspaceIntersection

    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    norms = np.sqrt(np.sum(normals * normals, axis=1))
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("polytope normals must be unit vectors")
    if np.any(offsets <= 0):
        raise ValueError("polytope must contain a neighborhood of the origin")
    halfspaces = np.hstack([normals, -offsets[:, None]])
    hs = HalfspaceIntersection(halfspaces, np.zeros(normals.shape[1]))
    circumradius = float(np.max(np.sqrt(np.sum(hs.intersections ** 2, axis=1))))
    return float(np.min(offsets)), circumradius


def check_containment(normals, offsets, radius: float) -> list[str]:
    """Validate the half-to-three-quarter sandwich for a ball of the given
    radius; returns the violations (empty means accepted)."""
    inradius, circumradius = polytope_metrics(normals, offsets)
    problems = []
    if inradius < LAMBDA_IN * radius - TOL:
        problems.append(
            f"inradius {inradius:.6g} is below {LAMBDA_IN} * r = {LAMBDA_IN * radius:.6g}; "
            "the half-radius ball does not fit inside"
        )
    if circumradius > LAMBDA_OUT * radius + TOL:
        problems.append(
            f"circumradius {circumradius:.6g} exceeds {LAMBDA_OUT} * r = {LAMBDA_OUT * radius:.6g}; "
            "the polytope leaves the three-quarter-radius ball"
        )
    return problems


@lru_cache(maxsize=None)
def _canonical_shape(d: int):
    """Unit-ball container shape: (normals, offsets, inradius, circumradius).

    d = 2: axis-aligned square of side 1 (inradius 1/2, circumradius
    sqrt2/2). d = 3: regular icosahedron with inradius 1/2; its 20 facet
    normals point at the vertices of the dual dodecahedron.
    """
    if d == 2:
        normals = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    elif d == 3:
        phi = (1.0 + np.sqrt(5.0)) / 2.0
        dirs = []
        for sx in (1.0, -1.0):
            for sy in (1.0, -1.0):
                for sz in (1.0, -1.0):
                    dirs.append((sx, sy, sz))
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                dirs.append((0.0, s1 / phi, s2 * phi))
                dirs.append((s1 / phi, s2 * phi, 0.0))
                dirs.append((s2 * phi, 0.0, s1 / phi))
        normals = np.asarray(dirs, dtype=float)
        normals /= np.sqrt(np.sum(normals * normals, axis=1))[:, None]
    else:
        raise UnsupportedDimensionError(f"container polytopes are implemented for d in {{2, 3}}, not d = {d}")
    offsets = np.full(normals.shape[0], LAMBDA_IN)
    inradius, circumradius = polytope_metrics(normals, offsets)
    problems = check_containment(normals, offsets, 1.0)
    if problems:
        raise AssertionError("canonical container shape failed its own validation: " + "; ".join(problems))
    return normals, offsets, inradius, circumradius


def build_container_polytope(ball: Ball, d: int) -> ContainerPolytope:
    """Container polytope for one ball: the canonical shape scaled by the
    ball's radius and anchored at its center."""
    if ball.dimension != d:
        raise ValueError(f"ball lives in dimension {ball.dimension}, not {d}")
    normals, offsets, inradius, circumradius = _canonical_shape(int(d))
    r = ball.radius
    return ContainerPolytope(
        center=ball.center,
        normals=normals,
        offsets=offsets * r,
        inradius=inradius * r,
        circumradius=circumradius * r,
    )


def near_pairs(inst: BallInstance) -> np.ndarray:
    """Index pairs (i < j) within PRUNE_FACTOR * delta of each other,
    inclusive. Requires n >= 2."""
    if inst.n < 2:
        raise UndefinedDeltaError("pair pruning needs at least two balls")
    centers = inst.centers
    n = inst.n
    delta = min_center_distance(inst)
    cutoff = PRUNE_FACTOR * delta
    if n <= 2048:
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        ii, jj = np.nonzero(dist <= cutoff)
        mask = ii < jj
        pairs = np.stack([ii[mask], jj[mask]], axis=1)
    else:
        from scipy.spatial import cKDTree

        tree = cKDTree(centers)
        pairs = tree.query_pairs(cutoff, output_type="ndarray")
        pairs = np.sort(pairs, axis=1)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order]


def build_lp3(inst: BallInstance, polytopes) -> LPModel:
    """The dispersion LP: one containment inequality per polytope facet and,
    for every near pair, the projection of q_j - q_i onto the i -> j center
    direction at least z. Maximizes z."""
    polytopes = list(polytopes)
    if len(polytopes) != inst.n:
        raise ValueError(f"{inst.n} balls but {len(polytopes)} polytopes")
    require_disjoint(inst)
    pairs = near_pairs(inst)
    return _assemble_lp3(inst, polytopes, pairs)


def _assemble_lp3(inst: BallInstance, polytopes, pairs) -> LPModel:
    n, d = inst.n, inst.dimension
    nv = n * d + 1
    z_col = n * d
    model = LPModel.maximize_variable(nv, z_col)
    for i, poly in enumerate(polytopes):
        base = i * d
        rhs = poly.normals @ poly.center + poly.offsets
        for k in range(poly.n_facets):
            row = np.zeros(nv)
            row[base : base + d] = poly.normals[k]
            model.add_constraint(row, "<=", float(rhs[k]))
        # the container fits in this box, so the bounds cut nothing; they
        # let the solver keep every variable shifted-nonnegative
        for k in range(d):
            c = float(poly.center[k])
            model.set_bound(base + k, c - poly.circumradius, c + poly.circumradius)
    centers = inst.centers
    for i, j in pairs:
        direction = centers[j] - centers[i]
        direction = direction / np.sqrt(np.sum(direction * direction))
        row = np.zeros(nv)
        row[i * d : i * d + d] = -direction
        row[j * d : j * d + d] = direction
        row[z_col] = -1.0
        model.add_constraint(row, ">=", 0.0)
    model.set_bound(z_col, 0.0, None)
    return model


@dataclass(frozen=True)
class A2Outcome:
    """Solution, LP objective, number of unpruned pairs, and the epsilon the
    reported guarantee is quoted at."""

    solution: Solution
    z_star: float
    included_pairs: int
    epsilon: float


def _centered_points(inst, polytopes, pairs, z_bar, backend) -> Optional[np.ndarray]:
    """Among LP-optimal point sets, pick the one minimizing total coordinate
    displacement from the centers (ties resolved by the deterministic
    solver). Returns None if the centering solve fails."""
    n, d = inst.n, inst.dimension
    nq = n * d
    nv = 2 * nq  # coordinates, then one displacement bound per coordinate
    obj = np.zeros(nv)
    obj[nq:] = -1.0
    model = LPModel(n_vars=nv, objective=obj)
    for i, poly in enumerate(polytopes):
        base = i * d
        rhs = poly.normals @ poly.center + poly.offsets
        for k in range(poly.n_facets):
            row = np.zeros(nv)
            row[base : base + d] = poly.normals[k]
            model.add_constraint(row, "<=", float(rhs[k]))
        for k in range(d):
            c = float(poly.center[k])
            model.set_bound(base + k, c - poly.circumradius, c + poly.circumradius)
    centers = inst.centers
    for i, j in pairs:
        direction = centers[j] - centers[i]
        direction = direction / np.sqrt(np.sum(direction * direction))
        row = np.zeros(nv)
        row[i * d : i * d + d] = -direction
        row[j * d : j * d + d] = direction
        model.add_constraint(row, ">=", float(z_bar))
    flat_centers = centers.reshape(-1)
    for k in range(nq):
        row = np.zeros(nv)
        row[k] = 1.0
        row[nq + k] = -1.0
        model.add_constraint(row, "<=", float(flat_centers[k]))
        row2 = np.zeros(nv)
        row2[k] = 1.0
        row2[nq + k] = 1.0
        model.add_constraint(row2, ">=", float(flat_centers[k]))
        model.set_bound(nq + k, 0.0, None)
    sol = solve_lp(model, backend=backend)
    if sol.status != OPTIMAL:
        return None
    return sol.x[:nq].reshape(n, d)


def solve_a2(
    inst: BallInstance,
    epsilon: float = 1e-4,
    lp_backend: str = "auto",
    center_solution: bool = True,
) -> A2Outcome:
    """Solve dispersion for disjoint balls (d in {2, 3}, n >= 2) via the
    projection LP.

    ``epsilon`` is the headroom the (1 - eps)/sqrt2 guarantee is quoted at;
    the LP backends resolve the objective far beyond it. With
    ``center_solution`` (default) a second LP picks, among optimal point
    sets, the one closest to the centers, making the returned points
    deterministic and canonical.
    """
    if epsilon <= 0 or epsilon >= 1:
        raise ValueError("epsilon must lie in (0, 1)")
    d = inst.dimension
    if d not in (2, 3):
        raise UnsupportedDimensionError(f"the projection LP is implemented for d in {{2, 3}}, not d = {d}")
    if inst.n < 2:
        raise UndefinedDeltaError("dispersion needs at least two balls")
    require_disjoint(inst)
    polytopes = [build_container_polytope(inst.ball(i), d) for i in range(inst.n)]
    pairs = near_pairs(inst)
    model = _assemble_lp3(inst, polytopes, pairs)
    sol = solve_lp(model, backend=lp_backend)
    if sol.status != OPTIMAL:
        raise RuntimeError(f"the projection LP is never {sol.status} on a valid instance")
    z_star = float(sol.objective)
    points = sol.x[: inst.n * d].reshape(inst.n, d)
    if center_solution:
        centered = _centered_points(inst, polytopes, pairs, z_star - 1e-9, lp_backend)
        if centered is not None:
            points = centered
    solution = Solution(points=points, min_distance=min_pairwise_distance(points), algorithm="a2")
    return A2Outcome(solution=solution, z_star=z_star, included_pairs=int(len(pairs)), epsilon=float(epsilon))
