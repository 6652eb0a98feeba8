"""Portfolio solver for unit disks that may overlap.

Shrinking every unit disk to the concentric disk of radius mu = delta/2
makes the family pairwise disjoint while costing any point set at most
2 (1 - mu) of its minimum distance. The portfolio runs center selection,
the matching-perturbation solver on the original disks, and the
projection LP on the shrunk disks, then returns the best candidate by
recomputed minimum distance.

The certified floor of 0.4674 for this composition assumes a placement
component this library does not ship; the implemented portfolio keeps
every candidate's own guarantee and records which one applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    BallInstance,
    DegenerateDeltaError,
    Solution,
    UndefinedDeltaError,
    min_center_distance,
    require_unit,
)
from .perturbation import solve_a1, solve_centers
from .projection_lp import UnsupportedDimensionError, solve_a2

_ORDER = ("centers", "a1", "a2")


@dataclass(frozen=True)
class HybridOutcome:
    """Best candidate solution plus the full per-candidate scoreboard."""

    solution: Solution
    winner: str
    candidates: dict
    mu: float
    skipped: dict = field(default_factory=dict)
    note: str = ""


def shrink_instance(inst: BallInstance, mu: float) -> BallInstance:
    """Concentric disks of radius mu (unit input required, mu in [0, 1]).

    For mu <= delta/2 the result is pairwise interior-disjoint.
    """
    require_unit(inst)
    mu = float(mu)
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"shrink radius must lie in [0, 1], got {mu}")
    return BallInstance(inst.centers, np.full(inst.n, mu))


def solve_hybrid(inst: BallInstance, epsilon: float = 1e-4) -> HybridOutcome:
    """Run the portfolio and return the best candidate.

    Candidates that cannot run (coincident centers, unsupported dimension)
    are recorded as skipped rather than failing the solve. Ties in the
    achieved minimum distance go to the earliest of centers, a1, a2.
    """
    require_unit(inst)
    solutions: dict[str, Solution] = {}
    skipped: dict[str, str] = {}
    note = ""

    solutions["centers"] = solve_centers(inst)

    if inst.n == 1:
        mu = 1.0
        skipped["a1"] = "single ball: centers already optimal"
        skipped["a2"] = "dispersion needs at least two balls"
    else:
        delta = min_center_distance(inst)
        mu = min(delta / 2.0, 1.0)
        try:
            solutions["a1"] = solve_a1(inst).solution
        except DegenerateDeltaError as exc:
            skipped["a1"] = str(exc)
        if mu <= 0.0:
            skipped["a2"] = "coincident centers leave no disjoint shrink radius"
        else:
            try:
                solutions["a2"] = solve_a2(shrink_instance(inst, mu), epsilon=epsilon).solution
            except (UnsupportedDimensionError, UndefinedDeltaError) as exc:
                skipped["a2"] = str(exc)
        if delta <= 0.0:
            note = "no guarantee: coincident centers (minimum center distance 0)"

    winner = max(
        solutions,
        key=lambda name: (solutions[name].min_distance, -_ORDER.index(name)),
    )
    best = solutions[winner]
    candidates = {name: sol.min_distance for name, sol in solutions.items()}
    solution = Solution(
        points=best.points,
        min_distance=best.min_distance,
        algorithm=f"hybrid:{winner}",
    )
    return HybridOutcome(
        solution=solution,
        winner=winner,
        candidates=candidates,
        mu=mu,
        skipped=skipped,
        note=note,
    )
