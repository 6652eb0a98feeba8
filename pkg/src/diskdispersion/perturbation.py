"""Center selection and the matching-perturbation solver for unit balls.

``solve_centers`` returns the ball centers; its minimum distance equals the
minimum center distance of the instance. ``solve_a1`` improves on that for
unit balls with positive minimum center distance: it computes the balance
parameter sigma, falls back to centers when some ball has two sigma-close
neighbors (a packing bound then caps the optimum), and otherwise pushes each
mutually-nearest pair of points apart by (sigma - delta)/4 along the center
line. Every outcome carries a case tag and the guaranteed lower bound on the
achieved minimum distance that its branch promises.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import (
    BallInstance,
    DegenerateDeltaError,
    Solution,
    min_pairwise_distance,
    neighbor_info,
    require_unit,
    solution_from_points,
)
from .ratios import solve_sigma

CENTERS_CASE = "CENTERS_CASE"
MATCHING_CASE = "MATCHING_CASE"


@dataclass(frozen=True)
class A1Outcome:
    """Solution plus the branch taken and its promised lower bound.

    CENTERS_CASE promises min_distance = delta; MATCHING_CASE promises
    min_distance >= (sigma + delta) / 2. ``fallback_reason`` records the
    (numerically conceivable, analytically impossible) event that the
    sigma-close pairs failed to form a matching and centers were returned.
    """

    solution: Solution
    case_tag: str
    sigma: Optional[float]
    guaranteed_value: float
    fallback_reason: Optional[str] = None


def solve_centers(inst: BallInstance) -> Solution:
    """Select every ball's center."""
    return solution_from_points(inst.centers, "centers")


def solve_a1(inst: BallInstance, method: str = "auto") -> A1Outcome:
    """Run the matching-perturbation solver on unit balls.

    ``method`` is forwarded to the neighbor queries ("scan", "indexed" or
    "auto"). Requires unit radii and, for n >= 2, a positive minimum center
    distance.
    """
    require_unit(inst)
    n = inst.n
    if n == 1:
        sol = solution_from_points(inst.centers, "a1")
        return A1Outcome(sol, CENTERS_CASE, None, float("inf"))

    info = neighbor_info(inst, method=method)
    delta = float(np.min(info.nearest_distance))
    if delta <= 0.0:
        raise DegenerateDeltaError("the perturbation solver needs distinct centers (delta > 0)")
    sigma = float(solve_sigma(delta))

    # Some ball with two sigma-close neighbors: centers are already within
    # the packing bound of the optimum. delta is the recomputed minimum
    # pairwise distance of the centers, so reuse it.
    if bool(np.any(info.second_distance <= sigma)):
        sol = Solution(points=inst.centers, min_distance=delta, algorithm="a1")
        return A1Outcome(sol, CENTERS_CASE, sigma, delta)

    paired = info.nearest_distance <= sigma
    partner = info.nearest_index
    idx = np.nonzero(paired)[0]
    mutual = paired[partner[idx]] & (partner[partner[idx]] == idx)
    if not bool(np.all(mutual)):
        sol = Solution(points=inst.centers, min_distance=delta, algorithm="a1")
        return A1Outcome(
            sol,
            CENTERS_CASE,
            sigma,
            delta,
            fallback_reason="sigma-close pairs did not form a matching; returned centers",
        )

    move = (sigma - delta) / 4.0
    points = inst.centers.copy()
    if idx.size:
        away = inst.centers[idx] - inst.centers[partner[idx]]
        away /= info.nearest_distance[idx][:, None]
        points[idx] += move * away
    md = min_pairwise_distance(points, method=method)
    sol = Solution(points=points, min_distance=md, algorithm="a1")
    return A1Outcome(sol, MATCHING_CASE, sigma, (sigma + delta) / 2.0)
