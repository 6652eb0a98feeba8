"""Dispersion in disks and balls: select one point per ball so that the
minimum pairwise distance among the selected points is maximized.

Solvers: center selection, a matching-perturbation solver for unit balls,
an exact LP for intervals on a line or closed curve, a projection-LP
solver for disjoint balls in 2-D/3-D, and a portfolio for overlapping unit
disks. A certification layer provides per-instance optimum bounds, a grid
brute-force oracle, and the solver's ratio constants with residuals.
"""

from .geometry import (
    Ball,
    BallInstance,
    NeighborInfo,
    Solution,
    distance,
    min_center_distance,
    min_pairwise_distance,
    neighbor_info,
    scalar_projection,
    solution_from_points,
    validate,
)
from .hybrid import HybridOutcome, shrink_instance, solve_hybrid
from .intervals import IntervalInstance, solve_cycle, solve_line
from .lp import LPModel, LPSolution, solve_lp
from .oracle import Certificate, brute_force_opt, certify, opt_two_balls, opt_upper_disjoint, opt_upper_unit
from .perturbation import A1Outcome, solve_a1, solve_centers
from .projection_lp import A2Outcome, ContainerPolytope, build_container_polytope, build_lp3, solve_a2
from .ratios import CrossoverResult, RatioCurve, a1, a2, c, c1, c2, crossover, f, hybrid_floor, mu0, solve_sigma, y1

__version__ = "0.1.0"

__all__ = [
    "A1Outcome",
    "A2Outcome",
    "Ball",
    "BallInstance",
    "Certificate",
    "ContainerPolytope",
    "CrossoverResult",
    "HybridOutcome",
    "IntervalInstance",
    "LPModel",
    "LPSolution",
    "NeighborInfo",
    "RatioCurve",
    "Solution",
    "a1",
    "a2",
    "brute_force_opt",
    "build_container_polytope",
    "build_lp3",
    "c",
    "c1",
    "c2",
    "certify",
    "crossover",
    "distance",
    "f",
    "hybrid_floor",
    "min_center_distance",
    "min_pairwise_distance",
    "mu0",
    "neighbor_info",
    "opt_two_balls",
    "opt_upper_disjoint",
    "opt_upper_unit",
    "scalar_projection",
    "shrink_instance",
    "solution_from_points",
    "solve_a1",
    "solve_a2",
    "solve_centers",
    "solve_cycle",
    "solve_hybrid",
    "solve_line",
    "solve_lp",
    "solve_sigma",
    "validate",
    "y1",
]
