"""Core geometric types, metrics and neighbor queries.

Everything here is shared by the solvers: balls and ball instances,
Euclidean distances, first/second nearest-neighbor queries (with an
optional tree-accelerated path that returns results identical to the
reference scan), and instance validation.

All types are immutable after construction and all operations are pure,
so they are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.spatial import cKDTree

#: Absolute geometric tolerance for containment and disjointness checks.
TOL = 1e-9

# Instance size at which neighbor queries switch from the O(n^2) scan to
# the tree-accelerated path (the scan needs an n x n distance matrix).
_SCAN_LIMIT = 1024


class DimensionMismatchError(ValueError):
    """Operands live in spaces of different dimension."""


class UndefinedDeltaError(ValueError):
    """The minimum center distance needs at least two balls."""


class DegenerateDeltaError(ValueError):
    """An operation requires a positive minimum center distance."""


class NonUnitRadiusError(ValueError):
    """An operation requires all radii equal to one."""


class NotDisjointError(ValueError):
    """An operation requires pairwise interior-disjoint balls."""


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"a point must be a non-empty 1-D coordinate sequence, got shape {a.shape}")
    return a


def distance(p, q) -> float:
    """Euclidean distance between two points of equal dimension."""
    a = _as_point(p)
    b = _as_point(q)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"points have dimensions {a.size} and {b.size}")
    return float(np.sqrt(np.sum((a - b) ** 2)))


@dataclass(frozen=True)
class Ball:
    """A closed ball: center in R^d and a non-negative radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = _as_point(self.center).copy()
        center.flags.writeable = False
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        if not np.all(np.isfinite(center)):
            raise ValueError("ball center must be finite")
        if not np.isfinite(self.radius) or self.radius < 0:
            raise ValueError(f"ball radius must be finite and non-negative, got {self.radius}")

    @property
    def dimension(self) -> int:
        return self.center.size

    def contains(self, point, tol: float = TOL) -> bool:
        return distance(self.center, point) <= self.radius + tol


class BallInstance:
    """A dispersion instance: n balls sharing one ambient dimension.

    Centers and radii are stored as read-only arrays so instances can be
    shared freely between solvers and threads.
    """

    def __init__(self, centers, radii):
        centers = np.array(centers, dtype=float, copy=True)
        if centers.ndim == 1:
            centers = centers[:, None]
        if centers.ndim != 2 or centers.shape[0] < 1 or centers.shape[1] < 1:
            raise ValueError(f"centers must be an (n, d) array with n, d >= 1, got shape {centers.shape}")
        radii = np.array(radii, dtype=float, copy=True).reshape(-1)
        if radii.shape[0] != centers.shape[0]:
            raise ValueError(f"{centers.shape[0]} centers but {radii.shape[0]} radii")
        if not np.all(np.isfinite(centers)) or not np.all(np.isfinite(radii)):
            raise ValueError("centers and radii must be finite")
        if np.any(radii < 0):
            raise ValueError("radii must be non-negative")
        centers.flags.writeable = False
        radii.flags.writeable = False
        self._centers = centers
        self._radii = radii

    @classmethod
    def from_balls(cls, balls: Iterable[Ball]) -> "BallInstance":
        balls = list(balls)
        if not balls:
            raise ValueError("an instance needs at least one ball")
        d = balls[0].dimension
        for b in balls:
            if b.dimension != d:
                raise DimensionMismatchError(f"mixed ball dimensions {d} and {b.dimension}")
        return cls([b.center for b in balls], [b.radius for b in balls])

    @property
    def centers(self) -> np.ndarray:
        return self._centers

    @property
    def radii(self) -> np.ndarray:
        return self._radii

    @property
    def dimension(self) -> int:
        return self._centers.shape[1]

    @property
    def n(self) -> int:
        return self._centers.shape[0]

    def __len__(self) -> int:
        return self.n

    def ball(self, i: int) -> Ball:
        return Ball(self._centers[i], self._radii[i])

    @property
    def balls(self) -> tuple[Ball, ...]:
        return tuple(self.ball(i) for i in range(self.n))

    def is_unit(self, tol: float = TOL) -> bool:
        return bool(np.all(np.abs(self._radii - 1.0) <= tol))

    def __repr__(self) -> str:
        return f"BallInstance(n={self.n}, d={self.dimension})"


@dataclass(frozen=True)
class Solution:
    """One selected point per ball plus the recomputed minimum pairwise distance.

    ``min_distance`` is always recomputed from the points (never a solver's
    internal objective); it is ``+inf`` for single-ball instances.
    """

    points: np.ndarray
    min_distance: float
    algorithm: str

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "min_distance", float(self.min_distance))


def solution_from_points(points, algorithm: str) -> Solution:
    """Build a Solution, recomputing the minimum pairwise distance exactly."""
    pts = np.asarray(points, dtype=float)
    return Solution(points=pts, min_distance=min_pairwise_distance(pts), algorithm=algorithm)


@dataclass(frozen=True)
class NeighborInfo:
    """First and second nearest neighbors of each ball, by center distance.

    Missing neighbors (n = 1 for the first, n <= 2 for the second) are
    encoded as index -1 and distance +inf. Ties are broken by lowest index.
    """

    nearest_index: np.ndarray
    nearest_distance: np.ndarray
    second_index: np.ndarray
    second_distance: np.ndarray

    def __post_init__(self):
        for name in ("nearest_index", "nearest_distance", "second_index", "second_distance"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _pairwise_matrix(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def _two_nearest_scan(points: np.ndarray, need_second: bool):
    n = points.shape[0]
    dist = _pairwise_matrix(points)
    np.fill_diagonal(dist, np.inf)
    nearest = np.argmin(dist, axis=1)
    nearest_d = dist[np.arange(n), nearest]
    if not need_second:
        return nearest, nearest_d, None, None
    dist[np.arange(n), nearest] = np.inf
    second = np.argmin(dist, axis=1)
    second_d = dist[np.arange(n), second]
    second = np.where(np.isinf(second_d), -1, second)
    return nearest, nearest_d, second, second_d


def _rescan_row(points: np.ndarray, i: int, need_second: bool):
    diff = points - points[i]
    row = np.sqrt(np.sum(diff * diff, axis=-1))
    row[i] = np.inf
    nearest = int(np.argmin(row))
    nearest_d = row[nearest]
    if not need_second:
        return nearest, nearest_d, -1, np.inf
    row[nearest] = np.inf
    second = int(np.argmin(row))
    second_d = row[second]
    if np.isinf(second_d):
        second = -1
    return nearest, nearest_d, second, second_d


def _two_nearest_indexed(points: np.ndarray, need_second: bool):
    """Tree-accelerated nearest pair query, result-identical to the scan.

    The tree only proposes candidate indices; distances are recomputed with
    the same arithmetic as the scan and ties are re-broken by lowest index.
    Rows where an unreturned point could still matter (distance ties within
    the candidate set) are redone by a full row scan, so the output matches
    the reference scan bit for bit.
    """
    n = points.shape[0]
    k = min(n, 4)
    tree = cKDTree(points)
    _, idx = tree.query(points, k=k)
    idx = np.asarray(idx, dtype=np.int64).reshape(n, k)

    cand = points[idx]
    diff = cand - points[:, None, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))
    rows = np.broadcast_to(np.arange(n)[:, None], (n, k))
    dist = np.where(idx == rows, np.inf, dist)

    order = np.lexsort((idx.ravel(), dist.ravel(), rows.ravel())).reshape(n, k)
    first_flat = order[:, 0]
    nearest = idx.ravel()[first_flat]
    nearest_d = dist.ravel()[first_flat]
    if need_second:
        second_flat = order[:, 1]
        second = idx.ravel()[second_flat]
        second_d = dist.ravel()[second_flat]
    else:
        second = np.full(n, -1, dtype=np.int64)
        second_d = np.full(n, np.inf)

    if k < n:
        # A dropped point can only beat the chosen ones if it ties (up to a
        # few ulps) with the worst returned candidate; redo those rows.
        worst = np.where(np.isinf(dist), -np.inf, dist).max(axis=1)
        chosen_d = second_d if need_second else nearest_d
        risky = chosen_d >= worst * (1.0 - 1e-12)
        for i in np.nonzero(risky)[0]:
            ni, nd, si, sd = _rescan_row(points, int(i), need_second)
            nearest[i] = ni
            nearest_d[i] = nd
            second[i] = si
            second_d[i] = sd

    second = np.where(np.isinf(second_d), -1, second)
    return nearest, nearest_d, second, second_d


def _two_nearest(points: np.ndarray, need_second: bool, method: str = "auto"):
    n = points.shape[0]
    if n == 1:
        none_i = np.full(1, -1, dtype=np.int64)
        none_d = np.full(1, np.inf)
        return none_i, none_d, none_i.copy(), none_d.copy()
    if method == "auto":
        method = "scan" if n <= _SCAN_LIMIT else "indexed"
    if method == "scan":
        nearest, nearest_d, second, second_d = _two_nearest_scan(points, need_second)
    elif method == "indexed":
        nearest, nearest_d, second, second_d = _two_nearest_indexed(points, need_second)
    else:
        raise ValueError(f"unknown neighbor method {method!r}")
    if second is None:
        second = np.full(n, -1, dtype=np.int64)
        second_d = np.full(n, np.inf)
    return np.asarray(nearest, dtype=np.int64), nearest_d, np.asarray(second, dtype=np.int64), second_d


def neighbor_info(inst: BallInstance, method: str = "auto") -> NeighborInfo:
    """Nearest and second-nearest neighbor of every ball, by center distance.

    ``method`` selects the reference O(n^2) scan, the tree-accelerated path
    (``"indexed"``), or a size-based choice (``"auto"``). All methods return
    identical results.
    """
    nearest, nearest_d, second, second_d = _two_nearest(inst.centers, need_second=True, method=method)
    return NeighborInfo(nearest, nearest_d, second, second_d)


def min_center_distance(inst: BallInstance, method: str = "auto") -> float:
    """Minimum pairwise center distance of the instance (needs n >= 2)."""
    if inst.n < 2:
        raise UndefinedDeltaError("minimum center distance needs at least two balls")
    _, nearest_d, _, _ = _two_nearest(inst.centers, need_second=False, method=method)
    return float(np.min(nearest_d))


def min_pairwise_distance(points, method: str = "auto") -> float:
    """Minimum pairwise distance of a point set; +inf for fewer than 2 points."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        return float("inf")
    _, nearest_d, _, _ = _two_nearest(pts, need_second=False, method=method)
    return float(np.min(nearest_d))


def scalar_projection(direction, segment) -> float:
    """Signed length of a segment's orthogonal projection onto a unit direction."""
    d = _as_point(direction)
    p, q = segment
    p = _as_point(p)
    q = _as_point(q)
    if not (d.shape == p.shape == q.shape):
        raise DimensionMismatchError("direction and segment endpoints must share a dimension")
    norm = float(np.sqrt(np.sum(d * d)))
    if abs(norm - 1.0) > TOL:
        raise ValueError(f"direction must be a unit vector (|direction| = {norm})")
    return float(np.dot(d, q - p))


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(v.detail for v in self.violations)


def _overlap_pairs(inst: BallInstance) -> list[tuple[int, int, float, float]]:
    """Pairs (i, j, distance, required) violating interior-disjointness."""
    n, centers, radii = inst.n, inst.centers, inst.radii
    out = []
    if n <= 2048:
        dist = _pairwise_matrix(centers)
        required = radii[:, None] + radii[None, :]
        ii, jj = np.nonzero(dist < required - TOL)
        for i, j in zip(ii, jj):
            if i < j:
                out.append((int(i), int(j), float(dist[i, j]), float(required[i, j])))
    else:
        tree = cKDTree(centers)
        cap = 2.0 * float(np.max(radii))
        for i, j in tree.query_pairs(cap, output_type="ndarray"):
            d = distance(centers[i], centers[j])
            req = float(radii[i] + radii[j])
            if d < req - TOL:
                a, b = (int(i), int(j)) if i < j else (int(j), int(i))
                out.append((a, b, d, req))
        out.sort()
    return out


def validate(inst: BallInstance, require_disjoint: bool = False, require_unit: bool = False) -> ValidationReport:
    """Check the requested instance invariants and report every violation."""
    violations: list[Violation] = []
    if require_unit:
        bad = np.nonzero(np.abs(inst.radii - 1.0) > TOL)[0]
        for i in bad:
            violations.append(
                Violation(
                    kind="non_unit_radius",
                    indices=(int(i),),
                    detail=f"ball {int(i)} has radius {inst.radii[i]!r}, expected 1",
                )
            )
    if require_disjoint:
        for i, j, d, req in _overlap_pairs(inst):
            violations.append(
                Violation(
                    kind="overlap",
                    indices=(i, j),
                    detail=f"balls {i} and {j} overlap: center distance {d:.12g} < r_i + r_j = {req:.12g}",
                )
            )
    return ValidationReport(tuple(violations))


def require_unit(inst: BallInstance) -> None:
    report = validate(inst, require_unit=True)
    if not report.ok:
        raise NonUnitRadiusError(str(report))


def require_disjoint(inst: BallInstance) -> None:
    report = validate(inst, require_disjoint=True)
    if not report.ok:
        raise NotDisjointError(f"balls must be pairwise interior-disjoint: {report}")
