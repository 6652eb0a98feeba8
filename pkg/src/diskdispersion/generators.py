"""Seeded instance generators.

All randomness flows through numpy's PCG64 generator with an explicit
64-bit seed, so a (kind, n, seed, min_gap, dimension) tuple always yields
the same instance, byte for byte, on any platform.
"""

from __future__ import annotations

import numpy as np

from .geometry import BallInstance

KINDS = ("disjoint-unit", "disjoint-arbitrary", "unit-overlap")

_MAX_ATTEMPTS_PER_BALL = 2000


class GenerationError(RuntimeError):
    """Rejection sampling ran out of attempts for the requested density."""


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


class _CellHash:
    """Uniform-grid hash for separation checks during rejection sampling."""

    def __init__(self, cell: float, dimension: int):
        self.cell = float(cell)
        self.d = dimension
        self.table: dict[tuple, list[int]] = {}

    def _key(self, p: np.ndarray) -> tuple:
        return tuple((p // self.cell).astype(np.int64))

    def neighbors(self, p: np.ndarray):
        key = self._key(p)
        for offset in np.ndindex(*(3,) * self.d):
            cell = tuple(k + o - 1 for k, o in zip(key, offset))
            yield from self.table.get(cell, ())

    def insert(self, p: np.ndarray, index: int) -> None:
        self.table.setdefault(self._key(p), []).append(index)


def _sample_separated(rng, n, dimension, side, radii, min_gap) -> np.ndarray:
    """Rejection-sample centers with pairwise distance >= r_i + r_j + min_gap."""
    max_sep = 2.0 * float(np.max(radii)) + min_gap
    grid = _CellHash(max_sep, dimension)
    centers = np.empty((n, dimension))
    for i in range(n):
        for _ in range(_MAX_ATTEMPTS_PER_BALL):
            p = rng.uniform(0.0, side, dimension)
            ok = True
            for j in grid.neighbors(p):
                need = radii[i] + radii[j] + min_gap
                if float(np.sqrt(np.sum((p - centers[j]) ** 2))) < need:
                    ok = False
                    break
            if ok:
                centers[i] = p
                grid.insert(p, i)
                break
        else:
            raise GenerationError(
                f"could not place ball {i} of {n} after {_MAX_ATTEMPTS_PER_BALL} attempts; "
                "the requested density is too high"
            )
    return centers


def generate_instance(
    kind: str,
    n: int,
    seed: int,
    min_gap: float = 0.1,
    dimension: int = 2,
) -> BallInstance:
    """Deterministic seeded instance of the requested class.

    disjoint-unit: unit balls with center separation >= 2 + min_gap.
    disjoint-arbitrary: radii in [0.2, 2], separation >= r_i + r_j + min_gap.
    unit-overlap: unit balls packed densely enough that some pair is closer
    than 2 (one pair is forced close when chance does not oblige).
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if min_gap < 0:
        raise ValueError("min_gap must be non-negative")
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    rng = _rng(seed)

    if kind == "disjoint-unit":
        radii = np.ones(n)
        side = (2.0 + min_gap) * 2.0 * n ** (1.0 / dimension) + 2.0
        centers = _sample_separated(rng, n, dimension, side, radii, min_gap)
        return BallInstance(centers, radii)

    if kind == "disjoint-arbitrary":
        radii = rng.uniform(0.2, 2.0, n)
        side = (2.0 * float(np.mean(radii)) + min_gap) * 2.0 * n ** (1.0 / dimension) + 4.0
        centers = _sample_separated(rng, n, dimension, side, radii, min_gap)
        return BallInstance(centers, radii)

    if kind == "unit-overlap":
        radii = np.ones(n)
        side = max(2.0, 1.5 * n ** (1.0 / dimension))
        centers = rng.uniform(0.0, side, (n, dimension))
        if n >= 2:
            diff = centers[:, None, :] - centers[None, :, :]
            dist = np.sqrt(np.sum(diff * diff, axis=-1))
            np.fill_diagonal(dist, np.inf)
            # coincident centers would make every solver degenerate
            while np.min(dist) <= 1e-9:
                i = int(np.argmin(np.min(dist, axis=1)))
                centers[i] = rng.uniform(0.0, side, dimension)
                diff = centers[:, None, :] - centers[None, :, :]
                dist = np.sqrt(np.sum(diff * diff, axis=-1))
                np.fill_diagonal(dist, np.inf)
            if np.min(dist) >= 2.0:
                direction = rng.normal(size=dimension)
                direction /= np.sqrt(np.sum(direction**2))
                centers[1] = centers[0] + rng.uniform(0.8, 1.8) * direction
        return BallInstance(centers, radii)

    raise ValueError(f"unknown instance kind {kind!r}; expected one of {KINDS}")
