import math

import numpy as np
import pytest

from diskdispersion.geometry import BallInstance, NonUnitRadiusError, min_pairwise_distance, validate
from diskdispersion.hybrid import shrink_instance, solve_hybrid


class TestShrink:
    def test_tangent_after_half_shrink(self):
        inst = BallInstance([[0, 0], [1, 0]], [1, 1])
        small = shrink_instance(inst, 0.5)
        assert np.all(small.radii == 0.5)
        assert validate(small, require_disjoint=True).ok

    def test_zero_gives_point_disks(self):
        small = shrink_instance(BallInstance([[0, 0], [5, 0]], [1, 1]), 0.0)
        assert np.all(small.radii == 0.0)

    def test_one_is_identity(self):
        inst = BallInstance([[0, 0], [3, 0]], [1, 1])
        small = shrink_instance(inst, 1.0)
        assert np.array_equal(small.radii, inst.radii)
        assert np.array_equal(small.centers, inst.centers)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            shrink_instance(BallInstance([[0, 0]], [1]), 1.5)

    def test_rejects_non_unit(self):
        with pytest.raises(NonUnitRadiusError):
            shrink_instance(BallInstance([[0, 0]], [2]), 0.5)


class TestSolveHybrid:
    def test_tangent_pair(self):
        out = solve_hybrid(BallInstance([[0, 0], [2, 0]], [1, 1]))
        assert out.winner == "a2"
        assert out.mu == pytest.approx(1.0)
        assert out.solution.min_distance == pytest.approx(3.0, abs=1e-6)
        assert out.candidates["centers"] == pytest.approx(2.0)
        assert out.candidates["a1"] == pytest.approx(2.0442, abs=1e-3)
        assert out.solution.algorithm == "hybrid:a2"

    def test_overlapping_pair_at_distance_one(self):
        out = solve_hybrid(BallInstance([[0, 0], [1, 0]], [1, 1]))
        assert out.winner == "a2"
        assert out.mu == pytest.approx(0.5)
        assert out.solution.min_distance == pytest.approx(1.5, abs=1e-6)

    def test_coincident_centers_flagged(self):
        out = solve_hybrid(BallInstance([[0, 0], [0, 0]], [1, 1]))
        assert out.winner == "centers"
        assert out.solution.min_distance == 0.0
        assert "a1" in out.skipped and "a2" in out.skipped
        assert "no guarantee" in out.note

    def test_single_ball(self):
        out = solve_hybrid(BallInstance([[0, 0]], [1]))
        assert out.winner == "centers"
        assert math.isinf(out.solution.min_distance)

    def test_rejects_non_unit(self):
        with pytest.raises(NonUnitRadiusError):
            solve_hybrid(BallInstance([[0, 0], [4, 0]], [1, 1.5]))

    def test_winner_dominates_and_points_stay_inside(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 12))
            centers = rng.uniform(0, 6.0, (n, 2))
            # regenerate coincident centers; overlap is the point here
            while True:
                diff = centers[:, None, :] - centers[None, :, :]
                dist = np.sqrt(np.sum(diff * diff, axis=-1))
                np.fill_diagonal(dist, np.inf)
                if np.min(dist) > 1e-6:
                    break
                centers = rng.uniform(0, 6.0, (n, 2))
            inst = BallInstance(centers, np.ones(n))
            out = solve_hybrid(inst)
            assert out.solution.min_distance == max(out.candidates.values())
            offsets = out.solution.points - inst.centers
            assert np.all(np.sqrt(np.sum(offsets**2, axis=1)) <= 1.0 + 1e-9)
            # the reported distance is a recomputation, not solver output
            assert out.solution.min_distance == pytest.approx(
                min_pairwise_distance(out.solution.points), abs=0
            )


class TestShrinkDistanceLoss:
    def test_radial_shrink_costs_at_most_two_one_minus_mu(self, rng):
        """Pulling each point toward its center by factor mu keeps the
        minimum distance within 2 (1 - mu) of the original."""
        for _ in range(2000):
            n = int(rng.integers(2, 6))
            centers = rng.uniform(0, 8.0, (n, 2))
            angles = rng.uniform(0, 2 * math.pi, n)
            radial = np.sqrt(rng.uniform(0, 1, n))
            pts = centers + (radial * np.stack([np.cos(angles), np.sin(angles)])).T
            mu = float(rng.uniform(0, 1))
            shrunk = centers + mu * (pts - centers)
            before = min_pairwise_distance(pts)
            after = min_pairwise_distance(shrunk)
            assert after >= before - 2.0 * (1.0 - mu) - 1e-9
