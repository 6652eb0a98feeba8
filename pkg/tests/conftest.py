import numpy as np
import pytest

from diskdispersion.geometry import BallInstance


def scattered_disjoint(rng, n, d=2, radii=None, spread=6.0, gap=0.1):
    """Rejection-sample a small disjoint instance for tests."""
    if radii is None:
        radii = np.ones(n)
    radii = np.asarray(radii, dtype=float)
    side = spread * max(n, 2) ** (1.0 / d) * (np.mean(radii) + 1.0)
    centers = []
    while len(centers) < n:
        p = rng.uniform(0.0, side, d)
        i = len(centers)
        if all(
            np.sqrt(np.sum((p - q) ** 2)) >= radii[i] + radii[j] + gap
            for j, q in enumerate(centers)
        ):
            centers.append(p)
    return BallInstance(np.asarray(centers), radii)


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)
