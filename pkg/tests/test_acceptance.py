"""End-to-end acceptance suite.

One test per criterion, each printing a PASS/FAIL line (visible with
``pytest -s``). Every tolerance is pinned here; the runtime ceilings are
asserted with perf_counter.
"""

import math
import time

import numpy as np
import pytest

from conftest import scattered_disjoint
from diskdispersion.generators import generate_instance
from diskdispersion.geometry import BallInstance, min_center_distance, min_pairwise_distance, neighbor_info
from diskdispersion.hybrid import solve_hybrid
from diskdispersion.intervals import IntervalInstance, cycle_oracle, line_oracle, solve_cycle, solve_line
from diskdispersion.oracle import brute_force_opt, certify, grid_resolution_error, opt_upper_disjoint, opt_upper_unit
from diskdispersion.perturbation import CENTERS_CASE, MATCHING_CASE, solve_a1
from diskdispersion.projection_lp import build_container_polytope, build_lp3, solve_a2
from diskdispersion.ratios import (
    CURVE_A1,
    CURVE_C1,
    CURVE_C2,
    crossover,
    f,
    hybrid_floor,
    mu0,
    solve_sigma,
    y1,
)

SQRT2 = math.sqrt(2.0)


def report(name: str, ok: bool, detail: str = ""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {name}: {tag}{suffix}")
    assert ok, f"{name} failed{suffix}"


def test_criterion_01_constants():
    t0 = time.perf_counter()
    checks = [
        abs(float(solve_sigma(2.0)) - 2.0883) <= 1e-3,
        abs(2.0 / f(float(solve_sigma(2.0))) - 0.5110) <= 1e-3,
        abs(mu0() - 0.4938) <= 1e-4,
        abs(hybrid_floor(mu0(), 4001) - 0.4674) <= 1e-3,
        abs(float(y1(0.0)) - 1.3478) <= 1e-3,
    ]
    cc = crossover(CURVE_C1, CURVE_C2, 1.0, 2.0)
    checks += [abs(cc.x_star - 1.8068) <= 1e-3, abs(cc.value - 0.4465) <= 1e-3]
    ca = crossover(CURVE_C1, CURVE_A1, 1.01, 2.0)
    checks += [abs(ca.x_star - 1.7750) <= 1e-3, abs(ca.value - 0.4487) <= 1e-3]
    elapsed = time.perf_counter() - t0
    report(
        "criterion 1 (ratio constants)",
        all(checks) and elapsed < 1.0,
        f"{sum(checks)}/{len(checks)} values, {elapsed:.2f}s",
    )


def test_criterion_02_projection_floor_grid():
    t0 = time.perf_counter()
    a = np.linspace(0.0, 1.0, 101)[:, None]
    alpha = np.linspace(0.0, 2.0 * math.pi, 720, endpoint=False)[None, :]
    num = 1.0 + a * np.cos(alpha) / 2.0
    den = np.sqrt(1.0 + a * a + 2.0 * a * np.cos(alpha))
    with np.errstate(divide="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.inf)
    lowest = float(np.min(ratio))
    elapsed = time.perf_counter() - t0
    report(
        "criterion 2 (projection floor on the grid)",
        lowest >= 0.7071067 - 1e-9 and elapsed < 1.0,
        f"min = {lowest:.9f}, {elapsed:.2f}s",
    )


def _projection_ratio_suite(rng, d, trials):
    dist = rng.uniform(0.5, 10.0, trials)
    r1 = rng.uniform(0.0, 1.0, trials) * dist
    r2 = rng.uniform(0.0, 1.0, trials) * (dist - r1)
    c1 = rng.normal(scale=5.0, size=(trials, d))
    u = rng.normal(size=(trials, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    c2 = c1 + dist[:, None] * u

    def sample(centers, radii):
        v = rng.normal(size=(trials, d))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        rad = radii * rng.uniform(0.0, 1.0, trials) ** (1.0 / d)
        return centers + rad[:, None] * v

    p1 = sample(c1, r1)
    p2 = sample(c2, r2)
    q1 = c1 + 0.5 * (p1 - c1)
    q2 = c2 + 0.5 * (p2 - c2)
    proj = np.einsum("ij,ij->i", u, q2 - q1)
    gap = np.linalg.norm(p2 - p1, axis=1)
    return float(np.min(proj / gap))


def test_criterion_03_projection_ratio_random_pairs(rng):
    t0 = time.perf_counter()
    worst2 = _projection_ratio_suite(rng, 2, 10_000)
    worst3 = _projection_ratio_suite(rng, 3, 10_000)
    elapsed = time.perf_counter() - t0
    report(
        "criterion 3 (projection ratio, random disjoint pairs)",
        min(worst2, worst3) >= 1.0 / SQRT2 - 1e-9 and elapsed < 5.0,
        f"worst d2 = {worst2:.9f}, worst d3 = {worst3:.9f}, {elapsed:.2f}s",
    )


def test_criterion_04_three_disk_packing_bound(rng):
    t0 = time.perf_counter()
    trials = 100_000
    centers = rng.uniform(-5.0, 5.0, (trials, 3, 2))
    angles = rng.uniform(0.0, 2.0 * math.pi, (trials, 3))
    radial = np.sqrt(rng.uniform(0.0, 1.0, (trials, 3)))
    pts = centers + np.stack([radial * np.cos(angles), radial * np.sin(angles)], axis=-1)
    d01 = np.linalg.norm(pts[:, 0] - pts[:, 1], axis=1)
    d02 = np.linalg.norm(pts[:, 0] - pts[:, 2], axis=1)
    d12 = np.linalg.norm(pts[:, 1] - pts[:, 2], axis=1)
    t = np.minimum(np.minimum(d01, d02), d12)
    c01 = np.linalg.norm(centers[:, 0] - centers[:, 1], axis=1)
    c02 = np.linalg.norm(centers[:, 0] - centers[:, 2], axis=1)
    c12 = np.linalg.norm(centers[:, 1] - centers[:, 2], axis=1)
    margin = np.inf
    for s in (np.maximum(c01, c02), np.maximum(c01, c12), np.maximum(c02, c12)):
        margin = min(margin, float(np.min(f(s) + 1e-9 - t)))
    elapsed = time.perf_counter() - t0
    report(
        "criterion 4 (three-disk packing bound, 1e5 triples)",
        margin >= 0.0 and elapsed < 10.0,
        f"worst margin = {margin:.3e}, {elapsed:.2f}s",
    )


def test_criterion_05_projection_lp_exactness(rng):
    t0 = time.perf_counter()
    tangent = solve_a2(BallInstance([[0, 0], [2, 0]], [1, 1]))
    cert = certify(tangent.solution, BallInstance([[0, 0], [2, 0]], [1, 1]))
    ok = abs(tangent.z_star - 3.0) <= 1e-6 and abs(cert.ratio_lower_bound - 0.75) <= 1e-6
    collinear = solve_a2(BallInstance([[0, 0], [2, 0], [4, 0]], [1, 1, 1]))
    ok = ok and abs(collinear.z_star - 2.5) <= 1e-6

    checked = 0
    for i in range(100):
        d = 2 if i < 60 else 3
        cap = 100 if d == 2 else 50
        n = int(rng.integers(2, cap + 1))
        kind = "disjoint-unit" if i % 2 == 0 else "disjoint-arbitrary"
        inst = generate_instance(kind, n, seed=1000 + i, dimension=d)
        out = solve_a2(inst, center_solution=False)
        delta = min_center_distance(inst)
        ok = ok and out.z_star >= delta - 1e-6
        ok = ok and out.z_star <= 7.0 * delta / 4.0 + 1e-6
        ok = ok and out.solution.min_distance >= out.z_star - 1e-6
        checked += 1
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report(
        "criterion 5 (projection-LP fixtures and 100 random instances)",
        ok and elapsed < 60.0,
        f"{checked} random instances, {elapsed:.1f}s",
    )


def test_criterion_06_oracle_relative_ratios(rng):
    t0 = time.perf_counter()
    ok = True
    for i in range(50):
        n = int(rng.integers(2, 5))
        inst = scattered_disjoint(rng, n, d=2, spread=2.5, gap=float(rng.uniform(0.0, 1.0)))
        best = brute_force_opt(inst, 41)
        err = grid_resolution_error(inst, 41)
        lp = solve_a2(inst).solution.min_distance
        pert = solve_a1(inst).solution.min_distance
        ok = ok and lp >= 0.70 * best - err
        ok = ok and pert >= 0.511 * best - err
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report(
        "criterion 6 (oracle-relative ratios on 50 tiny instances)",
        ok and elapsed < 120.0,
        f"{elapsed:.1f}s",
    )


def test_criterion_07_interval_exactness(rng):
    t0 = time.perf_counter()
    z_line, _ = solve_line(IntervalInstance([(0, 1), (2, 3), (4, 5)]))
    z_cycle, _ = solve_cycle(IntervalInstance([(0, 1), (3, 4), (6, 7)], length=9.0))
    ok = abs(z_line - 2.5) <= 1e-9 and abs(z_cycle - 3.0) <= 1e-9

    for _ in range(200):
        n = int(rng.integers(2, 14))
        edges = np.cumsum(rng.uniform(0.0, 3.0, 2 * n))
        inst = IntervalInstance(tuple((edges[2 * i], edges[2 * i + 1]) for i in range(n)))
        z_lp, _ = solve_line(inst)
        z_or, _ = line_oracle(inst)
        ok = ok and abs(z_lp - z_or) <= 1e-9
        if not ok:
            break
    if ok:
        for _ in range(200):
            n = int(rng.integers(2, 12))
            edges = np.cumsum(rng.uniform(0.0, 3.0, 2 * n))
            L = float(edges[-1] + rng.uniform(0.1, 6.0))
            inst = IntervalInstance(tuple((edges[2 * i], edges[2 * i + 1]) for i in range(n)), length=L)
            z_lp, _ = solve_cycle(inst)
            z_or, _ = cycle_oracle(inst)
            ok = ok and abs(z_lp - z_or) <= 1e-9
            if not ok:
                break
    elapsed = time.perf_counter() - t0
    report(
        "criterion 7 (interval solvers match the greedy oracle)",
        ok and elapsed < 10.0,
        f"400 instances, {elapsed:.1f}s",
    )


def test_criterion_08_perturbation_structure(rng):
    t0 = time.perf_counter()
    ok = True
    cases = {CENTERS_CASE: 0, MATCHING_CASE: 0}
    for i in range(200):
        if i % 2 == 0:
            inst = generate_instance("disjoint-unit", int(rng.integers(2, 120)), seed=3000 + i)
        else:
            inst = scattered_disjoint(rng, int(rng.integers(2, 40)), spread=8.0, gap=1.5)
        out = solve_a1(inst)
        cases[out.case_tag] += 1
        delta = min_center_distance(inst)
        sigma = float(solve_sigma(delta))
        info = neighbor_info(inst)
        step2 = bool(np.any(info.second_distance <= sigma))
        ok = ok and (out.case_tag == (CENTERS_CASE if step2 else MATCHING_CASE))
        ok = ok and out.fallback_reason is None
        if out.case_tag == MATCHING_CASE:
            ok = ok and out.solution.min_distance >= (sigma + delta) / 2.0 - 1e-9
            paired = info.nearest_distance <= sigma
            partner = info.nearest_index
            idx = np.nonzero(paired)[0]
            ok = ok and bool(np.all(partner[partner[idx]] == idx))
        offsets = out.solution.points - inst.centers
        ok = ok and bool(np.all(np.sqrt(np.sum(offsets**2, axis=1)) <= 1.0 - 1e-12))
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report(
        "criterion 8 (perturbation solver structure, 200 instances)",
        ok and cases[CENTERS_CASE] > 0 and cases[MATCHING_CASE] > 0,
        f"cases seen {cases}, {elapsed:.1f}s",
    )


def test_criterion_09_bounds_consistency(rng):
    t0 = time.perf_counter()
    ok = True
    for i in range(40):
        inst = scattered_disjoint(rng, int(rng.integers(2, 5)), d=2, spread=3.0, gap=0.3)
        best = brute_force_opt(inst, 21)
        upper = opt_upper_disjoint(inst)
        ok = ok and best <= upper + 1e-6
        ok = ok and upper <= 2.0 * min_center_distance(inst) + 1e-9
        if inst.is_unit():
            ok = ok and best <= opt_upper_unit(inst) + 1e-6
        if not ok:
            break
    for i in range(20):
        inst = generate_instance("disjoint-arbitrary", int(rng.integers(2, 30)), seed=4000 + i)
        ok = ok and opt_upper_disjoint(inst) <= 2.0 * min_center_distance(inst) + 1e-9
        if not ok:
            break
    elapsed = time.perf_counter() - t0
    report("criterion 9 (optimum bounds consistency)", ok, f"{elapsed:.1f}s")


def test_criterion_10_hybrid_fixtures(rng):
    t0 = time.perf_counter()
    tangent = solve_hybrid(BallInstance([[0, 0], [2, 0]], [1, 1]))
    ok = tangent.winner == "a2" and abs(tangent.solution.min_distance - 3.0) <= 1e-6
    overlap = solve_hybrid(BallInstance([[0, 0], [1, 0]], [1, 1]))
    ok = ok and overlap.winner == "a2" and abs(overlap.solution.min_distance - 1.5) <= 1e-6

    # radial shrink toward the centers loses at most 2 (1 - mu)
    trials = 10_000
    n = 4
    centers = rng.uniform(0, 8.0, (trials, n, 2))
    angles = rng.uniform(0, 2 * math.pi, (trials, n))
    radial = np.sqrt(rng.uniform(0, 1, (trials, n)))
    pts = centers + np.stack([radial * np.cos(angles), radial * np.sin(angles)], axis=-1)
    mus = rng.uniform(0, 1, trials)
    shrunk = centers + mus[:, None, None] * (pts - centers)

    def min_pair(arr):
        best = np.full(arr.shape[0], np.inf)
        for i in range(n):
            for j in range(i + 1, n):
                best = np.minimum(best, np.linalg.norm(arr[:, i] - arr[:, j], axis=1))
        return best

    before = min_pair(pts)
    after = min_pair(shrunk)
    shrink_ok = bool(np.all(after >= before - 2.0 * (1.0 - mus) - 1e-9))
    elapsed = time.perf_counter() - t0
    report(
        "criterion 10 (portfolio fixtures and shrink loss bound)",
        ok and shrink_ok,
        f"1e4 shrink samples, {elapsed:.1f}s",
    )


def test_performance_constraint_count_linear():
    t0 = time.perf_counter()
    ratios = []
    for n in (100, 1000):
        inst = generate_instance("disjoint-unit", n, seed=55)
        polys = [build_container_polytope(inst.ball(i), 2) for i in range(n)]
        model = build_lp3(inst, polys)
        ratios.append(model.n_rows / n)
    elapsed = time.perf_counter() - t0
    # 4 containment rows per disk plus the near-pair rows; a packing
    # argument caps the pairs at 112 n, far above anything observed
    report(
        "performance (constraint count linear in n)",
        all(r <= 120.0 for r in ratios),
        f"rows/n = {ratios[0]:.1f} at n=100, {ratios[1]:.1f} at n=1000, {elapsed:.1f}s",
    )


def test_performance_perturbation_large_instance():
    inst = generate_instance("disjoint-unit", 100_000, seed=77)
    t0 = time.perf_counter()
    out = solve_a1(inst, method="indexed")
    elapsed = time.perf_counter() - t0
    report(
        "performance (perturbation solver at n = 1e5)",
        elapsed < 1.0 and out.solution.min_distance > 0,
        f"{elapsed:.2f}s, case {out.case_tag}",
    )
