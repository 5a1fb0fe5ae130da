import math

import numpy as np
import pytest

from unifoliate.spheregeo import (
    InfeasibleParamsError,
    SQRT2,
    SphereSample,
    cap_diameter,
    cap_measure,
    choose_beta,
    choose_theta,
    dist,
    point_at_chord,
    sample_points,
    theta_budget,
    theta_chain_margins,
    verify_near_or_far,
)

from oracles import cap_area_exact


def test_sample_points_basics():
    s = sample_points(1, 3, 0)
    assert abs(np.linalg.norm(s.points[0]) - 1.0) <= 1e-9
    a = sample_points(50, 4, 123)
    b = sample_points(50, 4, 123)
    assert np.array_equal(a.points, b.points)
    c = sample_points(50, 4, 124)
    assert not np.array_equal(a.points, c.points)
    with pytest.raises(ValueError):
        sample_points(0, 3, 0)
    with pytest.raises(ValueError):
        sample_points(5, 0, 0)


def test_sample_points_mean_norm_small():
    s = sample_points(10_000, 3, 77)
    mean = s.points.mean(axis=0)
    assert np.linalg.norm(mean) < 0.05


def test_sphere_sample_validates_norms():
    with pytest.raises(ValueError):
        SphereSample(2, np.array([[1.0, 1.0, 1.0]]))


def test_dist():
    p = np.array([1.0, 0.0, 0.0, 0.0])
    q = np.array([-1.0, 0.0, 0.0, 0.0])
    o = np.array([0.0, 1.0, 0.0, 0.0])
    assert dist(p, p) == 0.0
    assert dist(p, q) == pytest.approx(2.0)
    assert dist(p, o) == pytest.approx(SQRT2)
    with pytest.raises(ValueError):
        dist(p, np.array([1.0, 0.0]))


def test_point_at_chord_exact():
    rng = np.random.default_rng(5)
    p = sample_points(1, 5, 9).points[0]
    for chord in (0.01, 0.5, SQRT2, 1.99):
        q = point_at_chord(p, chord, rng)
        assert abs(np.linalg.norm(q) - 1.0) <= 1e-9
        assert dist(p, q) == pytest.approx(chord, abs=1e-9)


def test_verify_near_or_far_trivials():
    p = sample_points(1, 3, 3).points[0]
    assert verify_near_or_far(p, p, p, 0.05)
    anti = -p
    assert verify_near_or_far(p, anti, anti, 0.05)
    with pytest.raises(ValueError):
        verify_near_or_far(p, p, p, 0.2)
    with pytest.raises(ValueError):
        verify_near_or_far(p, p, p, 0.0)


@pytest.mark.parametrize("d", [3, 5, 8])
def test_near_or_far_random_suite(d):
    rng = np.random.default_rng(100 + d)
    for _ in range(2000):
        a = float(rng.uniform(1e-4, 0.0999))
        x = point_at_chord(sample_points(1, d, int(rng.integers(2**31))).points[0], 0.0, rng)
        near_xy = bool(rng.integers(2))
        near_yz = bool(rng.integers(2))
        cxy = float(rng.uniform(0, a)) * 0.999 if near_xy else 2.0 - float(rng.uniform(0, a)) * 0.999
        cyz = float(rng.uniform(0, a)) * 0.999 if near_yz else 2.0 - float(rng.uniform(0, a)) * 0.999
        y = point_at_chord(x, cxy, rng)
        z = point_at_chord(y, cyz, rng)
        assert verify_near_or_far(x, y, z, a)


def test_cap_measure_hemisphere_and_full():
    est = cap_measure(3, SQRT2, 200_000, 0)
    assert est == pytest.approx(0.5, abs=0.01)
    assert cap_measure(3, 2.0, 1000, 0) == 1.0
    assert cap_measure(3, 0.0, 1000, 0) <= 1e-5
    with pytest.raises(ValueError):
        cap_measure(3, 2.5, 10, 0)


def test_cap_measure_monotone_in_radius():
    radii = [0.3, 0.6, 0.9, 1.2, SQRT2, 1.7, 1.95]
    vals = [cap_measure(3, r, 100_000, 42) for r in radii]
    assert vals == sorted(vals)


def test_cap_measure_matches_closed_form():
    for radius in (0.5, 0.9, 1.2, SQRT2 - 0.05, 1.6):
        n = 200_000
        est = cap_measure(4, radius, n, 7)
        exact = cap_area_exact(4, radius)
        se = math.sqrt(max(exact * (1 - exact), 1e-12) / n)
        assert abs(est - exact) <= 3 * se


def test_choose_beta_large_epsilon():
    bc = choose_beta(0.4, 3, samples=50_000, seed=1)
    assert bc.beta > 0
    assert bc.measure >= 0.1


def test_choose_beta_matches_closed_form_threshold():
    # the exact acceptance threshold: largest grid beta with
    # cap_area(sqrt2 - beta) >= 0.45
    bc = choose_beta(0.05, 3, samples=400_000, seed=2)
    grid = [0.1 * 0.5**i for i in range(40)]
    exact_ok = [b for b in grid if cap_area_exact(3, SQRT2 - b) >= 0.45]
    exact_best = exact_ok[0]
    idx_exact = grid.index(exact_best)
    idx_mine = grid.index(bc.beta)
    assert abs(idx_exact - idx_mine) <= 1


def test_choose_beta_monotone_in_epsilon():
    betas = [
        choose_beta(eps, 3, samples=50_000, seed=3).beta
        for eps in (0.30, 0.20, 0.10, 0.05)
    ]
    for earlier, later in zip(betas, betas[1:]):
        assert later <= earlier


def test_choose_theta_f1():
    gp = choose_theta(1, 0.1)
    assert 4 * math.sqrt(gp.theta) < 0.1
    assert gp.theta_budget < 0.1
    assert gp.theta < 1.0 / 1600.0


def test_choose_theta_f2_bound():
    gp = choose_theta(2, 0.1)
    assert gp.theta < (1.0 / 160.0) ** 4
    assert gp.theta_budget < 0.1


@pytest.mark.parametrize("f", [1, 2, 3, 5])
def test_choose_theta_budget_postcondition(f):
    gp = choose_theta(f, 0.05)
    assert gp.strict_ok()
    assert gp.theta_budget == pytest.approx(theta_budget(gp.theta, f), rel=1e-12)
    # the cap diameter constraint holds too
    assert cap_diameter(SQRT2 - 0.05) < 2.0 - gp.theta_budget


def test_choose_theta_respects_diameter_ceiling():
    # tiny beta leaves almost no room between the cap diameter and 2
    gp = choose_theta(1, 1e-4)
    assert cap_diameter(SQRT2 - 1e-4) < 2.0 - gp.theta_budget


def test_choose_theta_infeasible():
    with pytest.raises(InfeasibleParamsError):
        choose_theta(9, 0.1)
    with pytest.raises(ValueError):
        choose_theta(0, 0.1)


def test_choose_theta_sampled_diameter_check():
    gp = choose_theta(1, 0.1, d=3, samples=3000, seed=11)
    assert gp.strict_ok()


def test_cap_diameter_formula():
    assert cap_diameter(SQRT2) == pytest.approx(2.0)
    assert cap_diameter(2.0) == 2.0
    assert cap_diameter(1.0) == pytest.approx(math.sqrt(3.0))
    assert cap_diameter(0.0) == 0.0


def test_theta_chain_monotone_and_bounded():
    for f in (1, 2, 3, 6):
        gp_theta = 0.5 * (0.1 / 4**f) ** (2**f)
        rows = theta_chain_margins(gp_theta, f)
        for j, lhs, rhs in rows:
            assert lhs <= rhs + 1e-12
        # compounded scale grows with j
        scales = [j * math.log(4.0) + (2.0 ** (-j)) * math.log(gp_theta) for j in range(f + 1)]
        assert scales == sorted(scales)
