import warnings

import numpy as np
import pytest
from scipy.spatial.distance import pdist

from conftest import random_scene
from sib.geometry import Ball, Point, diameter_upper_bound, project
from sib.oracle import coreset_seb, subgradient_sib
from sib.solver import SolverParams, solve


def test_subgradient_two_balls(two_balls):
    res = subgradient_sib(two_balls, iters=20000, tol=1e-4)
    assert 4.0 - 1e-12 <= res.radius <= 4.0004
    assert res.converged


def test_subgradient_single_point():
    res = subgradient_sib([Point([3, 7])])
    np.testing.assert_allclose(res.center, [3, 7])
    assert res.radius == 0.0


def test_subgradient_square(square_points):
    res = subgradient_sib(square_points, iters=2000, tol=1e-6)
    assert res.radius == pytest.approx(np.sqrt(2), rel=1e-8)
    np.testing.assert_allclose(res.center, [1, 1], atol=1e-6)


def test_subgradient_radius_is_recomputed(rng):
    objs = random_scene(rng, 6, 3)
    res = subgradient_sib(objs, iters=1000, tol=1e-6)
    recomputed = max(project(o, res.center)[1] for o in objs)
    assert abs(res.radius - recomputed) <= 1e-12 * max(1.0, res.radius)


def test_subgradient_polyak_step(two_balls):
    res = subgradient_sib(two_balls, iters=500, tol=1e-4, lower_estimate=4.0, polish=False)
    assert res.radius == pytest.approx(4.0, abs=1e-6)


def test_subgradient_warns_when_unconverged(rng):
    objs = random_scene(rng, 8, 4)
    with pytest.warns(RuntimeWarning):
        res = subgradient_sib(objs, iters=2, tol=1e-14, polish=False)
    assert not res.converged


def test_coreset_examples():
    res = coreset_seb([[4.0, 5.0]])
    assert res.radius == 0.0
    np.testing.assert_array_equal(res.center, [4, 5])
    res = coreset_seb([[0, 0], [2, 0]], eps=0.01)
    assert 1.0 <= res.radius <= 1.01
    np.testing.assert_allclose(res.center, [1, 0], atol=0.02)


def test_coreset_matches_subgradient_on_square_cloud(rng):
    pts = rng.uniform(0, 1, (100, 2))
    a = coreset_seb(pts, eps=0.01)
    b = subgradient_sib([Point(p) for p in pts], iters=2000, tol=1e-6)
    assert abs(a.radius / b.radius - 1) <= 0.01


def test_coreset_never_below_half_diameter(rng):
    for d in (2, 5, 20):
        pts = rng.standard_normal((40, d))
        assert coreset_seb(pts, eps=0.05).radius >= pdist(pts).max() / 2 - 1e-12


def test_coreset_rejects_empty():
    with pytest.raises(ValueError):
        coreset_seb([])


def test_cross_oracle_agreement_and_lower_bound(rng):
    eps, tol = 1e-3, 1e-5
    for _ in range(5):
        objs = random_scene(rng, 5, 3)
        D = diameter_upper_bound(objs)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            ref = subgradient_sib(objs, iters=2000, tol=tol)
        sol = solve(objs, SolverParams(eps=eps))
        assert abs(ref.radius - sol.radius) <= (eps + tol) * max(sol.radius, D * 1e-6)
        assert sol.lower_bound <= ref.radius + tol * D


def test_oracle_balls_vs_coreset_of_centers():
    # zero-radius balls are points
    pts = [[0, 0], [4, 0], [1, 3]]
    a = subgradient_sib([Ball(p, 0.0) for p in pts], iters=2000, tol=1e-6)
    b = coreset_seb(pts, eps=1e-3)
    assert a.radius <= b.radius * (1 + 1e-9)
    assert a.radius == pytest.approx(b.radius, rel=2e-3)
