import sys

import numpy as np
import pytest

from sib.geometry import Aabb, Ball, Ellipsoid, Point, Polytope


def random_object(rng, d, kind=None, spread=3.0):
    kind = kind or rng.choice(["point", "ball", "aabb", "polytope", "ellipsoid"])
    c = rng.standard_normal(d) * spread
    if kind == "point":
        return Point(c)
    if kind == "ball":
        return Ball(c, rng.uniform(0.1, 1.0))
    if kind == "aabb":
        return Aabb(c, c + rng.uniform(0.1, 1.5, d))
    if kind == "polytope":
        return Polytope(c + 0.7 * rng.standard_normal((int(rng.integers(1, 9)), d)))
    A = 0.5 * rng.standard_normal((d, d))
    return Ellipsoid(c, A @ A.T + 0.1 * np.eye(d))


def random_scene(rng, n, d, kinds=None):
    return [random_object(rng, d, None if kinds is None else rng.choice(kinds)) for _ in range(n)]


def sample_inside(obj, rng, k):
    """``k`` points of ``obj`` sampled to include its boundary and extreme points."""
    d = obj.dim
    if isinstance(obj, Point):
        return np.tile(obj.p, (k, 1))
    if isinstance(obj, Ball):
        u = rng.standard_normal((k, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        r = obj.radius * rng.uniform(0, 1, k) ** (1.0 / d)
        r[: k // 2] = obj.radius
        return obj.center + r[:, None] * u
    if isinstance(obj, Aabb):
        t = rng.uniform(0, 1, (k, d))
        t[: k // 2] = np.round(t[: k // 2])
        return obj.lo + t * (obj.hi - obj.lo)
    if isinstance(obj, Polytope):
        if len(obj.vertices) == 1:
            return np.tile(obj.vertices[0], (k, 1))
        w = rng.dirichlet(np.ones(len(obj.vertices)) * 0.3, size=k)
        return w @ obj.vertices
    u = rng.standard_normal((k, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = rng.uniform(0, 1, k) ** (1.0 / d)
    r[: k // 2] = 1.0
    L = obj.eigvecs * np.sqrt(obj.eigvals)
    return obj.center + (r[:, None] * u) @ L.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def two_balls():
    return [Ball([0.0, 0.0], 1.0), Ball([10.0, 0.0], 1.0)]


@pytest.fixture
def square_points():
    return [Point(p) for p in [(0.0, 0.0), (2.0, 0.0), (0.0, 2.0), (2.0, 2.0)]]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(mod.RESULTS):
            terminalreporter.write_line(mod.RESULTS[k])
