"""Smallest intersecting ball via the bilinear zero-sum game.

The max-player holds ``y`` in a product of second-order cones with unit total
mass; the min-player holds a center ``x`` in the convex hull of the input and
one point ``v_i`` per object. The payoff is ``sum_i y_i @ (x - v_i)`` and its
value is the optimal radius. Each round the cone learner proposes ``y``, the
min-player best-responds with support oracles, and the learner observes the
gap vectors ``x - v_i``. Averaged iterates are certified with exact distances
(upper bound) and any dual point gives a lower bound; the loop stops once the
two are within a factor ``1 + eps``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidInput, InvalidScene, NonConvergence
from .geometry import SupportTable, check_uniform_dimension, diameter_upper_bound
from .learner import DualIterate, LearnerState
from .minnorm import min_norm_point

MAX_ITERS_CAP = 10_000_000


class Termination(str, Enum):
    EPS_REACHED = "EpsReached"
    ABS_TOL_REACHED = "AbsTolReached"
    ITER_CAP = "IterCap"


@dataclass
class SolverParams:
    eps: float = 1e-3
    abs_tol: float = None  # default 1e-9 * diameter bound
    max_iters: int = None  # default derived from eps, n and the conditioning estimate
    seed: int = 0  # unused; the solver is deterministic
    check_every: int = 16
    step_scale: float = 2.0  # multiplies the learner's anytime step size

    def __post_init__(self):
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise InvalidInput(f"eps must be positive, got {self.eps}")
        if self.abs_tol is not None and not self.abs_tol >= 0:
            raise InvalidInput(f"abs_tol must be non-negative, got {self.abs_tol}")
        if self.max_iters is not None and int(self.max_iters) < 1:
            raise InvalidInput(f"max_iters must be >= 1, got {self.max_iters}")
        if int(self.check_every) < 1:
            raise InvalidInput(f"check_every must be >= 1, got {self.check_every}")
        if not (self.step_scale > 0 and math.isfinite(self.step_scale)):
            raise InvalidInput(f"step_scale must be positive, got {self.step_scale}")


@dataclass
class PrimalResponse:
    x: np.ndarray
    v: np.ndarray
    source: int  # index j with x == support(objs[j], -sum(y))


@dataclass
class Solution:
    center: np.ndarray
    radius: float
    lower_bound: float
    witnesses: np.ndarray
    iterations: int
    terminated: Termination
    eps_achieved: float


@dataclass
class Check:
    t: int
    upper: float
    lower: float


class Problem:
    """A validated object list with its vectorized support table and diameter bound."""

    def __init__(self, objs):
        self.objs = list(objs)
        try:
            self.d = check_uniform_dimension(self.objs)
        except InvalidInput as exc:
            raise InvalidScene(str(exc)) from exc
        self.n = len(self.objs)
        self.table = SupportTable(self.objs)
        self.diameter_ub = diameter_upper_bound(self.objs)
        self.iterative = self.table.iterative


def _problem(objs):
    return objs if isinstance(objs, Problem) else Problem(objs)


def payoff(y, x, v):
    """``sum_i y_i @ (x - v_i)``."""
    return float(y.resultant() @ x - np.einsum("ij,ij->", y.y, v))


def best_response(objs, y):
    """Minimizer of the payoff over centers and per-object points for fixed ``y``."""
    prob = _problem(objs)
    v = prob.table.support_rows(y.y)
    c = y.resultant()
    cand = prob.table.support_common(-c)
    j = int(np.argmin(cand @ c))
    return PrimalResponse(x=cand[j].copy(), v=v, source=j)


def lower_bound(objs, y):
    """Payoff of the best response to ``y``, clamped at zero; never exceeds the optimal radius."""
    br = best_response(objs, y)
    return max(0.0, payoff(y, br.x, br.v))


def _iterative_distance(obj, x, vbar_i):
    if vbar_i is None:
        return obj.project(x)
    fallback = (vbar_i, float(np.linalg.norm(x - vbar_i)))
    try:
        p, dist = obj.project(x)
    except NonConvergence:
        return fallback
    return (p, dist) if dist <= fallback[1] else fallback


def distances(objs, x, vbar=None, pool=None):
    """Per-object certified distances from ``x`` and the witness points realizing them."""
    prob = _problem(objs)
    x = np.asarray(x, dtype=float)
    W, D = prob.table.project_closed_form(x)
    todo = prob.iterative
    if len(todo):
        targets = [prob.objs[i] for i in todo]
        rows = [None] * len(todo) if vbar is None else [vbar[i] for i in todo]
        if pool is None:
            out = [_iterative_distance(o, x, w) for o, w in zip(targets, rows)]
        else:
            out = list(pool.map(_iterative_distance, targets, [x] * len(todo), rows))
        for i, (w, dist) in zip(todo, out):
            W[i] = w
            D[i] = dist
    # the reported distance must cover the witness exactly, rounding included
    return np.maximum(D, np.linalg.norm(x - W, axis=1)), W


def upper_bound(objs, x, vbar=None):
    """``(r, witnesses)`` such that the ball ``B(x, r)`` meets every object.

    Objects with a closed-form projection use it; the others take the better
    of their iterative projection and the averaged point ``vbar[i]``.
    """
    x = np.asarray(x, dtype=float)
    D, W = distances(objs, x, vbar)
    return float(D.max()), W


def normal_cone_duals(x, witnesses, dists, levels=(1e-1, 1e-2, 1e-3)):
    """Dual points assembled from the outward normals at a candidate center.

    For each near-active set ``{i : dist_i >= (1 - level) * max dist}`` the
    unit normals ``u_i = (x - w_i) / dist_i`` are weighted by the minimum-norm
    convex combination, giving ``y_i = lam_i u_i`` and ``s_i = lam_i``.
    """
    top = float(dists.max())
    if top <= 0:
        return []
    n, d = witnesses.shape
    seen, duals = set(), []
    for level in levels:
        active = np.flatnonzero((dists >= (1.0 - level) * top) & (dists > 0))
        key = tuple(active)
        if key in seen:
            continue
        seen.add(key)
        U = (x - witnesses[active]) / dists[active, None]
        _, lam = min_norm_point(U, tol=1e-14, max_iter=100 * len(active) + 100)
        y = np.zeros((n, d))
        s = np.zeros(n)
        y[active] = lam[:, None] * U
        s[active] = lam
        duals.append(DualIterate(y=y, s=s))
    return duals


def _threads():
    raw = os.environ.get("SIB_THREADS", "1")
    try:
        k = int(raw)
    except ValueError as exc:
        raise InvalidInput(f"SIB_THREADS must be an integer, got {raw!r}") from exc
    return max(1, k)


def _iteration_budget(eps, n, ratio_sq):
    base = math.ceil(16.0 * math.log(2 * n) / eps ** 2)
    return int(min(MAX_ITERS_CAP, base * min(max(ratio_sq, 1.0), 1e6)))


def solve(objs, params=None, callback=None, threads=None):
    """Run the game loop until the certified radius is within ``1 + eps`` of the dual bound.

    ``callback(event, payload)`` is invoked with ``("dual", DualIterate)`` for
    every dual point the solver produces, ``("round", (t, PrimalResponse))``
    after each best response and ``("check", Check)`` after each gap check.
    """
    params = params or SolverParams()
    prob = _problem(objs)
    n, d = prob.n, prob.d
    D_hat = prob.diameter_ub
    abs_tol = params.abs_tol if params.abs_tol is not None else 1e-9 * D_hat
    explicit_cap = params.max_iters is not None
    cap = int(params.max_iters) if explicit_cap else _iteration_budget(params.eps, n, 1e6)
    emit = callback or (lambda event, payload: None)
    threads = _threads() if threads is None else max(1, int(threads))
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None

    learner = LearnerState(n, d, D_hat if D_hat > 0 else 1.0, params.step_scale)
    x_sum = np.zeros(d)
    x_tail = np.zeros(d)  # sum of x since the last power-of-two round
    tail_start = 1
    v_sum = np.zeros((n, d))
    y_sum = np.zeros((n, d))
    s_sum = np.zeros(n)
    best_r, best_x, best_w = math.inf, None, None
    lb = 0.0
    status = Termination.ITER_CAP
    t = 0
    try:
        while t < cap:
            t += 1
            y = learner.current()
            emit("dual", y)
            br = best_response(prob, y)
            emit("round", (t, br))
            learner.observe(br.x - br.v)
            x_sum += br.x
            if t & (t - 1) == 0:
                x_tail[:] = 0.0
                tail_start = t
            x_tail += br.x
            v_sum += br.v
            y_sum += y.y
            s_sum += y.s
            if t % params.check_every and t != 1 and t != cap:
                continue

            vbar = v_sum / t
            improved = False
            for cand in (x_sum / t, x_tail / (t - tail_start + 1), br.x):
                D, W = distances(prob, cand, vbar, pool)
                r = float(D.max())
                if r < best_r:
                    best_r, best_x, best_w, best_D = r, cand.copy(), W, D
                    improved = True

            duals = [y, DualIterate(y=y_sum / t, s=s_sum / t)]
            if improved:
                duals += normal_cone_duals(best_x, best_w, best_D)
            for dual in duals[1:]:
                emit("dual", dual)
            for dual in duals:
                lb = max(lb, lower_bound(prob, dual))
            lb = min(lb, best_r)
            emit("check", Check(t=t, upper=best_r, lower=lb))

            if best_r <= abs_tol:
                status = Termination.ABS_TOL_REACHED
                break
            if best_r <= (1.0 + params.eps) * lb:
                status = Termination.EPS_REACHED
                break
            if not explicit_cap and lb > 0:
                cap = max(t, _iteration_budget(params.eps, n, (D_hat / lb) ** 2))
    finally:
        if pool is not None:
            pool.shutdown()

    return Solution(
        center=best_x,
        radius=best_r,
        lower_bound=lb,
        witnesses=best_w,
        iterations=t,
        terminated=status,
        eps_achieved=best_r / lb - 1.0 if lb > 0 else math.inf,
    )


def seb_game_value(objs, x):
    """Inner maximum of the enclosing-ball game at center ``x``: ``max_i max_{v in obj_i} |x - v|``.

    Exact for all types except ellipsoids, where a monotone support-point
    ascent gives a lower estimate of the farthest distance.
    """
    x = np.asarray(x, dtype=float)
    return max(o.farthest_distance(x) for o in _problem(objs).objs)
