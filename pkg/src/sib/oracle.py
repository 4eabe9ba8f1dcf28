"""Reference solvers used to cross-check the game loop.

These share only the geometry oracles with ``sib.solver``:

* ``subgradient_sib`` minimizes ``F(x) = max_i dist(x, obj_i)`` directly,
  first with projected subgradient steps and then with an SQP finish on the
  smooth epigraph form ``min t  s.t.  dist(x, obj_i)^2 <= t``.
* ``coreset_seb`` is the Badoiu-Clarkson core-set iteration for point sets.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .geometry import SupportTable, as_vector, check_uniform_dimension, diameter_upper_bound
from .minnorm import min_norm_point


@dataclass
class OracleResult:
    center: np.ndarray
    radius: float
    iterations: int
    residual: float
    converged: bool = True


class _Distances:
    """``x -> (dist, nearest points)`` for a fixed object list, with a one-entry cache."""

    def __init__(self, objs):
        self.objs = list(objs)
        self.table = SupportTable(self.objs)
        self.iterative = self.table.iterative
        self._key = None

    def __call__(self, x):
        key = x.tobytes()
        if key != self._key:
            P, D = self.table.project_closed_form(x)
            for i in self.iterative:
                P[i], D[i] = self.objs[i].project(x)
            self._key, self._val = key, (D, P)
        return self._val


def _kkt_residual(x, D, P, band):
    """Norm of the min-norm convex combination of unit normals over the near-active set."""
    top = D.max()
    if top <= 0:
        return 0.0
    active = np.flatnonzero((D >= top - band) & (D > 0))
    U = (x - P[active]) / D[active, None]
    z, _ = min_norm_point(U, tol=1e-14)
    return float(np.linalg.norm(z))


def subgradient_sib(objs, iters=20000, tol=1e-5, lower_estimate=None, polish=True):
    """Minimize the largest distance to the objects.

    Step ``x <- x - alpha_t * (x - p_j) / |x - p_j|`` with ``j`` the first
    farthest object and ``alpha_t = D / sqrt(t)``; when ``lower_estimate`` is
    given the Polyak step ``alpha_t = F(x_t) - lower_estimate`` is used instead.
    With ``polish`` the best iterate seeds an SLSQP solve of the epigraph problem.

    ``residual`` is the optimality residual at the returned center (norm of the
    best convex combination of active unit normals, 0 at an exact optimum);
    ``converged`` is False, with a warning, when it exceeds ``tol``.
    """
    objs = list(objs)
    d = check_uniform_dimension(objs)
    D_hat = diameter_upper_bound(objs)
    dist = _Distances(objs)
    x = np.mean([o.representative() for o in objs], axis=0)
    best_x, best_F = x.copy(), math.inf
    for t in range(1, iters + 1):
        D, P = dist(x)
        j = int(np.argmax(D))
        F = float(D[j])
        if F < best_F:
            best_x, best_F = x.copy(), F
        if F == 0.0:
            break
        g = (x - P[j]) / F
        step = (F - lower_estimate) if lower_estimate is not None else D_hat / math.sqrt(t)
        x = x - max(step, 0.0) * g

    if polish and best_F > 0:
        best_x, best_F = _sqp_polish(dist, best_x, best_F, d)

    D, P = dist(best_x)
    radius = float(D.max())
    residual = _kkt_residual(best_x, D, P, band=tol * max(D_hat, 1e-300))
    converged = residual <= tol
    if not converged:
        warnings.warn(f"subgradient_sib: optimality residual {residual:.3g} exceeds tol {tol:.3g}",
                      RuntimeWarning, stacklevel=2)
    return OracleResult(center=best_x, radius=radius, iterations=t, residual=residual,
                        converged=converged)


def _sqp_polish(dist, x0, F0, d):
    scale = F0 * F0

    def fun(z):
        return z[-1]

    def fun_jac(z):
        g = np.zeros(d + 1)
        g[-1] = 1.0
        return g

    def cons(z):
        D, _ = dist(z[:d])
        return (z[-1] - D * D) / scale

    def cons_jac(z):
        x = z[:d]
        _, P = dist(x)
        J = np.empty((len(P), d + 1))
        J[:, :d] = -2.0 * (x - P) / scale
        J[:, -1] = 1.0 / scale
        return J

    z0 = np.concatenate((x0, [scale]))
    res = minimize(fun, z0, jac=fun_jac, method="SLSQP",
                   constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                   options={"ftol": 1e-16 * scale, "maxiter": 500})
    x = np.asarray(res.x[:d], dtype=float)
    if not np.all(np.isfinite(x)):
        return x0, F0
    F = float(dist(x)[0].max())
    return (x, F) if F < F0 else (x0, F0)


def coreset_seb(points, eps=1e-2):
    """Badoiu-Clarkson: ``ceil(1/eps^2)`` moves of the center toward the farthest point.

    Returns a (1 + eps)-approximate smallest enclosing ball of ``points``.
    """
    P = np.array([as_vector(p) for p in points])
    if len(P) == 0:
        raise ValueError("coreset_seb needs at least one point")
    steps = math.ceil(1.0 / eps ** 2)
    x = P[0].copy()
    best_x, best_r = x.copy(), math.inf
    for k in range(1, steps + 1):
        D = np.linalg.norm(P - x, axis=1)
        f = int(np.argmax(D))
        if D[f] < best_r:
            best_x, best_r = x.copy(), float(D[f])
        if D[f] == 0.0:
            break
        x = x + (P[f] - x) / (k + 1)
    D = np.linalg.norm(P - x, axis=1)
    if D.max() < best_r:
        best_x, best_r = x, float(D.max())
    return OracleResult(center=best_x, radius=best_r, iterations=steps, residual=0.0)
