"""Compact convex objects and their oracles.

Every object answers three questions about itself:

* ``support(a)``: a maximizer of ``a @ z`` over the object (linear optimization),
* ``project(x)``: the Euclidean nearest point and the distance to it,
* ``contains(x, tol)``: whether ``x`` lies within ``tol`` of the object.

Objects are immutable; arrays are stored read-only and cached factorizations
are computed once at construction.

``SupportTable`` groups a list of objects by kind so that the solver can
evaluate all ``n`` support queries of one round with a handful of numpy calls.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .errors import EmptyScene, InvalidInput, NonConvergence
from .minnorm import min_norm_point

PROJ_TOL = 1e-10
ELLIPSOID_TOL = 1e-12
ELLIPSOID_MAX_ITER = 100


def as_vector(x, d=None, name="vector"):
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInput(f"{name} must be a non-empty 1-D array, got shape {v.shape}")
    if d is not None and v.size != d:
        raise InvalidInput(f"{name} has dimension {v.size}, expected {d}")
    if not np.all(np.isfinite(v)):
        raise InvalidInput(f"{name} has non-finite entries")
    return v


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_dim(obj, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (obj.dim,):
        raise InvalidInput(f"expected a vector of dimension {obj.dim}, got shape {x.shape}")
    return x


class ConvexObject:
    """Common interface. Subclasses are frozen dataclasses."""

    kind = None

    @property
    def dim(self):
        raise NotImplementedError

    def support(self, a):
        raise NotImplementedError

    def project(self, x):
        raise NotImplementedError

    def representative(self):
        raise NotImplementedError

    def extent(self):
        """Radius of a ball around ``representative()`` that covers the object."""
        raise NotImplementedError

    def farthest_distance(self, x):
        """``max_{z in object} |x - z|``."""
        raise NotImplementedError

    def contains(self, x, tol=1e-9):
        _, dist = self.project(x)
        return dist <= tol

    def nnz(self):
        return int(sum(np.count_nonzero(getattr(self, f)) for f in self._fields))

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return all(np.array_equal(getattr(self, f), getattr(other, f)) for f in self._fields)

    def __hash__(self):
        return hash((self.kind,) + tuple(np.asarray(getattr(self, f)).tobytes() for f in self._fields))


@dataclass(frozen=True, eq=False)
class Point(ConvexObject):
    p: np.ndarray

    kind = "point"
    _fields = ("p",)

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(as_vector(self.p, name="point")))

    @property
    def dim(self):
        return self.p.size

    def support(self, a):
        _check_dim(self, a)
        return self.p.copy()

    def project(self, x):
        x = _check_dim(self, x)
        return self.p.copy(), float(np.linalg.norm(x - self.p))

    def representative(self):
        return self.p.copy()

    def extent(self):
        return 0.0

    def farthest_distance(self, x):
        return float(np.linalg.norm(_check_dim(self, x) - self.p))


@dataclass(frozen=True, eq=False)
class Ball(ConvexObject):
    center: np.ndarray
    radius: float

    kind = "ball"
    _fields = ("center", "radius")

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(as_vector(self.center, name="center")))
        r = float(self.radius)
        if not np.isfinite(r) or r < 0:
            raise InvalidInput(f"radius must be finite and non-negative, got {self.radius}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self):
        return self.center.size

    def support(self, a):
        a = _check_dim(self, a)
        na = np.linalg.norm(a)
        if na == 0.0:
            return self.center.copy()
        return self.center + (self.radius / na) * a

    def project(self, x):
        x = _check_dim(self, x)
        u = x - self.center
        nu = float(np.linalg.norm(u))
        if nu <= self.radius:
            return x.copy(), 0.0
        return self.center + (self.radius / nu) * u, nu - self.radius

    def contains(self, x, tol=1e-9):
        x = _check_dim(self, x)
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol

    def representative(self):
        return self.center.copy()

    def extent(self):
        return self.radius

    def farthest_distance(self, x):
        return float(np.linalg.norm(_check_dim(self, x) - self.center)) + self.radius


@dataclass(frozen=True, eq=False)
class Aabb(ConvexObject):
    lo: np.ndarray
    hi: np.ndarray

    kind = "aabb"
    _fields = ("lo", "hi")

    def __post_init__(self):
        lo = as_vector(self.lo, name="lo")
        hi = as_vector(self.hi, d=lo.size, name="hi")
        if np.any(lo > hi):
            raise InvalidInput("aabb requires lo <= hi coordinate-wise")
        object.__setattr__(self, "lo", _frozen(lo))
        object.__setattr__(self, "hi", _frozen(hi))

    @property
    def dim(self):
        return self.lo.size

    @property
    def mid(self):
        return 0.5 * (self.lo + self.hi)

    def support(self, a):
        a = _check_dim(self, a)
        return np.where(a > 0, self.hi, np.where(a < 0, self.lo, self.mid))

    def project(self, x):
        x = _check_dim(self, x)
        p = np.clip(x, self.lo, self.hi)
        return p, float(np.linalg.norm(x - p))

    def representative(self):
        return self.mid

    def extent(self):
        return 0.5 * float(np.linalg.norm(self.hi - self.lo))

    def farthest_distance(self, x):
        x = _check_dim(self, x)
        return float(np.linalg.norm(np.maximum(np.abs(x - self.lo), np.abs(x - self.hi))))


@dataclass(frozen=True, eq=False)
class Polytope(ConvexObject):
    """Convex hull of an explicit vertex list (duplicates allowed)."""

    vertices: np.ndarray

    kind = "polytope"
    _fields = ("vertices",)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
            raise InvalidInput(f"polytope needs a non-empty (m, d) vertex array, got shape {V.shape}")
        if not np.all(np.isfinite(V)):
            raise InvalidInput("polytope has non-finite vertices")
        object.__setattr__(self, "vertices", _frozen(V))

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def degenerate(self):
        """All vertices coincide: behaves as a single point."""
        return bool(np.all(self.vertices == self.vertices[0]))

    def support(self, a):
        a = _check_dim(self, a)
        return self.vertices[int(np.argmax(self.vertices @ a))].copy()

    def project(self, x, tol=PROJ_TOL):
        x = _check_dim(self, x)
        if self.degenerate:
            p = self.vertices[0].copy()
            return p, float(np.linalg.norm(x - p))
        z, _ = min_norm_point(self.vertices - x, tol=tol, max_iter=100 * len(self.vertices))
        return x + z, float(np.linalg.norm(z))

    def representative(self):
        return self.vertices[0].copy()

    def extent(self):
        return float(np.linalg.norm(self.vertices - self.vertices[0], axis=1).max())

    def farthest_distance(self, x):
        return float(np.linalg.norm(self.vertices - _check_dim(self, x), axis=1).max())


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexObject):
    """``{z : (z - center)^T Q^{-1} (z - center) <= 1}`` for SPD ``Q = shape``."""

    center: np.ndarray
    shape: np.ndarray
    eigvals: np.ndarray = field(init=False, repr=False)
    eigvecs: np.ndarray = field(init=False, repr=False)

    kind = "ellipsoid"
    _fields = ("center", "shape")

    def __post_init__(self):
        c = as_vector(self.center, name="center")
        Q = np.array(self.shape, dtype=float)
        d = c.size
        if Q.shape != (d, d):
            raise InvalidInput(f"shape matrix must be {d}x{d}, got {Q.shape}")
        if not np.all(np.isfinite(Q)):
            raise InvalidInput("shape matrix has non-finite entries")
        scale = float(np.abs(Q).max())
        if np.abs(Q - Q.T).max() > 1e-12 * max(scale, 1e-300):
            raise InvalidInput("shape matrix is not symmetric")
        Q = 0.5 * (Q + Q.T)
        w, U = np.linalg.eigh(Q)
        if not w[-1] > 0 or w[0] <= 1e-12 * w[-1]:
            raise InvalidInput("shape matrix is not positive definite")
        object.__setattr__(self, "center", _frozen(c))
        object.__setattr__(self, "shape", _frozen(Q))
        object.__setattr__(self, "eigvals", _frozen(w))
        object.__setattr__(self, "eigvecs", _frozen(U))

    @property
    def dim(self):
        return self.center.size

    def support(self, a):
        a = _check_dim(self, a)
        Qa = self.shape @ a
        q = float(a @ Qa)
        if q <= 0.0:
            return self.center.copy()
        return self.center + Qa / np.sqrt(q)

    def _level(self, w):
        return float(np.sum(w * w / self.eigvals))

    def project(self, x):
        x = _check_dim(self, x)
        w = self.eigvecs.T @ (x - self.center)
        if self._level(w) <= 1.0:
            return x.copy(), 0.0
        lam = self.eigvals
        lw2 = lam * w * w

        def f(mu):
            return float(np.sum(lw2 / (lam + mu) ** 2)) - 1.0

        # root of the secular equation lies in [lo, hi]
        lo = max(0.0, float(np.max(np.sqrt(lam) * np.abs(w) - lam)))
        hi = float(np.sqrt(lam[-1]) * np.linalg.norm(w))
        mu = lo
        for _ in range(ELLIPSOID_MAX_ITER):
            r = f(mu)
            if abs(r) <= ELLIPSOID_TOL:
                break
            if r > 0:
                lo = mu
            else:
                hi = mu
            dr = -2.0 * float(np.sum(lw2 / (lam + mu) ** 3))
            step = mu - r / dr if dr < 0 else np.nan
            mu = step if lo < step < hi else 0.5 * (lo + hi)
            if hi - lo <= 1e-17 * max(hi, 1.0):
                break
        else:
            raise NonConvergence("ellipsoid projection did not converge",
                                 iterations=ELLIPSOID_MAX_ITER, residual=abs(f(mu)))
        z = lam * w / (lam + mu)
        p = self.center + self.eigvecs @ z
        return p, float(np.linalg.norm(x - p))

    def contains(self, x, tol=1e-9):
        x = _check_dim(self, x)
        if self._level(self.eigvecs.T @ (x - self.center)) <= 1.0:
            return True
        return self.project(x)[1] <= tol

    def representative(self):
        return self.center.copy()

    def extent(self):
        return float(np.sqrt(self.eigvals[-1]))

    def farthest_distance(self, x, steps=50):
        # Heuristic: iterate z <- support(z - x); each step cannot decrease |z - x|.
        x = _check_dim(self, x)
        a = self.center - x
        if not np.any(a):
            a = self.eigvecs[:, -1]
        z = self.support(a)
        best = float(np.linalg.norm(z - x))
        for _ in range(steps):
            z = self.support(z - x)
            best = max(best, float(np.linalg.norm(z - x)))
        return best


def support(obj, a):
    """Maximizer of ``a @ z`` over ``obj``; ``representative(obj)`` when ``a == 0``."""
    return obj.support(a)


def project(obj, x):
    """``(p, dist)``: nearest point of ``obj`` to ``x`` and its distance."""
    return obj.project(x)


def contains(obj, x, tol=1e-9):
    return obj.contains(x, tol)


def representative(obj):
    return obj.representative()


def check_uniform_dimension(objs):
    objs = list(objs)
    if not objs:
        raise EmptyScene("no objects")
    d = objs[0].dim
    for i, o in enumerate(objs):
        if o.dim != d:
            raise InvalidInput(f"object {i} has dimension {o.dim}, expected {d}")
    return d


def diameter_upper_bound(objs):
    """Upper bound on the diameter of the union of ``objs`` (at most 3x loose)."""
    check_uniform_dimension(objs)
    reps = np.array([o.representative() for o in objs])
    spread = float(pdist(reps).max()) if len(reps) > 1 else 0.0
    return spread + 2.0 * max(o.extent() for o in objs)


@dataclass(frozen=True)
class SceneMetrics:
    n: int
    d: int
    diameter_ub: float
    nnz: int
    total_vertices: int


def scene_metrics(objs):
    d = check_uniform_dimension(objs)
    M = sum(len(o.vertices) if isinstance(o, Polytope) else int(isinstance(o, Point)) for o in objs)
    return SceneMetrics(
        n=len(objs),
        d=d,
        diameter_ub=diameter_upper_bound(objs),
        nnz=sum(o.nnz() for o in objs),
        total_vertices=M,
    )


class SupportTable:
    """Vectorized support oracle over a fixed list of objects.

    ``support_rows(Y)`` returns an ``(n, d)`` array whose row ``i`` equals
    ``objs[i].support(Y[i])``; tie-breaking and zero-direction handling match
    the per-object methods.
    """

    def __init__(self, objs):
        self.objs = list(objs)
        self.d = check_uniform_dimension(self.objs)
        self.n = len(self.objs)
        groups = {"point": [], "ball": [], "aabb": [], "polytope": [], "ellipsoid": []}
        for i, o in enumerate(self.objs):
            kind = "point" if isinstance(o, Polytope) and o.degenerate else o.kind
            groups[kind].append(i)
        self._idx = {k: np.array(v, dtype=np.intp) for k, v in groups.items() if v}

        if "point" in self._idx:
            self._pts = np.array([self.objs[i].representative() for i in self._idx["point"]])
        if "ball" in self._idx:
            bs = [self.objs[i] for i in self._idx["ball"]]
            self._bc = np.array([b.center for b in bs])
            self._br = np.array([b.radius for b in bs])
        if "aabb" in self._idx:
            bs = [self.objs[i] for i in self._idx["aabb"]]
            self._lo = np.array([b.lo for b in bs])
            self._hi = np.array([b.hi for b in bs])
            self._mid = 0.5 * (self._lo + self._hi)
        if "ellipsoid" in self._idx:
            es = [self.objs[i] for i in self._idx["ellipsoid"]]
            self._ec = np.array([e.center for e in es])
            self._eQ = np.array([e.shape for e in es])
        if "polytope" in self._idx:
            ps = [self.objs[i].vertices for i in self._idx["polytope"]]
            counts = np.array([len(v) for v in ps])
            self._pv = np.concatenate(ps)
            self._pstart = np.concatenate(([0], np.cumsum(counts)[:-1]))
            self._pseg = np.repeat(np.arange(len(ps)), counts)
            self._prange = np.arange(len(self._pv))

    def support_rows(self, Y):
        Y = np.asarray(Y, dtype=float)
        out = np.empty((self.n, self.d))
        idx = self._idx
        if "point" in idx:
            out[idx["point"]] = self._pts
        if "ball" in idx:
            A = Y[idx["ball"]]
            na = np.sqrt(np.einsum("ij,ij->i", A, A))
            safe = np.where(na > 0, na, 1.0)
            out[idx["ball"]] = self._bc + (self._br / safe)[:, None] * A * (na > 0)[:, None]
        if "aabb" in idx:
            A = Y[idx["aabb"]]
            out[idx["aabb"]] = np.where(A > 0, self._hi, np.where(A < 0, self._lo, self._mid))
        if "ellipsoid" in idx:
            A = Y[idx["ellipsoid"]]
            QA = np.einsum("kij,kj->ki", self._eQ, A)
            q = np.einsum("ij,ij->i", A, QA)
            pos = q > 0
            scale = np.where(pos, 1.0 / np.sqrt(np.where(pos, q, 1.0)), 0.0)
            out[idx["ellipsoid"]] = self._ec + scale[:, None] * QA
        if "polytope" in idx:
            A = Y[idx["polytope"]]
            scores = np.einsum("ij,ij->i", self._pv, A[self._pseg])
            best = np.maximum.reduceat(scores, self._pstart)
            hit = np.where(scores == best[self._pseg], self._prange, len(self._pv))
            out[idx["polytope"]] = self._pv[np.minimum.reduceat(hit, self._pstart)]
        return out

    def support_common(self, a):
        """Row ``i`` is ``objs[i].support(a)`` for one shared direction ``a``."""
        a = np.asarray(a, dtype=float)
        out = np.empty((self.n, self.d))
        idx = self._idx
        if "point" in idx:
            out[idx["point"]] = self._pts
        if "ball" in idx:
            na = float(np.sqrt(a @ a))
            out[idx["ball"]] = self._bc + (self._br[:, None] * (a / na) if na > 0 else 0.0)
        if "aabb" in idx:
            out[idx["aabb"]] = np.where(a > 0, self._hi, np.where(a < 0, self._lo, self._mid))
        if "ellipsoid" in idx:
            QA = self._eQ @ a
            q = QA @ a
            pos = q > 0
            scale = np.where(pos, 1.0 / np.sqrt(np.where(pos, q, 1.0)), 0.0)
            out[idx["ellipsoid"]] = self._ec + scale[:, None] * QA
        if "polytope" in idx:
            scores = self._pv @ a
            best = np.maximum.reduceat(scores, self._pstart)
            hit = np.where(scores == best[self._pseg], self._prange, len(self._pv))
            out[idx["polytope"]] = self._pv[np.minimum.reduceat(hit, self._pstart)]
        return out

    @property
    def iterative(self):
        """Indices of objects whose projection is iterative (polytopes, ellipsoids)."""
        parts = [self._idx[k] for k in ("polytope", "ellipsoid") if k in self._idx]
        return np.sort(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.intp)

    def project_closed_form(self, x):
        """Projections of ``x`` onto every point, ball and box (and degenerate polytope).

        Returns ``(P, dist)`` of shape (n, d) and (n,); rows of iterative
        objects are left as NaN.
        """
        x = np.asarray(x, dtype=float)
        P = np.full((self.n, self.d), np.nan)
        dist = np.full(self.n, np.nan)
        idx = self._idx
        if "point" in idx:
            P[idx["point"]] = self._pts
            dist[idx["point"]] = np.linalg.norm(self._pts - x, axis=1)
        if "ball" in idx:
            u = x - self._bc
            nu = np.linalg.norm(u, axis=1)
            out = nu > self._br
            scale = np.where(out, self._br / np.where(out, nu, 1.0), 1.0)
            P[idx["ball"]] = np.where(out[:, None], self._bc + scale[:, None] * u, x)
            dist[idx["ball"]] = np.where(out, nu - self._br, 0.0)
        if "aabb" in idx:
            p = np.clip(x, self._lo, self._hi)
            P[idx["aabb"]] = p
            dist[idx["aabb"]] = np.linalg.norm(x - p, axis=1)
        return P, dist
