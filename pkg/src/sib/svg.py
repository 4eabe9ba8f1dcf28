"""Deterministic SVG drawings of planar scenes: input objects in blue, the ball in red."""

import numpy as np

from .errors import UnsupportedDimension
from .geometry import Aabb, Ball, Ellipsoid, Point, Polytope

BLUE = "#1f4fd8"
RED = "#d62728"


def _num(x):
    s = "%.6g" % float(x)
    return "0" if s == "-0" else s


def convex_hull_2d(points):
    """Monotone-chain hull, counter-clockwise, without repeated points."""
    pts = sorted({(float(x), float(y)) for x, y in points})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _bbox(obj):
    if isinstance(obj, Point):
        return obj.p, obj.p
    if isinstance(obj, Ball):
        return obj.center - obj.radius, obj.center + obj.radius
    if isinstance(obj, Aabb):
        return obj.lo, obj.hi
    if isinstance(obj, Polytope):
        return obj.vertices.min(axis=0), obj.vertices.max(axis=0)
    half = np.sqrt(np.diag(obj.shape))
    return obj.center - half, obj.center + half


def render_svg(objects, solution=None, width=480):
    """SVG text for a 2-D scene and, optionally, a solution (center, radius, witnesses)."""
    objects = list(getattr(objects, "objects", objects))
    if any(o.dim != 2 for o in objects):
        raise UnsupportedDimension("SVG rendering needs a 2-D scene")

    boxes = [_bbox(o) for o in objects]
    if solution is not None:
        c = np.asarray(solution.center, dtype=float)
        boxes.append((c - solution.radius, c + solution.radius))
    lo = np.min([b[0] for b in boxes], axis=0)
    hi = np.max([b[1] for b in boxes], axis=0)
    span = hi - lo
    ref = float(span.max()) if span.max() > 0 else 1.0
    span = np.where(span > 0, span, ref)
    pad = 0.1 * span
    lo, hi = lo - pad, hi + pad
    w, h = hi - lo
    dot = 0.01 * max(w, h)
    height = max(1, int(round(width * h / w)))

    def xy(p):
        return _num(p[0]), _num(-p[1])

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_num(lo[0])} {_num(-hi[1])} {_num(w)} {_num(h)}">',
        '<g fill="none" stroke-width="1" vector-effect="non-scaling-stroke">',
    ]
    stroke = f'stroke="{BLUE}" vector-effect="non-scaling-stroke"'
    for o in objects:
        if isinstance(o, Point) or (isinstance(o, Polytope) and o.degenerate):
            x, y = xy(o.representative())
            out.append(f'<circle class="object" cx="{x}" cy="{y}" r="{_num(dot)}" fill="{BLUE}"/>')
        elif isinstance(o, Ball):
            x, y = xy(o.center)
            out.append(f'<circle class="object" cx="{x}" cy="{y}" r="{_num(o.radius)}" {stroke}/>')
        elif isinstance(o, Aabb):
            x, y = xy((o.lo[0], o.hi[1]))
            out.append(f'<rect class="object" x="{x}" y="{y}" width="{_num(o.hi[0] - o.lo[0])}" '
                       f'height="{_num(o.hi[1] - o.lo[1])}" {stroke}/>')
        elif isinstance(o, Polytope):
            pts = " ".join(",".join(xy(p)) for p in convex_hull_2d(o.vertices))
            out.append(f'<polygon class="object" points="{pts}" {stroke}/>')
        elif isinstance(o, Ellipsoid):
            L = o.eigvecs * np.sqrt(o.eigvals)
            m = (L[0, 0], -L[1, 0], L[0, 1], -L[1, 1], o.center[0], -o.center[1])
            out.append(f'<circle class="object" cx="0" cy="0" r="1" '
                       f'transform="matrix({" ".join(_num(v) for v in m)})" {stroke}/>')
    if solution is not None:
        x, y = xy(solution.center)
        out.append(f'<circle class="solution" cx="{x}" cy="{y}" r="{_num(solution.radius)}" '
                   f'stroke="{RED}" vector-effect="non-scaling-stroke"/>')
        for wpt in solution.witnesses:
            x, y = xy(wpt)
            out.append(f'<circle class="witness" cx="{x}" cy="{y}" r="{_num(dot)}" fill="{RED}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
