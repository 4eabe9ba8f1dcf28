"""Scene and result files.

A scene is a JSON document::

    {"dimension": 2,
     "objects": [{"type": "ball", "center": [0, 0], "radius": 1},
                 {"type": "ball", "center": [10, 0], "radius": 1}],
     "params": {"eps": 1e-3}}

Unknown keys are rejected. Reals are written with 17 significant digits so
that every double survives a write/read cycle unchanged.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvalidInput, InvalidObject, SceneSyntaxError
from .geometry import Aabb, Ball, Ellipsoid, Point, Polytope
from .solver import SolverParams, Termination

OBJECT_FIELDS = {
    "point": ("p",),
    "ball": ("center", "radius"),
    "aabb": ("lo", "hi"),
    "polytope": ("vertices",),
    "ellipsoid": ("center", "shape"),
}
PARAM_FIELDS = {"eps": float, "abs_tol": float, "max_iters": int, "check_every": int,
                "seed": int, "step_scale": float}
RESULT_FIELDS = ("center", "radius", "lower_bound", "eps_achieved", "iterations",
                 "terminated", "witnesses", "wall_time_ms")


@dataclass
class Scene:
    dimension: int
    objects: list
    params: dict = field(default_factory=dict)

    def solver_params(self, **overrides):
        merged = dict(self.params)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return SolverParams(**merged)


@dataclass
class ResultFile:
    center: list
    radius: float
    lower_bound: float
    eps_achieved: float
    iterations: int
    terminated: str
    witnesses: list
    wall_time_ms: float

    @classmethod
    def from_solution(cls, sol, wall_time_ms=0.0):
        return cls(
            center=[float(c) for c in sol.center],
            radius=float(sol.radius),
            lower_bound=float(sol.lower_bound),
            eps_achieved=float(sol.eps_achieved),
            iterations=int(sol.iterations),
            terminated=Termination(sol.terminated).value,
            witnesses=[[float(c) for c in w] for w in sol.witnesses],
            wall_time_ms=float(wall_time_ms),
        )


# --- encoding -------------------------------------------------------------

def format_real(x):
    x = float(x)
    if not math.isfinite(x):
        return "null"
    s = "%.17g" % x
    if all(ch not in s for ch in ".en"):
        s += ".0"
    return s


def _encode(v, indent, level):
    pad = " " * (indent * (level + 1))
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(val, indent, level + 1)}" for k, val in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * (indent * level) + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        parts = [_encode(e, indent, level + 1) for e in v]
        if any(isinstance(e, (dict, list, tuple, np.ndarray)) for e in v) and len(v) > 1:
            return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + " " * (indent * level) + "]"
        return "[" + ", ".join(parts) + "]"
    if isinstance(v, (bool, np.bool_)) or v is None:
        return json.dumps(None if v is None else bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_real(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError(f"cannot encode {type(v).__name__}")


def dumps(value, indent=2):
    """Deterministic JSON text with reals at 17 significant digits."""
    return _encode(value, indent, 0) + "\n"


def object_to_record(obj):
    if isinstance(obj, Point):
        return {"type": "point", "p": obj.p}
    if isinstance(obj, Ball):
        return {"type": "ball", "center": obj.center, "radius": obj.radius}
    if isinstance(obj, Aabb):
        return {"type": "aabb", "lo": obj.lo, "hi": obj.hi}
    if isinstance(obj, Polytope):
        return {"type": "polytope", "vertices": obj.vertices}
    if isinstance(obj, Ellipsoid):
        return {"type": "ellipsoid", "center": obj.center, "shape": obj.shape}
    raise TypeError(f"unknown object {obj!r}")


def serialize_scene(scene):
    doc = {"dimension": scene.dimension, "objects": [object_to_record(o) for o in scene.objects]}
    if scene.params:
        doc["params"] = dict(scene.params)
    return dumps(doc)


def serialize_result(result):
    return dumps({name: getattr(result, name) for name in RESULT_FIELDS})


# --- decoding -------------------------------------------------------------

def _reject_constant(token):
    raise ValueError(f"non-finite literal {token}")


def _load(text):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SceneSyntaxError(f"not UTF-8: {exc}") from exc
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except (json.JSONDecodeError, ValueError) as exc:
        raise SceneSyntaxError(f"invalid JSON: {exc}") from exc


def _is_number(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _real_array(value, ndim, index, name):
    try:
        arr = np.array(value, dtype=object)
    except ValueError as exc:
        raise InvalidObject(f"ragged array: {exc}", index, name) from exc
    if arr.ndim != ndim or arr.size == 0 or not all(_is_number(x) for x in arr.flat):
        raise InvalidObject(f"expected a non-empty {ndim}-D array of numbers", index, name)
    out = arr.astype(float)
    if not np.all(np.isfinite(out)):
        raise InvalidObject("non-finite entries", index, name)
    return out


def _parse_object(rec, index, d):
    if not isinstance(rec, dict):
        raise InvalidObject("object record must be a JSON object", index)
    kind = rec.get("type")
    if kind not in OBJECT_FIELDS:
        raise InvalidObject(f"unknown type {kind!r}", index, "type")
    allowed = OBJECT_FIELDS[kind]
    for key in rec:
        if key != "type" and key not in allowed:
            raise InvalidObject(f"unknown field for {kind}", index, key)
    for key in allowed:
        if key not in rec:
            raise InvalidObject(f"missing field for {kind}", index, key)

    def vec(name):
        v = _real_array(rec[name], 1, index, name)
        if v.size != d:
            raise DimensionMismatch(f"has dimension {v.size}, scene dimension is {d}", index, name)
        return v

    try:
        if kind == "point":
            return Point(vec("p"))
        if kind == "ball":
            r = rec["radius"]
            if not _is_number(r):
                raise InvalidObject("radius must be a number", index, "radius")
            return Ball(vec("center"), r)
        if kind == "aabb":
            return Aabb(vec("lo"), vec("hi"))
        if kind == "polytope":
            V = _real_array(rec["vertices"], 2, index, "vertices")
            if V.shape[1] != d:
                raise DimensionMismatch(f"vertices have dimension {V.shape[1]}, scene dimension is {d}",
                                        index, "vertices")
            return Polytope(V)
        Q = _real_array(rec["shape"], 2, index, "shape")
        if Q.shape != (d, d):
            raise InvalidObject(f"shape must be {d}x{d}, got {Q.shape[0]}x{Q.shape[1]}", index, "shape")
        return Ellipsoid(vec("center"), Q)
    except (InvalidObject, DimensionMismatch):
        raise
    except InvalidInput as exc:
        raise InvalidObject(str(exc), index) from exc


def _parse_params(raw):
    if not isinstance(raw, dict):
        raise SceneSyntaxError("params must be a JSON object", field="params")
    out = {}
    for key, value in raw.items():
        if key not in PARAM_FIELDS:
            raise SceneSyntaxError("unknown solver parameter", field=f"params.{key}")
        kind = PARAM_FIELDS[key]
        ok = _is_number(value) and (kind is float or float(value).is_integer())
        if not ok:
            raise SceneSyntaxError(f"expected a {kind.__name__}", field=f"params.{key}")
        out[key] = kind(value)
    try:
        SolverParams(**out)
    except InvalidInput as exc:
        raise SceneSyntaxError(str(exc), field="params") from exc
    return out


def parse_scene(text):
    """Parse and validate scene text; raises a SceneError subclass naming the culprit."""
    doc = _load(text)
    if not isinstance(doc, dict):
        raise SceneSyntaxError("top level must be a JSON object")
    for key in doc:
        if key not in ("dimension", "objects", "params"):
            raise SceneSyntaxError("unknown top-level field", field=key)
    d = doc.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise SceneSyntaxError("dimension must be a positive integer", field="dimension")
    objs = doc.get("objects")
    if not isinstance(objs, list) or not objs:
        raise SceneSyntaxError("objects must be a non-empty list", field="objects")
    objects = [_parse_object(rec, i, d) for i, rec in enumerate(objs)]
    params = _parse_params(doc.get("params", {}))
    return Scene(dimension=d, objects=objects, params=params)


def load_scene(path):
    with open(path, "rb") as fh:
        return parse_scene(fh.read())


def parse_result(text):
    doc = _load(text)
    if not isinstance(doc, dict) or set(doc) != set(RESULT_FIELDS):
        raise SceneSyntaxError(f"result must have exactly the fields {', '.join(RESULT_FIELDS)}")

    def real(x):
        return math.inf if x is None else float(x)

    return ResultFile(
        center=[float(c) for c in doc["center"]],
        radius=real(doc["radius"]),
        lower_bound=real(doc["lower_bound"]),
        eps_achieved=real(doc["eps_achieved"]),
        iterations=int(doc["iterations"]),
        terminated=Termination(doc["terminated"]).value,
        witnesses=[[float(c) for c in w] for w in doc["witnesses"]],
        wall_time_ms=real(doc["wall_time_ms"]),
    )
