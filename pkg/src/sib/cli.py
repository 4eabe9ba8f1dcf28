"""``sib`` command line: solve a scene file and write the certified result."""

import argparse
import sys
import time

from .errors import SibError
from .geometry import Point
from .oracle import coreset_seb, subgradient_sib
from .scene import ResultFile, load_scene, serialize_result
from .solver import Termination, solve
from .svg import render_svg

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ITER_CAP = 2


def build_parser():
    parser = argparse.ArgumentParser(prog="sib", description="Smallest intersecting ball solver.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("solve", help="solve a scene file")
    p.add_argument("scene", help="scene JSON file")
    p.add_argument("--eps", type=float, help="relative tolerance (default 1e-3)")
    p.add_argument("--abs-tol", type=float, help="absolute radius floor (default 1e-9 * diameter)")
    p.add_argument("--max-iters", type=int, help="iteration cap")
    p.add_argument("--check-every", type=int, help="rounds between gap checks (default 16)")
    p.add_argument("--oracle", choices=("subgradient", "coreset", "none"), default="none",
                   help="cross-check against a reference solver")
    p.add_argument("--plot", metavar="SVG", help="write a drawing of the scene and solution (2-D only)")
    p.add_argument("--out", metavar="JSON", help="write the result here instead of stdout")
    p.add_argument("--quiet", action="store_true", help="no summary on stderr")
    p.add_argument("--no-timing", action="store_true", help="write wall_time_ms as 0 (reproducible output)")
    return parser


def _run_oracle(kind, objects):
    if kind == "coreset":
        if not all(isinstance(o, Point) for o in objects):
            raise SibError("--oracle coreset needs a scene of points only")
        return coreset_seb([o.p for o in objects], eps=1e-3)
    return subgradient_sib(objects, iters=2000, tol=1e-6)


def _solve(args):
    scene = load_scene(args.scene)
    params = scene.solver_params(eps=args.eps, abs_tol=args.abs_tol, max_iters=args.max_iters,
                                 check_every=args.check_every)
    start = time.perf_counter()
    sol = solve(scene.objects, params)
    elapsed = 0.0 if args.no_timing else 1e3 * (time.perf_counter() - start)
    text = serialize_result(ResultFile.from_solution(sol, elapsed))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.plot:
        svg = render_svg(scene.objects, sol)
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(svg)
    if not args.quiet:
        print(f"sib: {sol.terminated.value} after {sol.iterations} iterations, radius {sol.radius:.12g}, "
              f"lower bound {sol.lower_bound:.12g}", file=sys.stderr)
    if args.oracle != "none":
        ref = _run_oracle(args.oracle, scene.objects)
        diff = abs(sol.radius - ref.radius) / max(ref.radius, 1e-300) if ref.radius > 0 else sol.radius
        print(f"solver:  radius {sol.radius:.12g}  center {list(map(float, sol.center))}", file=sys.stderr)
        print(f"oracle ({args.oracle}):  radius {ref.radius:.12g}  center {list(map(float, ref.center))}",
              file=sys.stderr)
        print(f"relative difference: {diff:.3e}", file=sys.stderr)
    return EXIT_ITER_CAP if sol.terminated is Termination.ITER_CAP else EXIT_OK


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return _solve(args)
    except (SibError, OSError) as exc:
        print(f"sib: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run_cli())
