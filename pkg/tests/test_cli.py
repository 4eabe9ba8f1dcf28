import json
import subprocess
import sys

import pytest

from sib.cli import run_cli
from sib.scene import parse_result

TWO_BALLS = {"dimension": 2, "objects": [{"type": "ball", "center": [0, 0], "radius": 1},
                                         {"type": "ball", "center": [10, 0], "radius": 1}]}
MIXED = {"dimension": 2, "objects": [
    {"type": "ball", "center": [0, 0], "radius": 1},
    {"type": "ellipsoid", "center": [6, 1], "shape": [[2, 0.7], [0.7, 1]]},
    {"type": "polytope", "vertices": [[2, 5], [3, 7], [1, 6]]},
    {"type": "aabb", "lo": [4, -5], "hi": [5, -3]}]}
SQUARE = {"dimension": 2, "objects": [{"type": "point", "p": p} for p in ([0, 0], [2, 0], [0, 2], [2, 2])]}


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def test_solve_two_balls(write, capsys):
    code = run_cli(["solve", write("two_balls.json", TWO_BALLS), "--eps", "1e-3"])
    out, err = capsys.readouterr()
    assert code == 0
    res = parse_result(out)
    assert res.radius == pytest.approx(4.0, rel=1e-3)
    assert res.terminated == "EpsReached"
    assert "EpsReached" in err


def test_bad_scene_exits_one(write, capsys):
    code = run_cli(["solve", write("bad.json", {"dimension": 2, "objects": [
        {"type": "ball", "center": [0, 0], "radius": -1}]})])
    out, err = capsys.readouterr()
    assert code == 1 and out == ""
    assert "object 0" in err and "radius" in err


def test_missing_file_and_bad_args(tmp_path, capsys):
    assert run_cli(["solve", str(tmp_path / "nope.json")]) == 1
    assert run_cli(["solve"]) == 1
    assert run_cli(["solve", "x.json", "--oracle", "exact"]) == 1
    capsys.readouterr()


def test_iteration_cap_exits_two(write, capsys):
    code = run_cli(["solve", write("m.json", MIXED), "--eps", "1e-9", "--max-iters", "20", "--quiet"])
    out, err = capsys.readouterr()
    assert code == 2 and err == ""
    assert parse_result(out).terminated == "IterCap"


def test_oracle_comparison(write, capsys):
    code = run_cli(["solve", write("square.json", SQUARE), "--oracle", "subgradient", "--quiet"])
    _, err = capsys.readouterr()
    assert code == 0
    assert "solver:" in err and "oracle (subgradient):" in err and "relative difference" in err


def test_coreset_oracle_requires_points(write, capsys):
    assert run_cli(["solve", write("s.json", SQUARE), "--oracle", "coreset", "--quiet"]) == 0
    assert run_cli(["solve", write("b.json", TWO_BALLS), "--oracle", "coreset", "--quiet"]) == 1
    capsys.readouterr()


def test_out_and_plot_files(write, tmp_path, capsys):
    out_path, svg_path = tmp_path / "r.json", tmp_path / "r.svg"
    code = run_cli(["solve", write("b.json", TWO_BALLS), "--out", str(out_path), "--plot", str(svg_path),
                    "--no-timing", "--quiet"])
    out, _ = capsys.readouterr()
    assert code == 0 and out == ""
    res = parse_result(out_path.read_text())
    assert res.wall_time_ms == 0.0
    assert svg_path.read_text().count('class="witness"') == 2


def test_plot_in_3d_is_an_input_error(write, tmp_path, capsys):
    doc = {"dimension": 3, "objects": [{"type": "point", "p": [0, 0, 0]}]}
    assert run_cli(["solve", write("p.json", doc), "--plot", str(tmp_path / "x.svg"), "--quiet"]) == 1
    capsys.readouterr()


def test_params_from_scene_and_overrides(write, capsys):
    doc = dict(MIXED, params={"max_iters": 5, "eps": 1e-9})
    assert run_cli(["solve", write("s.json", doc), "--quiet"]) == 2
    assert run_cli(["solve", write("s.json", doc), "--quiet", "--eps", "1e-2", "--max-iters", "100000"]) == 0
    capsys.readouterr()


def test_module_entry_point(write):
    proc = subprocess.run([sys.executable, "-m", "sib", "solve", write("b.json", TWO_BALLS), "--quiet"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert parse_result(proc.stdout).radius == pytest.approx(4.0, rel=1e-3)
