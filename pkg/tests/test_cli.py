import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from speedprof.cli import main
from speedprof.problemfile import ProblemFileError, load_problem, parse_problem, read_profile_csv

from conftest import CORPUS, PROBLEMS


def solve_to(tmp_path, problem, name="out.csv", extra=()):
    out = tmp_path / name
    assert main(["solve", str(problem), "-o", str(out), *extra]) == 0
    return out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return p


def base_problem(**over):
    raw = json.loads((PROBLEMS / "clothoid_switch.json").read_text())
    raw.update(over)
    return raw


@pytest.mark.parametrize("problem", CORPUS, ids=lambda p: p.stem)
def test_solve_validate_round_trip(tmp_path, problem, capsys):
    out = solve_to(tmp_path, problem)
    assert main(["validate", str(problem), str(out)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["satisfied"] is True
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["travel_time"] > 0
    for key in ("s0", "forward", "reverse", "boundary_status", "pieces"):
        assert key in meta


def test_fig2a_csv(tmp_path):
    out = solve_to(tmp_path, PROBLEMS / "fig2a_zero.json")
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["s", "x", "v", "a_tan", "a_norm", "active"]
    a = np.array([float(r["a_tan"]) for r in rows])
    assert set(a) == {1.5, -2.0}
    assert np.count_nonzero(np.diff(np.sign(a))) == 1
    assert {r["active"] for r in rows} == {"forward_accel", "reverse_decel"}
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["boundary_status"] == {"v0": "met", "vL": "met"}


def test_fig2c_touches_curvature_and_speed(tmp_path):
    out = solve_to(tmp_path, PROBLEMS / "fig2c_free.json")
    with open(out, newline="") as fh:
        active = {r["active"] for r in csv.DictReader(fh)}
    assert {"curvature", "speed_cap"} <= active


def test_csv_format(tmp_path):
    out = solve_to(tmp_path, PROBLEMS / "tanh_transition.json", extra=("--samples", "57"))
    raw = out.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    problem = load_problem(PROBLEMS / "tanh_transition.json")
    from speedprof.profile import solve
    prof = solve(problem.spec, problem.model, problem.tol)
    s_expect = prof.sample(57)
    arr = read_profile_csv(out)
    # shortest round-trip formatting: parsing gives back the exact doubles
    assert np.array_equal(arr[:, 0], s_expect)
    assert np.array_equal(arr[:, 1], prof.x(s_expect))
    for line in raw.decode().splitlines()[1:]:
        for field in line.split(",")[:5]:
            assert repr(float(field)) == field


def test_malformed_json(tmp_path, capsys):
    p = write(tmp_path, "bad.json", '{"path": {"kind": "polynomial",,}')
    assert main(["solve", str(p), "-o", str(tmp_path / "o.csv")]) == 2
    assert "line 1" in capsys.readouterr().err


@pytest.mark.parametrize("mutate, field", [
    (lambda r: r["limits"].pop("C"), "limits.C"),
    (lambda r: r["limits"].__setitem__("A", "fast"), "limits.A"),
    (lambda r: r["boundary"].__setitem__("v0", "sometimes"), "boundary.v0"),
    (lambda r: r["path"].__setitem__("expression", "spline"), "path.expression"),
    (lambda r: r.__setitem__("numerics", {"eps_q": 1}), "numerics.eps_q"),
])
def test_field_addressed_errors(tmp_path, capsys, mutate, field):
    raw = base_problem()
    mutate(raw)
    p = write(tmp_path, "p.json", raw)
    assert main(["solve", str(p), "-o", str(tmp_path / "o.csv")]) == 2
    assert field in capsys.readouterr().err


def test_nonpositive_limit_is_parse_error(tmp_path):
    raw = base_problem()
    raw["limits"]["B"] = 0
    assert main(["solve", str(write(tmp_path, "p.json", raw)), "-o", str(tmp_path / "o.csv")]) == 2


def test_non_monotone_exit_3(tmp_path):
    raw = base_problem(path={"kind": "polynomial", "x_coeffs": [0, 1], "y_coeffs": [0, 0, 1],
                             "tau_lo": -1, "tau_hi": 1})
    assert main(["solve", str(write(tmp_path, "p.json", raw)), "-o", str(tmp_path / "o.csv")]) == 3


def test_nonterminating_exit_4(tmp_path):
    raw = json.loads((PROBLEMS / "cubic_kappa_two_contacts.json").read_text())
    raw["numerics"] = {"max_sweep_iters": 1}
    assert main(["solve", str(write(tmp_path, "p.json", raw)), "-o", str(tmp_path / "o.csv")]) == 4


def test_equality_infeasible_exit_5(tmp_path):
    raw = base_problem(boundary={"v0": 10.0, "vL": "free"})
    assert main(["solve", str(write(tmp_path, "p.json", raw)), "-o", str(tmp_path / "o.csv")]) == 5


def test_scaled_profile_is_infeasible(tmp_path, capsys):
    problem = PROBLEMS / "fig2c_free.json"
    out = solve_to(tmp_path, problem)
    rows = list(csv.reader(out.open()))
    scaled = tmp_path / "scaled.csv"
    with open(scaled, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s", "x"])
        for r in rows[1:]:
            w.writerow([r[0], repr(1.5 * float(r[1]))])
    capsys.readouterr()
    assert main(["validate", str(problem), str(scaled)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert any(v["constraint"] == "state" for v in report["violations"])


def test_unsorted_csv(tmp_path):
    p = write(tmp_path, "u.csv", "s,x\n0.0,0.0\n2.0,1.0\n1.0,1.0\n")
    assert main(["validate", str(PROBLEMS / "clothoid_switch.json"), str(p)]) == 2
    with pytest.raises(ProblemFileError, match="line 4"):
        read_profile_csv(p)


def test_csv_missing_column(tmp_path):
    p = write(tmp_path, "m.csv", "s,y\n0,0\n1,1\n")
    assert main(["validate", str(PROBLEMS / "clothoid_switch.json"), str(p)]) == 2


def test_oracle_command(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["oracle", str(PROBLEMS / "fig2a_zero.json"), "-n", "10000", "-o", str(out)]) == 0
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["dominance_ok"] is True
    assert meta["max_excess"] <= 2 * 2.0 * meta["ds"]
    assert len(read_profile_csv(out)) == 10000


def test_oracle_triangle_travel_time(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["oracle", str(PROBLEMS / "triangle_near_straight.json"), "-n", "1001", "-o", str(out)]) == 0
    meta = json.loads(out.with_suffix(".json").read_text())
    # the grid profile is exact up to the kink, so only the peak cell is off
    assert meta["j_diff"] <= 1e-3 * meta["j_exact"]


def test_oracle_single_node(tmp_path):
    assert main(["oracle", str(PROBLEMS / "fig2a_zero.json"), "-n", "1", "-o", str(tmp_path / "g.csv")]) == 2


def test_bad_arguments():
    assert main(["solve"]) == 2
    assert main(["frobnicate"]) == 2


def test_scan_points_env(monkeypatch):
    monkeypatch.setenv("SPEEDPROF_SCAN_POINTS", "300")
    assert load_problem(PROBLEMS / "fig2b_mixed.json").tol.scan_points == 300
    monkeypatch.setenv("SPEEDPROF_SCAN_POINTS", "lots")
    with pytest.raises(ProblemFileError):
        load_problem(PROBLEMS / "fig2b_mixed.json")


def test_boundary_forms():
    from speedprof.profile import Boundary
    for raw, expect in [(1.0, Boundary.fixed(1.0)), ("free", Boundary.free()),
                        ({"at_most": 2}, Boundary.at_most(2.0)), ({"fixed": 0.5}, Boundary.fixed(0.5))]:
        prob = parse_problem(base_problem(boundary={"v0": raw, "vL": "free"}))
        assert prob.spec.v0 == expect


def test_console_entry_point(tmp_path):
    out = tmp_path / "o.csv"
    r = subprocess.run([sys.executable, "-m", "speedprof.cli", "solve", str(PROBLEMS / "fig2a_zero.json"),
                        "-o", str(out)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert out.exists()
