"""Command line front end.

    speedprof solve <problem.json> -o <out.csv>
    speedprof validate <problem.json> <profile.csv>
    speedprof oracle <problem.json> -n <nodes> -o <out.csv>

Exit codes: 0 ok, 1 infeasible profile (validate), 2 parse error,
3 non-monotone curvature, 4 sweep did not terminate, 5 fixed boundary
speed unattainable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .errors import DegenerateCurve, EqualityInfeasible, InvalidLimits, MonotonicityViolation, SweepNonterminating
from .oracle import compare, grid_solve
from .problemfile import PROFILE_COLUMNS, ProblemFileError, load_problem, read_profile_csv, write_csv
from .profile import check_feasibility, equality_boundary_check, evaluate, solve

EXIT_OK, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_MONOTONE, EXIT_NONTERMINATING, EXIT_EQUALITY = 0, 1, 2, 3, 4, 5

log = logging.getLogger("speedprof")


def _sidecar(path: Path) -> Path:
    return path.with_suffix(".json")


def _sweep_summary(sweep) -> dict:
    fin = [x for x in sweep.c if x is not None], [x for x in sweep.a if x is not None]
    return {
        "direction": sweep.direction,
        "c": fin[0],
        "a": fin[1],
        "s0": sweep.s0,
        "path_coordinates": sweep.switch_points(),
        "diagnostics": sweep.diagnostics,
    }


def run_solve(problem_path, out_path, samples=None) -> int:
    problem = load_problem(problem_path)
    t0 = time.perf_counter()
    profile = solve(problem.spec, problem.model, problem.tol)
    elapsed = time.perf_counter() - t0
    n = samples or problem.samples
    rows = []
    for s in profile.sample(n):
        pt = evaluate(profile, float(s))
        rows.append((float(s), pt.x, pt.v, pt.a_tan, pt.a_norm, pt.active))
    out_path = Path(out_path)
    write_csv(out_path, PROFILE_COLUMNS, rows)
    meta = {
        "problem": str(problem_path),
        "L": profile.length,
        "s0": profile.forward.s0,
        "v0": profile.v0,
        "vL": profile.vL,
        "travel_time": profile.travel_time,
        "boundary_status": equality_boundary_check(profile, problem.spec),
        "forward": _sweep_summary(profile.forward),
        "reverse": _sweep_summary(profile.reverse),
        "pieces": [{"start": p.start, "end": p.end, "active": p.kind, "source": p.source} for p in profile.pieces],
        "solve_seconds": elapsed,
    }
    _sidecar(out_path).write_text(json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def run_validate(problem_path, csv_path) -> int:
    problem = load_problem(problem_path)
    samples = read_profile_csv(csv_path)
    report = check_feasibility(samples, problem.spec, problem.model, problem.tol)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.satisfied else EXIT_INFEASIBLE


def run_oracle(problem_path, n, out_path) -> int:
    if n < 2:
        raise ProblemFileError(f"-n: need at least 2 nodes, got {n}")
    problem = load_problem(problem_path)
    grid = grid_solve(problem.spec, problem.model, n)
    profile = solve(problem.spec, problem.model, problem.tol)
    cmp = compare(profile, grid)
    out_path = Path(out_path)
    write_csv(out_path, ("s", "x"), zip(grid.s.tolist(), grid.x.tolist()))
    bound = 2 * max(problem.spec.A, problem.spec.B) * grid.ds
    meta = dict(cmp.to_dict(), n=n, ds=grid.ds, dominance_bound=bound, dominance_ok=cmp.max_excess <= bound)
    _sidecar(out_path).write_text(json.dumps(meta, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="speedprof", description="Time-optimal speed profiles on monotone-curvature paths.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file and write the sampled profile")
    p.add_argument("problem")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--samples", type=int, default=None, help="uniform sample count (default from the problem file)")

    p = sub.add_parser("validate", help="check a profile CSV against the problem's limits")
    p.add_argument("problem")
    p.add_argument("profile")

    p = sub.add_parser("oracle", help="brute-force grid solution and comparison metrics")
    p.add_argument("problem")
    p.add_argument("-n", "--nodes", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "solve":
            return run_solve(args.problem, args.output, args.samples)
        if args.command == "validate":
            return run_validate(args.problem, args.profile)
        return run_oracle(args.problem, args.nodes, args.output)
    except (ProblemFileError, DegenerateCurve, InvalidLimits) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except MonotonicityViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MONOTONE
    except SweepNonterminating as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONTERMINATING
    except EqualityInfeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EQUALITY


if __name__ == "__main__":
    sys.exit(main())
