"""Grid-oracle refinement study over the problem corpus.

For each problem file and each node count, prints the dominance margin, the
max deviation from the exact profile, its reduction factor per 10x
refinement and the travel-time gap.

    python3 scripts/refinement_study.py [problems/*.json] [--nodes 1000 10000 100000] [--json out.json]
"""

import argparse
import json
import time
from pathlib import Path

from speedprof.oracle import compare, grid_solve
from speedprof.problemfile import load_problem
from speedprof.profile import solve

ROOT = Path(__file__).resolve().parents[1]


def study(path, nodes):
    problem = load_problem(path)
    profile = solve(problem.spec, problem.model, problem.tol)
    spec = problem.spec
    rows = []
    for n in nodes:
        t0 = time.perf_counter()
        grid = grid_solve(spec, problem.model, n)
        cmp = compare(profile, grid)
        rows.append(dict(
            n=n,
            ds=grid.ds,
            max_excess=cmp.max_excess,
            bound=2 * max(spec.A, spec.B) * grid.ds,
            max_abs_dev=cmp.max_abs_dev,
            j_exact=cmp.j_exact,
            j_rel=cmp.j_diff / cmp.j_exact,
            seconds=time.perf_counter() - t0,
        ))
    for prev, cur in zip(rows, rows[1:]):
        cur["ratio"] = prev["max_abs_dev"] / cur["max_abs_dev"] if cur["max_abs_dev"] > 0 else float("inf")
    return {"problem": path.stem, "eps_x": problem.tol.eps_x, "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("problems", nargs="*", type=Path)
    ap.add_argument("--nodes", nargs="+", type=int, default=[1000, 10000, 100000])
    ap.add_argument("--json", type=Path)
    args = ap.parse_args()
    paths = args.problems or sorted((ROOT / "problems").glob("*.json"))
    results = []
    for path in paths:
        res = study(path, args.nodes)
        results.append(res)
        print(f"{res['problem']}  (eps_x = {res['eps_x']:.3g})")
        print(f"  {'n':>7} {'excess/bound':>13} {'max|dev|':>11} {'ratio':>9} {'rel dJ':>10} {'sec':>6}")
        for r in res["rows"]:
            ratio = f"{r['ratio']:9.3g}" if "ratio" in r else " " * 9
            print(f"  {r['n']:>7} {r['max_excess'] / r['bound']:13.3g} {r['max_abs_dev']:11.3g} {ratio} "
                  f"{r['j_rel']:10.3g} {r['seconds']:6.2f}")
    if args.json:
        args.json.write_text(json.dumps(results, indent=2) + "\n")


if __name__ == "__main__":
    main()
