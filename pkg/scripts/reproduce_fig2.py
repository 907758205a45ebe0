"""Solve the four cubic-path cases (a)-(d) and write their plot data.

Each case writes ``<out>/<case>.csv`` (s, x, v, a_tan, a_norm, active) and
prints the active-constraint structure and travel time.

    python3 scripts/reproduce_fig2.py [--out fig2_data] [--samples 2001]
"""

import argparse
from pathlib import Path

from speedprof.cli import run_solve
from speedprof.problemfile import load_problem
from speedprof.profile import solve

ROOT = Path(__file__).resolve().parents[1]
CASES = {
    "a": "fig2a_zero",
    "b": "fig2b_mixed",
    "c": "fig2c_free",
    "d": "fig2d_bounded",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("fig2_data"))
    ap.add_argument("--samples", type=int, default=2001)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for panel, name in CASES.items():
        path = ROOT / "problems" / f"{name}.json"
        run_solve(path, args.out / f"{name}.csv", args.samples)
        p = load_problem(path)
        prof = solve(p.spec, p.model, p.tol)
        b = p.spec
        print(f"case ({panel}) v0={b.v0.mode}:{b.v0.speed} vL={b.vL.mode}:{b.vL.speed}  J={prof.travel_time:.6f} s")
        for q in prof.pieces:
            print(f"    [{q.start:9.5f}, {q.end:9.5f}]  {q.kind}")
    print(f"data written to {args.out}/")


if __name__ == "__main__":
    main()
