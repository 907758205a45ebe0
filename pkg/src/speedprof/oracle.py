"""Brute-force grid oracle used to validate the exact construction.

On a uniform grid, the largest discretely feasible speed-squared profile is
obtained by clamping forward against the acceleration limit and then backward
against the braking limit. It converges to the exact optimum as the grid is
refined, and never lies far above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import CurvatureModel
from .profile import ProblemSpec, SpeedProfile, resolve_boundaries


@dataclass(frozen=True)
class GridSolution:
    ds: float
    s: np.ndarray
    x: np.ndarray
    spec: ProblemSpec
    v0: float
    vL: float

    @property
    def n(self) -> int:
        return len(self.s)


def node_limits(spec: ProblemSpec, model: CurvatureModel, s: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.minimum(spec.C / np.abs(np.asarray(model.kappa(s), dtype=float)), spec.V ** 2)


def clamp_passes(s, limits, x0_max: float, xn_max: float, up: float, down: float) -> np.ndarray:
    """Forward clamp ``x[i] <- min(lim[i], x[i-1] + up*ds)`` then backward ``x[i] <- min(x[i], x[i+1] + down*ds)``.

    ``up`` and ``down`` are slopes (``2A`` and ``2B``). Each clamped value is
    computed from the node where the current line started rather than from its
    neighbour, which is the same recurrence without accumulated rounding.
    """
    s = [float(v) for v in s]
    x = [float(v) for v in limits]
    n = len(x)
    x[0] = min(x[0], x0_max)
    anchor = 0
    for i in range(1, n):
        cand = x[anchor] + up * (s[i] - s[anchor])
        if cand < x[i]:
            x[i] = cand
        else:
            anchor = i
    x[-1] = min(x[-1], xn_max)
    anchor = n - 1
    for i in range(n - 2, -1, -1):
        cand = x[anchor] + down * (s[anchor] - s[i])
        if cand < x[i]:
            x[i] = cand
        else:
            anchor = i
    return np.array(x)


def grid_solve(spec: ProblemSpec, model: CurvatureModel, n: int) -> GridSolution:
    """Pointwise-maximal grid-feasible profile on ``n`` uniform nodes."""
    if n < 2:
        raise ValueError("need at least two grid nodes")
    L = model.length
    s = np.linspace(0.0, L, n)
    ds = L / (n - 1)
    v0, vL = resolve_boundaries(spec, model)
    x = clamp_passes(s, node_limits(spec, model, s), v0 * v0, vL * vL, 2 * spec.A, 2 * spec.B)
    return GridSolution(ds, s, x, spec, v0, vL)


def grid_travel_time(grid: GridSolution) -> float:
    """Exact travel time of the piecewise-linear interpolant of the grid values.

    On each cell ``int ds / sqrt(x) = 2 ds / (sqrt(x_i) + sqrt(x_{i+1}))``,
    which stays finite when one end of the cell is at rest.
    """
    r = np.sqrt(np.maximum(grid.x, 0.0))
    denom = r[:-1] + r[1:]
    if np.any(denom == 0):
        return math.inf
    return float(np.sum(2.0 * grid.ds / denom))


@dataclass(frozen=True)
class Comparison:
    max_abs_dev: float
    max_excess: float
    j_exact: float
    j_grid: float

    @property
    def j_diff(self) -> float:
        return abs(self.j_exact - self.j_grid)

    def to_dict(self) -> dict:
        return {
            "max_abs_dev": self.max_abs_dev,
            "max_excess": self.max_excess,
            "j_exact": self.j_exact,
            "j_grid": self.j_grid,
            "j_diff": self.j_diff,
        }


def compare(profile: SpeedProfile, grid: GridSolution) -> Comparison:
    """Grid-vs-exact deviation at the nodes plus the travel-time gap."""
    xs = profile.x(grid.s)
    diff = grid.x - xs
    return Comparison(float(np.max(np.abs(diff))), float(np.max(diff)), profile.travel_time, grid_travel_time(grid))
