"""Scalar numerical kernels: first-crossing search, quadrature, unimodal minimisation.

Functions passed to these kernels should accept numpy arrays; scalar-only
callables are also accepted and are evaluated element by element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy import integrate as _integrate

from .errors import NonFinite

ScalarFn = Callable[[float], float]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances.

    ``eps_s`` is an arc-length tolerance (m), ``eps_x`` a speed-squared
    tolerance (m^2/s^2). Use :meth:`for_problem` to get the defaults scaled to a
    path of length ``L`` and speed cap ``V``.
    """

    eps_s: float = 1e-12
    eps_x: float = 1e-9
    quad_rel: float = 1e-10
    max_sweep_iters: int = 64
    scan_points: int = 2048

    def __post_init__(self):
        if not (self.eps_s > 0 and self.eps_x > 0 and self.quad_rel > 0):
            raise ValueError("eps_s, eps_x and quad_rel must be positive")
        if self.max_sweep_iters < 1:
            raise ValueError("max_sweep_iters must be >= 1")
        if self.scan_points < 2:
            raise ValueError("scan_points must be >= 2")

    @classmethod
    def for_problem(cls, L: float, V: Optional[float] = None, **overrides) -> "Tolerances":
        # eps_s is kept well below eps_x / (2 max slope) so that switch-point
        # location error never shows up as a value discontinuity above eps_x.
        base = {"eps_s": 1e-12 * L}
        if V is not None and math.isfinite(V):
            base["eps_x"] = 1e-9 * V * V
        base.update(overrides)
        return cls(**base)

    def with_overrides(self, **kw) -> "Tolerances":
        return replace(self, **kw)


def eval_many(f: ScalarFn, xs: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, falling back to a Python loop."""
    xs = np.asarray(xs, dtype=float)
    try:
        out = np.asarray(f(xs), dtype=float)
        if out.shape == xs.shape:
            return out
        if out.shape == ():
            return np.full(xs.shape, float(out))
    except (TypeError, ValueError):
        pass
    return np.array([float(f(float(x))) for x in xs.ravel()]).reshape(xs.shape)


def bisect_root(f: ScalarFn, lo: float, hi: float, xtol: float = 0.0, threshold: float = 0.0) -> float:
    """Locate the boundary between ``f <= threshold`` (at lo) and ``f > threshold`` (at hi).

    The bracket is halved until its width is at most ``xtol`` or until it
    cannot be split any further in floating point; the midpoint is returned.
    Non-finite values are fine as long as their sign is meaningful.
    """
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) > threshold:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def find_first_sign_change(
    f: ScalarFn,
    lo: float,
    hi: float,
    tol: Tolerances,
    *,
    threshold: float = 0.0,
    right_open: bool = False,
) -> Optional[float]:
    """Smallest ``s`` in ``[lo, hi]`` after which ``f`` becomes positive.

    This realises ``inf {s : f(s) > threshold}``: a uniform scan with
    ``tol.scan_points`` samples finds the first positive sample, then bisection
    refines the crossing to ``tol.eps_s``. Returns ``lo`` when ``f(lo)`` is
    already positive and ``None`` when no sample is positive (the empty-set
    infimum). With ``right_open`` the endpoint ``hi`` is excluded from the set.

    Sign changes narrower than ``(hi - lo) / scan_points`` can be missed; see
    :func:`scan_crossings` for a diagnostic.
    """
    if hi < lo:
        raise ValueError("lo must not exceed hi")
    if hi == lo:
        if right_open:
            return None
        return lo if f(lo) > threshold else None
    grid = np.linspace(lo, hi, tol.scan_points)
    vals = eval_many(f, grid)
    positive = vals > threshold
    if right_open:
        positive[-1] = False
    if not positive.any():
        return None
    i = int(np.argmax(positive))
    if i == 0:
        return lo
    return bisect_root(f, float(grid[i - 1]), float(grid[i]), tol.eps_s, threshold)


def scan_crossings(f: ScalarFn, lo: float, hi: float, tol: Tolerances) -> tuple[np.ndarray, float]:
    """Approximate sign-change locations of ``f`` seen by the scan and their minimum gap.

    Returns ``(crossings, min_gap)`` with ``min_gap = inf`` when fewer than two
    crossings are observed. A ``min_gap`` close to the scan spacing means
    narrower features may have been missed.
    """
    grid = np.linspace(lo, hi, tol.scan_points)
    sgn = np.sign(eval_many(f, grid))
    idx = np.nonzero(sgn[1:] * sgn[:-1] < 0)[0]
    crossings = 0.5 * (grid[idx] + grid[idx + 1])
    gap = float(np.min(np.diff(crossings))) if len(crossings) > 1 else math.inf
    return crossings, gap


def integrate(f: ScalarFn, lo: float, hi: float, tol: Tolerances) -> float:
    """Adaptive Gauss-Kronrod quadrature with relative error ``tol.quad_rel``."""
    if hi < lo:
        raise ValueError("lo must not exceed hi")
    if hi == lo:
        return 0.0

    def checked(x):
        y = float(f(x))
        if not math.isfinite(y):
            raise NonFinite(f"integrand is {y} at {x!r}")
        return y

    value, _ = _integrate.quad(checked, lo, hi, epsabs=0.0, epsrel=tol.quad_rel, limit=200)
    return value


def argmin_scalar(f: ScalarFn, lo: float, hi: float, tol: Tolerances) -> float:
    """Minimiser of a unimodal ``f`` on ``[lo, hi]``: scan, then golden-section.

    Endpoint minimisers are returned exactly.
    """
    if hi <= lo:
        return lo
    grid = np.linspace(lo, hi, tol.scan_points)
    vals = eval_many(f, grid)
    i = int(np.argmin(vals))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, len(grid) - 1)])
    while b - a > tol.eps_s:
        c = b - _INV_PHI * (b - a)
        d = a + _INV_PHI * (b - a)
        if c <= a or d >= b:
            break
        if f(c) < f(d):
            b = d
        else:
            a = c
    best = 0.5 * (a + b)
    fbest = f(best)
    if f(lo) <= fbest:
        return lo
    if f(hi) <= fbest:
        return hi
    return best
