"""The two-sweep construction of speed-squared profiles.

A sweep walks along the path in the direction of decreasing unsigned
curvature, alternating between riding the normal-acceleration boundary
``C / |kappa(s)|`` and accelerating flat out along a line of slope ``2A``.
The reverse sweep is the same procedure on the reflected path, with the
result mapped back through ``s -> L - s``.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidLimits, OutOfDomain, SweepNonterminating
from .geometry import CurvatureModel, check_strict_monotonicity
from .numerics import Tolerances, find_first_sign_change

log = logging.getLogger(__name__)

CURVATURE = "curvature"
ACCEL = "accel"

# Switch conditions are evaluated in a normalised, pole-free form; a value must
# exceed this many ulps before it counts as positive so that rounding at a
# freshly placed switch point cannot re-trigger it.
_SWITCH_THRESHOLD = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class SweepSegment:
    """One piece of a sweep, in the sweep's own arc-length coordinate.

    ``kind`` is ``"curvature"`` (value ``C/|kappa|``) or ``"accel"`` (value
    ``anchor_x + slope * (s - anchor_s)``).
    """

    s_start: float
    s_end: float
    kind: str
    anchor_s: float = math.nan
    anchor_x: float = math.nan
    slope: float = math.nan

    def line(self, s):
        return self.anchor_x + self.slope * (s - self.anchor_s)


@dataclass(frozen=True)
class SweepProfile:
    """Result of one sweep.

    ``segments``, ``c``, ``a`` and ``s0`` live in the sweep coordinate: for a
    reverse sweep that is ``L - s``. ``None`` entries in ``c``/``a`` stand for
    the empty-set infimum (infinity). Calling the profile evaluates it in path
    coordinates.
    """

    model: CurvatureModel
    segments: tuple
    c: tuple
    a: tuple
    s0: float
    direction: str
    rate: float
    C: float
    v_boundary: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def length(self) -> float:
        return self.model.length

    @property
    def sweep_model(self) -> CurvatureModel:
        return self.model if self.direction == "forward" else self.model.reflected()

    def _to_sweep(self, s):
        return s if self.direction == "forward" else self.length - s

    def __call__(self, s):
        return evaluate_sweep(self, s)

    def path_segments(self) -> list:
        """Segments as ``(start, end, segment)`` in path coordinates, ascending."""
        L = self.length
        if self.direction == "forward":
            return [(seg.s_start, seg.s_end, seg) for seg in self.segments]
        return [(L - seg.s_end, L - seg.s_start, seg) for seg in reversed(self.segments)]

    def switch_points(self) -> dict:
        """Finite switch points in path coordinates."""
        fin = lambda xs: [self._to_sweep(x) for x in xs if x is not None]
        return {"c": fin(self.c), "a": fin(self.a), "s0": self._to_sweep(self.s0)}

    def segment_value(self, seg: SweepSegment, s):
        """Value of ``seg`` at path coordinate ``s`` (array ok)."""
        t = self._to_sweep(np.asarray(s, dtype=float))
        if seg.kind == ACCEL:
            return seg.line(t)
        with np.errstate(divide="ignore", over="ignore"):
            return self.C / np.abs(self.model.kappa(s))

    def segment_slope(self, seg: SweepSegment, s):
        """Derivative ``dx/ds`` of ``seg`` in path coordinates."""
        sign = 1.0 if self.direction == "forward" else -1.0
        if seg.kind == ACCEL:
            return sign * seg.slope + 0.0 * np.asarray(s, dtype=float)
        k = self.model.kappa(s)
        kp = self.model.kappa_prime(s)
        return -np.sign(k) * self.C * kp / k**2


def find_s0(model: CurvatureModel, tol: Optional[Tolerances] = None) -> float:
    """The unique minimiser of ``|kappa|``: its zero if it changes sign, else an endpoint."""
    tol = tol or Tolerances.for_problem(model.length)
    L = model.length
    k0, kL = float(model.kappa(0.0)), float(model.kappa(L))
    if k0 == 0.0:
        return 0.0
    if kL == 0.0:
        return L
    if k0 * kL < 0:
        return brentq(lambda s: float(model.kappa(s)), 0.0, L,
                      xtol=min(tol.eps_s, 1e-15 * L), rtol=4 * np.finfo(float).eps)
    return 0.0 if abs(k0) < abs(kL) else L


def _check_limits(rate, C, v):
    if not (rate > 0 and math.isfinite(rate)):
        raise InvalidLimits(f"acceleration limit must be positive, got {rate!r}")
    if not (C > 0 and math.isfinite(C)):
        raise InvalidLimits(f"normal acceleration limit must be positive, got {C!r}")
    if not v >= 0:
        raise InvalidLimits(f"boundary speed must be non-negative, got {v!r}")


def _sweep(model: CurvatureModel, A: float, C: float, v0: float, tol: Tolerances):
    """Run the sweep on ``model`` in its own coordinate; returns (segments, c, a, s0)."""
    L = model.length
    s0 = find_s0(model, tol)
    kappa, kappa_prime = model.kappa, model.kappa_prime

    def accel_exceeded(s):
        # sign of C|k'|/k^2 - 2A, cleared of the pole at kappa = 0
        k2 = 2.0 * A * np.asarray(kappa(s)) ** 2
        ck = C * np.abs(kappa_prime(s))
        return (ck - k2) / (ck + k2 + 1e-300)

    def line_above_bound(anchor_s, anchor_x):
        # sign of x_k(s) - C/|k|, cleared of the pole at kappa = 0
        def h(s):
            return ((anchor_x + 2.0 * A * (s - anchor_s)) * np.abs(kappa(s)) - C) / C
        return h

    def first(f, lo):
        if lo >= s0:
            return None
        return find_first_sign_change(f, lo, s0, tol, threshold=_SWITCH_THRESHOLD, right_open=True)

    c: list = [0.0]
    a: list = []
    anchors: list = []
    k0 = abs(float(kappa(0.0)))
    if k0 == 0.0 or v0 * v0 < C / k0:
        a.append(0.0)
        anchors.append((0.0, v0 * v0))
        c.append(first(line_above_bound(0.0, v0 * v0), 0.0))
    k = len(c) - 1
    while c[k] is not None:
        if k >= tol.max_sweep_iters:
            raise SweepNonterminating(
                f"sweep did not terminate after {tol.max_sweep_iters} switches (last switch at s={c[k]!r})"
            )
        ak = first(accel_exceeded, c[k])
        a.append(ak)
        if ak is not None:
            xa = C / abs(float(kappa(ak)))
            anchors.append((ak, xa))
            c.append(first(line_above_bound(ak, xa), ak))
        else:
            anchors.append(None)
            c.append(None)
        k += 1

    segments = []
    for n in range(k):
        cn, an = c[n], a[n]
        end_curv = L if an is None else an
        if end_curv > cn:
            segments.append(SweepSegment(cn, end_curv, CURVATURE))
        if an is not None:
            end_line = L if c[n + 1] is None else c[n + 1]
            if end_line > an:
                s_a, x_a = anchors[n]
                segments.append(SweepSegment(an, end_line, ACCEL, s_a, x_a, 2.0 * A))
    if not segments:
        # v0 exactly on the bound and the search interval empty
        segments.append(SweepSegment(0.0, L, CURVATURE))
    return tuple(segments), tuple(c), tuple(a), s0


def _diagnostics(c, a, tol, L):
    pts = sorted({x for x in c + a if x is not None})
    gaps = np.diff(pts)
    # a line that touches the bound tangentially leaves it again at once;
    # such pairs coincide up to the root tolerance and are not a resolution issue
    touching = gaps <= 8 * tol.eps_s
    distinct = gaps[~touching]
    gap = float(np.min(distinct)) if len(distinct) else math.inf
    spacing = L / (tol.scan_points - 1)
    if gap < 4 * spacing:
        log.warning("switch points %.3g apart, close to the scan spacing %.3g; narrower features may be missed",
                    gap, spacing)
    return {"min_switch_gap": gap, "scan_spacing": spacing, "touching_pairs": int(np.sum(touching))}


def _certified(model, tol):
    return model if model.certified else check_strict_monotonicity(model, tol)


def forward_sweep(model: CurvatureModel, A: float, C: float, v0: float,
                  tol: Optional[Tolerances] = None) -> SweepProfile:
    """Forward sweep from ``s = 0`` with acceleration limit ``A`` and initial speed ``v0``."""
    A, C, v0 = float(A), float(C), float(v0)
    _check_limits(A, C, v0)
    tol = tol or Tolerances.for_problem(model.length)
    model = _certified(model, tol)
    segments, c, a, s0 = _sweep(model, A, C, v0, tol)
    return SweepProfile(model, segments, c, a, s0, "forward", A, C, v0, _diagnostics(c, a, tol, model.length))


def reverse_sweep(model: CurvatureModel, B: float, C: float, vL: float,
                  tol: Optional[Tolerances] = None) -> SweepProfile:
    """Reverse sweep: a forward sweep of the reflected path, mapped back.

    The stored segments and switch points are in the reflected coordinate.
    """
    B, C, vL = float(B), float(C), float(vL)
    _check_limits(B, C, vL)
    tol = tol or Tolerances.for_problem(model.length)
    model = _certified(model, tol)
    segments, c, a, s0 = _sweep(model.reflected(), B, C, vL, tol)
    return SweepProfile(model, segments, c, a, s0, "reverse", B, C, vL, _diagnostics(c, a, tol, model.length))


def _locate(profile: SweepProfile, t: np.ndarray) -> np.ndarray:
    starts = np.array([seg.s_start for seg in profile.segments])
    return np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(starts) - 1)


def evaluate_sweep(profile: SweepProfile, s):
    """Speed squared of a sweep at path coordinate ``s`` (scalar or array).

    Returns ``inf`` only on a curvature segment where ``kappa`` vanishes.
    """
    s_arr = np.asarray(s, dtype=float)
    L = profile.length
    if np.any((s_arr < 0) | (s_arr > L)) or np.any(np.isnan(s_arr)):
        raise OutOfDomain(f"s outside [0, {L}]")
    t = profile._to_sweep(s_arr)
    idx = _locate(profile, t)
    out = np.empty(np.shape(t), dtype=float)
    is_line = np.array([seg.kind == ACCEL for seg in profile.segments])[idx]
    anchor_s = np.array([seg.anchor_s for seg in profile.segments])[idx]
    anchor_x = np.array([seg.anchor_x for seg in profile.segments])[idx]
    slope = np.array([seg.slope for seg in profile.segments])[idx]
    out = np.where(is_line, anchor_x + slope * (t - anchor_s), 0.0)
    if np.any(~is_line):
        with np.errstate(divide="ignore", over="ignore"):
            bound = profile.C / np.abs(np.asarray(profile.model.kappa(s_arr), dtype=float))
        out = np.where(is_line, out, bound)
    return float(out) if np.ndim(out) == 0 else out


def segment_at(profile: SweepProfile, s: float) -> SweepSegment:
    """The segment active just to the right of path coordinate ``s``."""
    segs = profile.path_segments()
    starts = [p[0] for p in segs]
    i = max(0, min(bisect.bisect_right(starts, s) - 1, len(segs) - 1))
    return segs[i][2]
