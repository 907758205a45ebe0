"""Time-optimal speed profile: pointwise minimum of both sweeps and the speed cap."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .errors import EqualityInfeasible, InfiniteTime, InvalidLimits, OutOfDomain
from .geometry import CurvatureModel, check_strict_monotonicity
from .numerics import Tolerances, bisect_root, integrate
from .sweep import ACCEL, SweepProfile, SweepSegment, forward_sweep, reverse_sweep

FIXED, AT_MOST, FREE = "fixed", "at_most", "free"

FORWARD, REVERSE, SPEED_CAP = "forward", "reverse", "speed_cap"
KIND_FORWARD_ACCEL = "forward_accel"
KIND_REVERSE_DECEL = "reverse_decel"
KIND_CURVATURE = "curvature"
KIND_SPEED_CAP = "speed_cap"

# relative slack used only for labelling ties between sources
_TIE_REL = 1e-12


@dataclass(frozen=True)
class Boundary:
    mode: str
    speed: Optional[float] = None

    def __post_init__(self):
        if self.mode not in (FIXED, AT_MOST, FREE):
            raise ValueError(f"unknown boundary mode {self.mode!r}")
        if self.mode != FREE:
            if self.speed is None or not self.speed >= 0 or not math.isfinite(self.speed):
                raise ValueError(f"{self.mode} boundary needs a finite speed >= 0")

    @classmethod
    def fixed(cls, w: float) -> "Boundary":
        return cls(FIXED, float(w))

    @classmethod
    def at_most(cls, w: float) -> "Boundary":
        return cls(AT_MOST, float(w))

    @classmethod
    def free(cls) -> "Boundary":
        return cls(FREE)


@dataclass(frozen=True)
class ProblemSpec:
    """Limits, boundary conditions and path length.

    ``A`` max tangential acceleration, ``B`` max braking, ``C`` max normal
    acceleration (all m/s^2), ``V`` max speed (m/s), ``L`` path length (m).
    """

    A: float
    B: float
    C: float
    V: float
    L: float
    v0: Boundary = field(default_factory=Boundary.free)
    vL: Boundary = field(default_factory=Boundary.free)

    def __post_init__(self):
        for name in ("A", "B", "C", "V", "L"):
            val = getattr(self, name)
            if not (val > 0 and math.isfinite(val)):
                raise InvalidLimits(f"{name} must be positive and finite, got {val!r}")

    def reflected(self) -> "ProblemSpec":
        """The same problem on the path traversed backwards."""
        return replace(self, A=self.B, B=self.A, v0=self.vL, vL=self.v0)


def resolve_boundaries(spec: ProblemSpec, model: CurvatureModel) -> tuple[float, float]:
    """Numeric boundary speeds ``(v0, vL)``; a free end becomes ``min(sqrt(C/|kappa|), V)``."""

    def one(b: Boundary, s: float) -> float:
        if b.mode != FREE:
            return b.speed
        k = abs(float(model.kappa(s)))
        return spec.V if k == 0.0 else min(math.sqrt(spec.C / k), spec.V)

    return one(spec.v0, 0.0), one(spec.vL, model.length)


@dataclass(frozen=True)
class Piece:
    """Interval ``[start, end)`` on which one source realises the minimum."""

    start: float
    end: float
    source: str
    kind: str
    segment: Optional[SweepSegment] = None


class ProfilePoint(NamedTuple):
    x: float
    v: float
    a_tan: float
    a_norm: float
    active: str
    source: str


@dataclass(frozen=True)
class SpeedProfile:
    spec: ProblemSpec
    model: CurvatureModel
    forward: SweepProfile
    reverse: SweepProfile
    pieces: tuple
    v0: float
    vL: float
    tol: Tolerances

    @property
    def length(self) -> float:
        return self.model.length

    @property
    def breakpoints(self) -> list:
        return [p.start for p in self.pieces] + [self.pieces[-1].end]

    def x(self, s):
        """Speed squared, ``min(x_F, x_R, V^2)``; accepts arrays."""
        out = np.minimum(np.minimum(self.forward(s), self.reverse(s)), self.spec.V ** 2)
        return float(out) if np.ndim(out) == 0 else out

    __call__ = x

    def piece_at(self, s: float) -> Piece:
        """Piece active immediately to the right of ``s`` (the last piece at ``s = L``)."""
        starts = [p.start for p in self.pieces]
        i = bisect.bisect_right(starts, s) - 1
        return self.pieces[max(0, min(i, len(self.pieces) - 1))]

    def evaluate(self, s: float) -> ProfilePoint:
        return evaluate(self, s)

    def sample(self, n: int, include_breakpoints: bool = True) -> np.ndarray:
        """``n`` uniform arc-length samples, merged with all breakpoints."""
        L = self.length
        s = np.linspace(0.0, L, n)
        if include_breakpoints:
            bps = np.array(self.breakpoints)
            spacing = L / max(n - 1, 1)
            # drop uniform samples that nearly coincide with a breakpoint
            near = np.min(np.abs(s[:, None] - bps[None, :]), axis=1) < 1e-9 * spacing
            s = np.union1d(s[~near], bps)
        return s

    @cached_property
    def travel_time(self) -> float:
        return travel_time(self, self.tol)


def _source_funcs(F: SweepProfile, fseg, R: SweepProfile, rseg, V2: float):
    def fF(s):
        return F.segment_value(fseg, s)

    def fR(s):
        return R.segment_value(rseg, s)

    return fF, fR, (lambda s: V2)


def _crossing(g, l: float, r: float) -> Optional[float]:
    gl, gr = float(g(l)), float(g(r))
    if math.isnan(gl) or math.isnan(gr):
        return None
    if gl < 0 < gr:
        return bisect_root(g, l, r)
    if gl > 0 > gr:
        return bisect_root(lambda s: -g(s), l, r)
    return None


def _label(xf: float, xr: float, V2: float) -> str:
    lo = min(xf, xr)
    if V2 <= lo * (1 + _TIE_REL):
        return SPEED_CAP
    if xf <= xr * (1 + _TIE_REL):
        return FORWARD
    return REVERSE


def _segment_containing(segs, m):
    for a, b, seg in segs:
        if a <= m < b:
            return seg
    return segs[-1][2]


def _build_pieces(F: SweepProfile, R: SweepProfile, V2: float) -> tuple:
    L = F.length
    fsegs, rsegs = F.path_segments(), R.path_segments()
    cuts = sorted({0.0, L, *[p for a, b, _ in fsegs for p in (a, b)], *[p for a, b, _ in rsegs for p in (a, b)]})
    cuts = [c for c in cuts if 0.0 <= c <= L]
    pieces: list[Piece] = []
    for l, r in zip(cuts[:-1], cuts[1:]):
        if r <= l:
            continue
        m = 0.5 * (l + r)
        fseg, rseg = _segment_containing(fsegs, m), _segment_containing(rsegs, m)
        fF, fR, fV = _source_funcs(F, fseg, R, rseg, V2)
        sub = {l, r}
        for g in (lambda s: fF(s) - fR(s), lambda s: fF(s) - V2, lambda s: fR(s) - V2):
            root = _crossing(g, l, r)
            if root is not None and l < root < r:
                sub.add(root)
        sub = sorted(sub)
        for a, b in zip(sub[:-1], sub[1:]):
            mid = 0.5 * (a + b)
            src = _label(float(fF(mid)), float(fR(mid)), V2)
            if src == SPEED_CAP:
                piece = Piece(a, b, SPEED_CAP, KIND_SPEED_CAP)
            elif src == FORWARD:
                kind = KIND_FORWARD_ACCEL if fseg.kind == ACCEL else KIND_CURVATURE
                piece = Piece(a, b, FORWARD, kind, fseg)
            else:
                kind = KIND_REVERSE_DECEL if rseg.kind == ACCEL else KIND_CURVATURE
                piece = Piece(a, b, REVERSE, kind, rseg)
            prev = pieces[-1] if pieces else None
            if prev and prev.source == piece.source and prev.segment is piece.segment and prev.kind == piece.kind:
                pieces[-1] = replace(prev, end=b)
            else:
                pieces.append(piece)
    return tuple(pieces)


def solve(spec: ProblemSpec, model: CurvatureModel, tol: Optional[Tolerances] = None) -> SpeedProfile:
    """Globally time-optimal speed-squared profile for a monotone-curvature path."""
    if abs(spec.L - model.length) > 1e-9 * max(spec.L, model.length):
        raise ValueError(f"spec.L={spec.L!r} does not match the curvature model length {model.length!r}")
    tol = tol or Tolerances.for_problem(model.length, spec.V)
    if not model.certified:
        model = check_strict_monotonicity(model, tol)
    v0, vL = resolve_boundaries(spec, model)
    F = forward_sweep(model, spec.A, spec.C, v0, tol)
    R = reverse_sweep(model, spec.B, spec.C, vL, tol)
    pieces = _build_pieces(F, R, spec.V ** 2)
    profile = SpeedProfile(spec, model, F, R, pieces, v0, vL, tol)
    status = equality_boundary_check(profile, spec, tol)
    for end, st in status.items():
        if st == "infeasible":
            w = spec.v0.speed if end == "v0" else spec.vL.speed
            xe = profile.x(0.0 if end == "v0" else model.length)
            raise EqualityInfeasible(
                f"fixed boundary {end}={w!r} cannot be met: the maximal feasible speed there is {math.sqrt(xe)!r}"
            )
    return profile


def _piece_slope(profile: SpeedProfile, piece: Piece, s):
    if piece.source == SPEED_CAP:
        return 0.0
    sweep = profile.forward if piece.source == FORWARD else profile.reverse
    return float(sweep.segment_slope(piece.segment, s))


def evaluate(profile: SpeedProfile, s: float) -> ProfilePoint:
    """Kinematics at ``s``; derivatives are right-hand at breakpoints."""
    L = profile.length
    if not 0.0 <= s <= L:
        raise OutOfDomain(f"s={s!r} outside [0, {L}]")
    x = profile.x(s)
    piece = profile.piece_at(s)
    slope = _piece_slope(profile, piece, s)
    return ProfilePoint(
        x=x,
        v=math.sqrt(max(x, 0.0)),
        a_tan=0.5 * slope,
        a_norm=x * abs(float(profile.model.kappa(s))),
        active=piece.kind,
        source=piece.source,
    )


def travel_time(profile: SpeedProfile, tol: Optional[Tolerances] = None) -> float:
    """Travel time ``int ds / sqrt(x)`` summed piece by piece.

    Line pieces use the exact antiderivative, so zero speed at an endpoint is
    harmless; curvature pieces integrate ``sqrt(|kappa| / C)`` adaptively.
    """
    tol = tol or profile.tol
    C, V = profile.spec.C, profile.spec.V
    total = 0.0
    for p in profile.pieces:
        if p.kind == KIND_SPEED_CAP:
            total += (p.end - p.start) / V
        elif p.kind == KIND_CURVATURE:
            kappa = profile.model.kappa
            total += integrate(lambda s: math.sqrt(abs(float(kappa(s))) / C), p.start, p.end, tol)
        else:
            sweep = profile.forward if p.source == FORWARD else profile.reverse
            xl = max(float(sweep.segment_value(p.segment, p.start)), 0.0)
            xr = max(float(sweep.segment_value(p.segment, p.end)), 0.0)
            if xl == 0.0 and xr == 0.0:
                raise InfiniteTime(f"zero speed on [{p.start}, {p.end}]")
            slope = float(sweep.segment_slope(p.segment, p.start))
            total += 2.0 * (math.sqrt(xr) - math.sqrt(xl)) / slope
    return total


@dataclass(frozen=True)
class Violation:
    constraint: str
    s: float
    excess: float


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of :func:`check_feasibility`.

    ``worst`` maps each constraint to its tightest sample (``excess <= 0``
    means slack); ``violations`` lists samples beyond tolerance.
    """

    satisfied: bool
    violations: tuple
    worst: dict
    grid_spacing: float

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "violations": [v.__dict__ for v in self.violations],
            "worst": {k: v.__dict__ for k, v in self.worst.items()},
            "grid_spacing": self.grid_spacing,
        }


def check_feasibility(samples, spec: ProblemSpec, model: CurvatureModel, tol: Optional[Tolerances] = None,
                      slope_tol: float = 1e-6) -> FeasibilityReport:
    """Check sampled ``(s, x)`` pairs against the speed and acceleration limits.

    Slopes between consecutive samples are compared with ``[-2B, 2A]``; a
    slope excess counts only if it is above ``slope_tol`` and the implied value
    mismatch is above ``tol.eps_x`` (so that samples a hair apart do not turn
    rounding noise into violations).
    """
    tol = tol or Tolerances.for_problem(model.length, spec.V)
    arr = np.asarray(samples, dtype=float)
    s, x = arr[:, 0], arr[:, 1]
    if np.any(np.diff(s) < 0):
        raise ValueError("samples must be sorted by s")
    v0, vL = resolve_boundaries(spec, model)
    with np.errstate(divide="ignore", over="ignore"):
        limit = np.minimum(spec.C / np.abs(model.kappa(s)), spec.V ** 2)

    worst: dict = {}
    violations: list = []

    def record(name, excess_arr, where, ok_mask):
        if len(excess_arr) == 0:
            return
        i = int(np.argmax(excess_arr))
        worst[name] = Violation(name, float(where[i]), float(excess_arr[i]))
        for j in np.nonzero(~ok_mask)[0]:
            violations.append(Violation(name, float(where[j]), float(excess_arr[j])))

    e0 = np.array([x[0] - v0 * v0])
    record("initial_speed", e0, s[:1], e0 <= tol.eps_x)
    eL = np.array([x[-1] - vL * vL])
    record("final_speed", eL, s[-1:], eL <= tol.eps_x)
    es = x - limit
    record("state", es, s, es <= tol.eps_x)
    en = -x
    record("nonnegative", en, s, en <= tol.eps_x)

    ds = np.diff(s)
    dx = np.diff(x)
    keep = ds > 0
    ds, dx, mid = ds[keep], dx[keep], s[:-1][keep]
    slope = dx / ds
    up = slope - 2 * spec.A
    down = -2 * spec.B - slope
    up_ok = (up <= slope_tol) | (dx - 2 * spec.A * ds <= tol.eps_x)
    down_ok = (down <= slope_tol) | (-2 * spec.B * ds - dx <= tol.eps_x)
    record("max_acceleration", up, mid, up_ok)
    record("max_braking", down, mid, down_ok)

    spacing = float(np.max(ds)) if len(ds) else math.inf
    return FeasibilityReport(not violations, tuple(violations), worst, spacing)


def equality_boundary_check(profile: SpeedProfile, spec: ProblemSpec, tol: Optional[Tolerances] = None) -> dict:
    """Whether fixed boundary speeds are attained: ``met``, ``infeasible`` or ``not_applicable``.

    The optimal profile dominates every feasible one, so if it misses a fixed
    end speed then no feasible profile can hit it.
    """
    tol = tol or profile.tol
    out = {}
    for name, b, s in (("v0", spec.v0, 0.0), ("vL", spec.vL, profile.length)):
        if b.mode != FIXED:
            out[name] = "not_applicable"
        else:
            out[name] = "met" if abs(profile.x(s) - b.speed ** 2) <= tol.eps_x else "infeasible"
    return out


def sample_table(profile: SpeedProfile, n: int) -> list[tuple]:
    """Rows ``(s, x, v, a_tan, a_norm, active, source)`` at :meth:`SpeedProfile.sample` points."""
    return [(float(s),) + tuple(evaluate(profile, float(s))) for s in profile.sample(n)]
