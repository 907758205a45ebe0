"""Planar paths, arc-length reparametrisation and curvature models."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import PchipInterpolator

from .errors import DegenerateCurve, MonotonicityViolation
from .numerics import Tolerances, eval_many, integrate

_GL_X, _GL_W = leggauss(20)
_TABLE_PANELS = 256
_NEWTON_STEPS = 4
_MIN_SPEED = 1e-12


@dataclass(frozen=True)
class ParametricCurve:
    """``r(tau) = (x(tau), y(tau))`` with polynomial components.

    Coefficients are in ascending order, as for :class:`numpy.polynomial.Polynomial`.
    """

    x_coeffs: tuple
    y_coeffs: tuple
    tau_lo: float
    tau_hi: float

    def __post_init__(self):
        object.__setattr__(self, "x_coeffs", tuple(float(c) for c in self.x_coeffs))
        object.__setattr__(self, "y_coeffs", tuple(float(c) for c in self.y_coeffs))
        if not self.tau_lo < self.tau_hi:
            raise ValueError("tau_lo must be < tau_hi")

    @property
    def x(self) -> Polynomial:
        return Polynomial(self.x_coeffs)

    @property
    def y(self) -> Polynomial:
        return Polynomial(self.y_coeffs)

    def point(self, tau):
        return self.x(tau), self.y(tau)

    def derivatives(self, tau):
        """``(x', y', x'', y'', x''', y''')`` at ``tau``."""
        x, y = self.x, self.y
        out = []
        for _ in range(3):
            x, y = x.deriv(), y.deriv()
            out += [x(tau), y(tau)]
        return tuple(out)

    def speed(self, tau):
        return np.hypot(self.x.deriv()(tau), self.y.deriv()(tau))


@dataclass(frozen=True)
class FunctionCurve:
    """A smooth curve given by a callable returning its first three derivatives.

    Only meant for non-polynomial reference curves such as circles.
    """

    derivs: Callable
    tau_lo: float
    tau_hi: float

    def derivatives(self, tau):
        return self.derivs(np.asarray(tau, dtype=float))

    def speed(self, tau):
        d = self.derivatives(tau)
        return np.hypot(d[0], d[1])


def circle(radius: float, tau_lo: float = 0.0, tau_hi: float = 2 * math.pi) -> FunctionCurve:
    """``(R cos tau, R sin tau)``, counter-clockwise, curvature ``1/R``."""
    R = float(radius)

    def derivs(t):
        c, s = np.cos(t), np.sin(t)
        return (-R * s, R * c, -R * c, -R * s, R * s, -R * c)

    return FunctionCurve(derivs, tau_lo, tau_hi)


def cubic_path(beta: float = 3 * math.sqrt(5.0)) -> ParametricCurve:
    """``r(tau) = (beta tau, tau^3)`` on ``[-1, 1]``.

    ``beta = 3 sqrt(5)`` makes the signed curvature strictly increasing.
    """
    return ParametricCurve((0.0, beta), (0.0, 0.0, 0.0, 1.0), -1.0, 1.0)


def check_regular(curve, n: int = 4097) -> None:
    taus = np.linspace(curve.tau_lo, curve.tau_hi, n)
    sp = curve.speed(taus)
    if np.min(sp) < _MIN_SPEED:
        i = int(np.argmin(sp))
        raise DegenerateCurve(f"tangent vanishes near tau={taus[i]!r}")


def curvature_of_parametric(curve, tau):
    """Signed curvature ``(x'y'' - y'x'') / (x'^2 + y'^2)^(3/2)`` at ``tau``.

    Equal to ``det[r' r'']`` when the parametrisation has unit speed.
    """
    dx, dy, ddx, ddy, _, _ = curve.derivatives(tau)
    d = np.asarray(dx * dx + dy * dy, dtype=float)
    if np.any(d < _MIN_SPEED**2):
        raise DegenerateCurve(f"curve is not regular at tau={tau!r}")
    k = (dx * ddy - dy * ddx) / d**1.5
    return float(k) if np.ndim(k) == 0 else k


def curvature_tau_derivative(curve, tau):
    """``d kappa / d tau`` from the exact curve derivatives."""
    dx, dy, ddx, ddy, d3x, d3y = curve.derivatives(tau)
    num = dx * ddy - dy * ddx
    dnum = dx * d3y - dy * d3x
    den = dx * dx + dy * dy
    dden = 2.0 * (dx * ddx + dy * ddy)
    return dnum / den**1.5 - 1.5 * num * dden / den**2.5


def arclength(curve, tau: float, tol: Optional[Tolerances] = None) -> float:
    """Arc length from ``curve.tau_lo`` to ``tau``."""
    tol = tol or Tolerances()
    if not curve.tau_lo <= tau <= curve.tau_hi:
        raise ValueError(f"tau={tau!r} outside [{curve.tau_lo}, {curve.tau_hi}]")
    if min(curve.speed(tau), curve.speed(curve.tau_lo)) < _MIN_SPEED:
        raise DegenerateCurve("curve is not regular at an integration endpoint")
    return integrate(curve.speed, curve.tau_lo, tau, tol)


@dataclass(frozen=True)
class ArcLengthMap:
    """Monotone ``(tau, s)`` table with accurate evaluation in both directions.

    Between table nodes ``s(tau)`` is a 20-point Gauss-Legendre integral of the
    speed from the nearest node below. ``tau(s)`` starts from a monotone cubic
    interpolant of the table and is polished with Newton steps.
    """

    curve: object
    taus: np.ndarray
    s_values: np.ndarray
    _inverse: PchipInterpolator = field(repr=False, compare=False)

    @property
    def length(self) -> float:
        return float(self.s_values[-1])

    @classmethod
    def build(cls, curve, tol: Optional[Tolerances] = None, panels: int = _TABLE_PANELS) -> "ArcLengthMap":
        tol = tol or Tolerances()
        check_regular(curve)
        taus = np.linspace(curve.tau_lo, curve.tau_hi, panels + 1)
        pieces = [integrate(curve.speed, float(a), float(b), tol) for a, b in zip(taus[:-1], taus[1:])]
        s_values = np.concatenate([[0.0], np.cumsum(pieces)])
        if np.any(np.diff(s_values) <= 0):
            raise DegenerateCurve("arc length is not strictly increasing")
        return cls(curve, taus, s_values, PchipInterpolator(s_values, taus))

    def s_of_tau(self, tau):
        tau = np.asarray(tau, dtype=float)
        j = np.clip(np.searchsorted(self.taus, tau, side="right") - 1, 0, len(self.taus) - 2)
        a = self.taus[j]
        half = 0.5 * (tau - a)
        nodes = a[..., None] + half[..., None] * (_GL_X + 1.0)
        out = self.s_values[j] + half * np.sum(_GL_W * self.curve.speed(nodes), axis=-1)
        return float(out) if out.ndim == 0 else out

    def tau_of_s(self, s):
        s = np.asarray(s, dtype=float)
        tau = np.asarray(self._inverse(np.clip(s, 0.0, self.length)), dtype=float)
        for _ in range(_NEWTON_STEPS):
            tau = tau - (self.s_of_tau(tau) - s) / self.curve.speed(tau)
            tau = np.clip(tau, self.curve.tau_lo, self.curve.tau_hi)
        return float(tau) if tau.ndim == 0 else tau


@dataclass(frozen=True)
class CurvatureModel:
    """Signed curvature ``kappa(s)`` and ``kappa'(s)`` on ``[0, length]``.

    Both callables accept floats or numpy arrays. ``direction`` is
    ``"increasing"`` or ``"decreasing"`` once certified by
    :func:`check_strict_monotonicity`, and ``None`` before.
    """

    kappa: Callable
    kappa_prime: Callable
    length: float
    direction: Optional[str] = None
    source: str = "analytic"
    description: str = ""

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("path length must be positive")

    @property
    def certified(self) -> bool:
        return self.direction is not None

    def reflected(self) -> "CurvatureModel":
        """Model of ``kappa(L - s)``, i.e. the path traversed backwards."""
        L, k, kp = self.length, self.kappa, self.kappa_prime
        flip = {"increasing": "decreasing", "decreasing": "increasing"}.get(self.direction)
        return CurvatureModel(
            kappa=lambda s: k(L - np.asarray(s, dtype=float)),
            kappa_prime=lambda s: -kp(L - np.asarray(s, dtype=float)),
            length=L,
            direction=flip,
            source=self.source,
            description=f"reflected({self.description})",
        )


def analytic_model(kappa: Callable, kappa_prime: Callable, L: float, description: str = "") -> CurvatureModel:
    return CurvatureModel(kappa, kappa_prime, float(L), None, "analytic", description)


def linear_curvature(k0: float, k1: float, L: float) -> CurvatureModel:
    """``kappa(s) = k0 + k1 s`` (a clothoid)."""
    return analytic_model(
        lambda s: k0 + k1 * np.asarray(s, dtype=float),
        lambda s: k1 + 0.0 * np.asarray(s, dtype=float),
        L,
        f"linear(k0={k0!r}, k1={k1!r})",
    )


def polynomial_curvature(coeffs: Sequence[float], L: float) -> CurvatureModel:
    p = Polynomial([float(c) for c in coeffs])
    dp = p.deriv()
    return analytic_model(
        lambda s: p(np.asarray(s, dtype=float)),
        lambda s: dp(np.asarray(s, dtype=float)),
        L,
        f"polynomial({[float(c) for c in p.coef]!r})",
    )


def tanh_curvature(k0: float, k1: float, center: float, width: float, L: float) -> CurvatureModel:
    """``kappa(s) = k0 + k1 tanh((s - center) / width)``."""
    if width <= 0:
        raise ValueError("width must be positive")

    def kappa(s):
        return k0 + k1 * np.tanh((np.asarray(s, dtype=float) - center) / width)

    def kappa_prime(s):
        return k1 / width / np.cosh((np.asarray(s, dtype=float) - center) / width) ** 2

    return analytic_model(kappa, kappa_prime, L, f"tanh(k0={k0!r}, k1={k1!r}, center={center!r}, width={width!r})")


def check_strict_monotonicity(model: CurvatureModel, tol: Optional[Tolerances] = None) -> CurvatureModel:
    """Certify that ``kappa`` is strictly monotone on a dense sample grid.

    Returns a copy of ``model`` with ``direction`` recorded. Raises
    :class:`MonotonicityViolation` with the first offending sample pair. The
    check only sees ``tol.scan_points`` samples.
    """
    tol = tol or Tolerances()
    s = np.linspace(0.0, model.length, tol.scan_points)
    k = eval_many(model.kappa, s)
    if not np.all(np.isfinite(k)):
        raise MonotonicityViolation("curvature is not finite on the path")
    dk = np.diff(k)
    if np.all(dk > 0):
        return replace(model, direction="increasing")
    if np.all(dk < 0):
        return replace(model, direction="decreasing")
    bad = np.nonzero(dk <= 0)[0] if np.sum(dk > 0) >= np.sum(dk < 0) else np.nonzero(dk >= 0)[0]
    i = int(bad[0])
    pair = ((float(s[i]), float(k[i])), (float(s[i + 1]), float(k[i + 1])))
    raise MonotonicityViolation(
        f"curvature is not strictly monotone: kappa({pair[0][0]:.6g})={pair[0][1]:.6g}, "
        f"kappa({pair[1][0]:.6g})={pair[1][1]:.6g}",
        pair,
    )


def reparametrize(curve, tol: Optional[Tolerances] = None) -> tuple[ArcLengthMap, CurvatureModel]:
    """Arc-length map plus a certified curvature model for ``curve``.

    ``kappa'(s)`` uses the chain rule ``(d kappa / d tau) / ||r'(tau)||``.
    """
    tol = tol or Tolerances()
    amap = ArcLengthMap.build(curve, tol)

    def kappa(s):
        return curvature_of_parametric(curve, amap.tau_of_s(s))

    def kappa_prime(s):
        tau = amap.tau_of_s(s)
        return curvature_tau_derivative(curve, tau) / curve.speed(tau)

    desc = "parametric curve"
    if isinstance(curve, ParametricCurve):
        desc = f"polynomial curve x={list(curve.x_coeffs)}, y={list(curve.y_coeffs)}"
    model = CurvatureModel(kappa, kappa_prime, amap.length, None, "from-curve", desc)
    return amap, check_strict_monotonicity(model, tol)
