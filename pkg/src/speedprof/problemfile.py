"""JSON problem files and CSV profile I/O."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .geometry import (
    ArcLengthMap,
    CurvatureModel,
    ParametricCurve,
    check_strict_monotonicity,
    linear_curvature,
    polynomial_curvature,
    reparametrize,
    tanh_curvature,
)
from .numerics import Tolerances
from .profile import Boundary, ProblemSpec

SCAN_POINTS_ENV = "SPEEDPROF_SCAN_POINTS"
PROFILE_COLUMNS = ("s", "x", "v", "a_tan", "a_norm", "active")
DEFAULT_SAMPLES = 1001


class ProblemFileError(ValueError):
    """A problem or profile file could not be parsed; the message names the field or line."""


@dataclass(frozen=True)
class Problem:
    spec: ProblemSpec
    model: CurvatureModel
    tol: Tolerances
    samples: int
    arclength: Optional[ArcLengthMap] = None
    name: str = ""


def _get(d: dict, key: str, where: str, kind=None):
    if not isinstance(d, dict):
        raise ProblemFileError(f"{where}: expected an object")
    if key not in d:
        raise ProblemFileError(f"{where}.{key}: missing")
    val = d[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ProblemFileError(f"{where}.{key}: expected a number, got {val!r}")
        return float(val)
    if kind is list:
        if not isinstance(val, list) or not val or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in val):
            raise ProblemFileError(f"{where}.{key}: expected a non-empty list of numbers")
        return [float(v) for v in val]
    return val


def _boundary(raw: Any, where: str) -> Boundary:
    try:
        if isinstance(raw, str) and raw.lower() == "free":
            return Boundary.free()
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            return Boundary.fixed(raw)
        if isinstance(raw, dict) and len(raw) == 1:
            (mode, w), = raw.items()
            if mode == "at_most":
                return Boundary.at_most(_get(raw, "at_most", where, float))
            if mode == "fixed":
                return Boundary.fixed(_get(raw, "fixed", where, float))
    except ValueError as exc:
        raise ProblemFileError(f"{where}: {exc}") from exc
    raise ProblemFileError(f'{where}: expected a number, "free" or {{"at_most": number}}, got {raw!r}')


def _analytic_model(path: dict) -> CurvatureModel:
    expr = _get(path, "expression", "path")
    params = _get(path, "params", "path")
    L = _get(path, "L", "path", float)
    if L <= 0:
        raise ProblemFileError("path.L: must be positive")
    where = "path.params"
    if expr == "linear":
        return linear_curvature(_get(params, "k0", where, float), _get(params, "k1", where, float), L)
    if expr == "polynomial":
        return polynomial_curvature(_get(params, "coeffs", where, list), L)
    if expr == "tanh":
        width = _get(params, "width", where, float)
        if width <= 0:
            raise ProblemFileError(f"{where}.width: must be positive")
        return tanh_curvature(_get(params, "k0", where, float), _get(params, "k1", where, float),
                              _get(params, "center", where, float), width, L)
    raise ProblemFileError(f"path.expression: unknown expression {expr!r} (linear, polynomial, tanh)")


def _tolerances(raw: dict, L: float, V: float) -> Tolerances:
    known = {f.name for f in fields(Tolerances)}
    over = {}
    for key, val in (raw or {}).items():
        if key not in known:
            raise ProblemFileError(f"numerics.{key}: unknown tolerance (expected one of {sorted(known)})")
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ProblemFileError(f"numerics.{key}: expected a number")
        over[key] = int(val) if key in ("max_sweep_iters", "scan_points") else float(val)
    env = os.environ.get(SCAN_POINTS_ENV)
    if env:
        try:
            over["scan_points"] = int(env)
        except ValueError as exc:
            raise ProblemFileError(f"{SCAN_POINTS_ENV}: expected an integer, got {env!r}") from exc
    try:
        return Tolerances.for_problem(L, V, **over)
    except ValueError as exc:
        raise ProblemFileError(f"numerics: {exc}") from exc


def parse_problem(raw: dict, name: str = "") -> Problem:
    """Build a :class:`Problem` from decoded JSON.

    Raises :class:`ProblemFileError` for malformed content and
    :class:`~speedprof.errors.MonotonicityViolation` if the curvature is not
    strictly monotone.
    """
    if not isinstance(raw, dict):
        raise ProblemFileError("top level: expected an object")
    path = _get(raw, "path", "problem")
    limits = _get(raw, "limits", "problem")
    A, B, C, V = (_get(limits, k, "limits", float) for k in ("A", "B", "C", "V"))
    boundary = _get(raw, "boundary", "problem")
    v0 = _boundary(_get(boundary, "v0", "boundary"), "boundary.v0")
    vL = _boundary(_get(boundary, "vL", "boundary"), "boundary.vL")
    samples = DEFAULT_SAMPLES
    if "outputs" in raw:
        samples = int(_get(raw["outputs"], "samples", "outputs", float)) if "samples" in raw["outputs"] else samples
        if samples < 2:
            raise ProblemFileError("outputs.samples: must be >= 2")

    kind = _get(path, "kind", "path")
    amap = None
    if kind == "polynomial":
        try:
            curve = ParametricCurve(
                _get(path, "x_coeffs", "path", list),
                _get(path, "y_coeffs", "path", list),
                _get(path, "tau_lo", "path", float),
                _get(path, "tau_hi", "path", float),
            )
        except ValueError as exc:
            if isinstance(exc, ProblemFileError):
                raise
            raise ProblemFileError(f"path: {exc}") from exc
        L_guess = 1.0
        tol0 = _tolerances(raw.get("numerics"), L_guess, V)
        amap, model = reparametrize(curve, tol0)
    elif kind == "analytic_curvature":
        model = _analytic_model(path)
    else:
        raise ProblemFileError(f"path.kind: expected 'polynomial' or 'analytic_curvature', got {kind!r}")

    tol = _tolerances(raw.get("numerics"), model.length, V)
    if not model.certified:
        model = check_strict_monotonicity(model, tol)
    try:
        spec = ProblemSpec(A, B, C, V, model.length, v0, vL)
    except ValueError as exc:
        raise ProblemFileError(f"limits: {exc}") from exc
    return Problem(spec, model, tol, samples, amap, name)


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ProblemFileError(f"{path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_problem(raw, path.stem)


def fmt(x: float) -> str:
    """Shortest round-trip decimal for a float (locale independent)."""
    return repr(float(x))


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating, int)) and not isinstance(v, bool) else v
                        for v in row])


def read_profile_csv(path) -> np.ndarray:
    """Read ``s`` and ``x`` columns as an ``(n, 2)`` array; rows must be sorted by ``s``."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"s", "x"} <= set(reader.fieldnames):
                raise ProblemFileError(f"{path}: header must contain columns 's' and 'x'")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                try:
                    rows.append((float(row["s"]), float(row["x"])))
                except (TypeError, ValueError) as exc:
                    raise ProblemFileError(f"{path}: line {lineno}: bad number") from exc
    except OSError as exc:
        raise ProblemFileError(f"{path}: {exc.strerror}") from exc
    if len(rows) < 2:
        raise ProblemFileError(f"{path}: need at least two rows")
    arr = np.array(rows)
    bad = np.nonzero(np.diff(arr[:, 0]) < 0)[0]
    if len(bad):
        raise ProblemFileError(f"{path}: line {int(bad[0]) + 3}: s values are not sorted")
    return arr
