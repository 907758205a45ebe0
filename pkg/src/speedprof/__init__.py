"""Exact time-optimal speed profiles along planar paths with monotone curvature."""

from .errors import (
    DegenerateCurve,
    EqualityInfeasible,
    InfiniteTime,
    InvalidLimits,
    MonotonicityViolation,
    NonFinite,
    OutOfDomain,
    SpeedProfError,
    SweepNonterminating,
)
from .geometry import (
    ArcLengthMap,
    CurvatureModel,
    ParametricCurve,
    check_strict_monotonicity,
    curvature_of_parametric,
    linear_curvature,
    cubic_path,
    polynomial_curvature,
    reparametrize,
    tanh_curvature,
)
from .numerics import Tolerances
from .oracle import GridSolution, compare, grid_solve
from .profile import (
    Boundary,
    ProblemSpec,
    SpeedProfile,
    check_feasibility,
    equality_boundary_check,
    evaluate,
    resolve_boundaries,
    solve,
    travel_time,
)
from .sweep import SweepProfile, evaluate_sweep, find_s0, forward_sweep, reverse_sweep

__version__ = "0.1.0"

__all__ = [
    "ArcLengthMap",
    "Boundary",
    "check_feasibility",
    "check_strict_monotonicity",
    "compare",
    "cubic_path",
    "curvature_of_parametric",
    "CurvatureModel",
    "DegenerateCurve",
    "equality_boundary_check",
    "EqualityInfeasible",
    "evaluate",
    "evaluate_sweep",
    "find_s0",
    "forward_sweep",
    "grid_solve",
    "GridSolution",
    "InfiniteTime",
    "InvalidLimits",
    "linear_curvature",
    "MonotonicityViolation",
    "NonFinite",
    "OutOfDomain",
    "ParametricCurve",
    "polynomial_curvature",
    "ProblemSpec",
    "reparametrize",
    "resolve_boundaries",
    "reverse_sweep",
    "solve",
    "SpeedProfError",
    "SpeedProfile",
    "SweepNonterminating",
    "SweepProfile",
    "tanh_curvature",
    "Tolerances",
    "travel_time",
]
