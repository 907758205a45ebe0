"""Exception types raised by speedprof."""


class SpeedProfError(Exception):
    """Base class for all library errors."""


class NonFinite(SpeedProfError, ArithmeticError):
    """An integrand or function produced a non-finite value."""


class DegenerateCurve(SpeedProfError, ValueError):
    """The parametric curve is not regular (vanishing tangent)."""


class MonotonicityViolation(SpeedProfError, ValueError):
    """Signed curvature is not strictly monotone on the path.

    ``pair`` holds the offending samples ``((s_i, k_i), (s_j, k_j))`` when known.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class SweepNonterminating(SpeedProfError, RuntimeError):
    """The sweep loop did not terminate within the iteration cap."""


class InvalidLimits(SpeedProfError, ValueError):
    pass


class OutOfDomain(SpeedProfError, ValueError):
    pass


class EqualityInfeasible(SpeedProfError, ValueError):
    """A fixed boundary speed cannot be met by any feasible profile."""


class InfiniteTime(SpeedProfError, ArithmeticError):
    pass
