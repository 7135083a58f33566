"""
Exception hierarchy for the polar simulator.

Every error raised on purpose by the library derives from PolarSimError
and from the closest builtin exception, so callers can catch either the
domain class or the builtin they would naturally expect.
"""


class PolarSimError(Exception):
    """Base class for all errors raised deliberately by the package."""


class CodeSpecError(PolarSimError, ValueError):
    """Invalid code parameters, index sets, permutations or block lengths."""


class ChannelParamsError(PolarSimError, ValueError):
    """Invalid piecewise-stationary channel parameters."""


class CapacityIntegrationError(PolarSimError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class QpConvergenceError(PolarSimError, RuntimeError):
    """The active-set solver exceeded its iteration cap."""


class InfeasibleWeightsError(PolarSimError, ValueError):
    """Tap weights violate non-negativity, monotonicity or normality."""


class SimConfigError(PolarSimError, ValueError):
    """Invalid simulation configuration."""


class ReportWriteError(PolarSimError, OSError):
    """The CSV report could not be written."""


class QpProblemError(PolarSimError, ValueError):
    """Malformed quadratic-program data (shapes or asymmetric H)."""
