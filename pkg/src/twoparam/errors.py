"""Exception types shared across the package."""


class TwoParamError(Exception):
    """Base class for all package errors."""


class InvalidInputError(TwoParamError, ValueError):
    """Input outside the accepted range of an operation."""


class ChartDomainError(InvalidInputError):
    """Point lies outside (or on the boundary of) the coordinate chart."""


class ChartEscapeError(TwoParamError):
    """A transformation maps a point out of the half-chart.

    ``denominator`` carries the offending value of the fractional linear
    denominator so callers can tell a genuine escape from a bug.
    """

    def __init__(self, message, denominator):
        super().__init__(message)
        self.denominator = denominator


class DecompositionDomainError(InvalidInputError):
    """Group element cannot be brought into (N, P, lambda) block form."""


class DegenerateHessianError(TwoParamError):
    """Velocity Hessian is singular or badly conditioned."""


class TurningPointError(TwoParamError):
    """WKB radicand became non-positive on the grid."""

    def __init__(self, message, node):
        super().__init__(message)
        self.node = node


class EvanescentError(InvalidInputError):
    """Mode parameters with k.k <= 1 where a real frequency is required."""


class UnknownNameError(TwoParamError, KeyError):
    """Unknown operator, generator or subalgebra name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""
