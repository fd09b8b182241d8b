"""Exception hierarchy shared by every defquant module."""


class DefquantError(Exception):
    """Base class for all errors raised by defquant."""


class DomainError(DefquantError, ValueError):
    """An argument lies outside the domain of the operation.

    ``field`` names the offending parameter when there is one.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class OutOfDomain(DomainError):
    """A requested level lies beyond the divergence of a closed-form spectrum."""

    def __init__(self, message, n_star, field="n"):
        super().__init__(message, field)
        self.n_star = n_star


class PreconditionError(DefquantError, ValueError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class ConfigError(DefquantError, ValueError):
    pass


class UnsupportedDeformation(DefquantError, ValueError):
    pass


class UnsupportedDomain(DefquantError, ValueError):
    pass


class SingularityTooStrong(DefquantError, ValueError):
    pass


class EvaluationError(DefquantError, ArithmeticError):
    pass


class ToleranceNotMet(DefquantError, RuntimeError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class TruncationWarning(UserWarning):
    pass


class CrossCheckWarning(UserWarning):
    pass
