"""Exception types shared by the numerical modules."""


class PoleError(ValueError):
    """Raised when a function is evaluated at one of its poles."""


class DomainError(ValueError):
    """Raised when an argument lies outside the supported domain."""


class ConvergenceError(ArithmeticError):
    """Raised when a series or quadrature fails to reach its tolerance.

    ``context`` names the failing sub-computation, when known.
    """

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = context
