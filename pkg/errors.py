"""Exception types shared by the numeric modules and the CLI."""


class PainleveError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PainleveError, ValueError):
    """Argument outside the domain of a function (poles, negative z, ...)."""


class AccuracyError(PainleveError):
    """A series did not converge within its term budget."""


class RangeError(PainleveError, ArithmeticError):
    """Result would leave the documented range (erfi overflow)."""


class ContractError(PainleveError):
    """Operands violate a precondition (jet order, mismatched centers)."""


class DegenerateFactorError(PainleveError):
    """An eigenvalue coincides with a factorization energy."""


class SingularityError(PainleveError):
    """Division by a vanishing constant term.

    `x` is the location of the singular point when it is known.
    """

    def __init__(self, message: str, x: float | None = None):
        super().__init__(message)
        self.x = x


class SkipPoint(PainleveError):
    """Residual undefined at this point; the caller skips it."""

    def __init__(self, message: str, x: float | None = None):
        super().__init__(message)
        self.x = x
