"""Exception types shared across the package."""


class DyadicSearchError(Exception):
    """Base class for all errors raised by this package."""


class EnvironmentInconsistencyError(DyadicSearchError):
    """The environment returned a fuzzy evaluation that cannot contain f(X_t).

    Raised when the intersection of fuzzy evaluations at a point becomes
    empty, or when a simulated response excludes the true value.  ``round``
    is filled in by the protocol runner once the failing round is known.
    """

    def __init__(self, message: str, round: int | None = None):
        super().__init__(message)
        self.round = round

    def __str__(self) -> str:
        base = super().__str__()
        if self.round is None:
            return base
        return f"round {self.round}: {base}"


class ArithmeticCapacityError(DyadicSearchError, ArithmeticError):
    """Exact coordinate arithmetic exceeded the configured size limit."""


class ContractViolationError(DyadicSearchError, ValueError):
    """A caller broke the documented precondition of an operation."""
