"""Exception hierarchy shared by all modules."""


class StableExtremaError(Exception):
    """Base class for all library errors."""


class DomainError(StableExtremaError, ValueError):
    """An argument lies outside the domain of the operation."""


class PoleError(DomainError):
    """A Gamma function (or similar) was evaluated at a pole."""


class BranchError(DomainError):
    """A principal-branch power/logarithm was requested on its cut."""


class RationalAlphaError(StableExtremaError, ArithmeticError):
    """A series coefficient has a vanishing sine denominator.

    Raised when alpha is (numerically) rational so that sin(pi*j/alpha) or
    sin(pi*alpha*j) vanishes. ``j`` is the offending index and ``factor``
    names which product it came from.
    """

    def __init__(self, j, factor, value=None):
        self.j = j
        self.factor = factor
        self.value = value
        super().__init__(
            f"sine denominator {factor} vanishes at j={j}"
            + ("" if value is None else f" (|sin| = {value})")
        )


class QuadratureError(StableExtremaError, ArithmeticError):
    """A quadrature rule failed to reach the requested tolerance."""


class PrecisionExhausted(StableExtremaError, ArithmeticError):
    """The input precision does not determine the requested output."""


class ResourceError(StableExtremaError, MemoryError):
    """A computation would exceed the configured resource budget."""
