"""Exception classes shared across the package.

Everything a caller can trigger with well-formed but mathematically
inadmissible input derives from :class:`DomainError`; the CLI maps that
family to exit code 1.  Malformed input (bad primes, syntax errors) raises
plain ``ValueError`` subclasses that are *not* domain errors.
"""


class DomainError(ValueError):
    """A precondition of a mathematical operation is not met."""


class ContextMismatchError(DomainError):
    """Operands were built over different primes."""


class UnstableValuationError(DomainError):
    """A Gauss valuation of truncated data cannot be certified."""


class ProvisionalPolygonError(DomainError):
    """A Newton polygon built from a truncated series was asked for data
    beyond its certified region."""


class ZeroInputError(DomainError):
    """The operation needs a nonzero input."""


class CriticalPointError(DomainError):
    """The derivative vanishes where the operation needs it invertible."""


class PoleError(DomainError):
    """Evaluation at a pole."""


class SingularMatrixError(DomainError):
    """A matrix that must be invertible is singular."""


class HypothesisError(DomainError):
    """The hypotheses of a bound are not satisfied, so it is not applied."""


class InvalidPrimeError(ValueError):
    """The modulus given for a prime context is not a prime."""


class DivisionByZeroError(DomainError, ZeroDivisionError):
    """Division by an identically zero rational function."""
