from typing import Any, Optional


class DarkstateError(Exception):
    """Base class for every error raised by the package."""


class DomainError(DarkstateError, ValueError):
    """
    A precondition or invariant of an operation does not hold.

    Examples:
    - local_block requested away from the flat-band point
    - a value passed to defect_report that is not an eigenvalue
    """


class NumericalFailure(DarkstateError, ArithmeticError):
    """
    A computation did not converge or produced non-finite numbers.

    `partial` carries whatever was computed before the failure
    (for instance the eigenvalues found so far).
    """

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class ResourceLimitError(DarkstateError, MemoryError):
    """A Fock basis (or other dense object) would exceed its configured size."""


class ConfigError(DarkstateError, ValueError):
    """Invalid command-line flags or configuration file contents."""
