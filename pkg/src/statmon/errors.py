"""Exception hierarchy shared across the package."""


class StatmonError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(StatmonError, ValueError):
    """Invalid user input: malformed words, out-of-range values, bad flags."""


class CapacityError(ValidationError):
    """Requested box count exceeds the supported desk-scale range."""


class ContractError(StatmonError, ValueError):
    """A caller violated a function contract (e.g. non-Hermitian operator)."""


class InfeasibleError(StatmonError):
    """Mathematically valid input with no solution (empty joint eigenspace,
    fixed edges that violate the monogamy region)."""


class ConvergenceError(StatmonError, RuntimeError):
    """Internal numerical failure; indicates a bug, not bad input."""
