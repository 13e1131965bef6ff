"""Exception types. Each carries the CLI exit code it maps to."""


class TomoError(Exception):
    exit_code = 1
    code = "error"


class UsageError(TomoError):
    exit_code = 2
    code = "usage"


class ValidationError(TomoError, ValueError):
    exit_code = 3
    code = "validation"


class ConvergenceError(TomoError):
    exit_code = 4
    code = "convergence"


class GeneralizedObjectError(TomoError):
    """Raised when a distribution-valued symbol or kernel is queried pointwise."""

    exit_code = 3
    code = "generalized"
