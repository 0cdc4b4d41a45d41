class ValidationError(ValueError):
    """Invalid distribution parameters, moment order, or truncation order."""


class ConvergenceError(RuntimeError):
    """A tolerance could not be met within the configured work limit."""
