"""Exception types shared across the package."""


class ArffError(ValueError):
    """Malformed ARFF header or data row."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    """Input data violates a value constraint (labels outside {0,1}, NaNs, ...)."""


class UndefinedQualityError(ValueError):
    """Raised when a partition quality function is undefined, e.g. on an edgeless graph."""


class ConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap without converging."""
