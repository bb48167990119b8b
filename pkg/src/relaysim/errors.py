"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A configuration or argument value violates its contract."""


class EmptyFieldError(ValueError):
    """A policy that needs at least one relay was given an empty field."""


class BracketError(ValueError):
    """Root solver target is not bracketed by the supplied interval."""


class NumericError(RuntimeError):
    """A numerical routine failed to converge within its budget."""


class UnsupportedOperationError(RuntimeError):
    """The requested quantity is undefined for the given model variant."""
