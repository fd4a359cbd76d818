"""Exception types shared across the package."""


class DynplaceError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(DynplaceError):
    """A generator or algorithm precondition was violated."""


class ParseError(DynplaceError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DisconnectedGraphError(DynplaceError):
    """Operation requires a connected substrate graph."""


class NoActiveServerError(DynplaceError):
    """Requests arrived while the configuration has no active server."""


class CapacityError(DynplaceError):
    """An enumeration bound (configuration space or schedule space) was exceeded."""


class ConfigError(DynplaceError):
    """Experiment configuration is invalid; names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
