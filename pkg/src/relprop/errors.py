class RelpropError(Exception):
    """Base class for every error raised by the package."""


class ParseError(RelpropError):
    """Malformed input text. Carries the 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col


class DataError(RelpropError):
    """Well-formed text that violates a dataset constraint."""

    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.col = col


class FitError(DataError):
    pass


class ConfigError(RelpropError, ValueError):
    pass
