"""Exception types shared across the package."""


class FinalgError(Exception):
    """Base class for all package errors."""


class ValidationError(FinalgError, ValueError):
    """A value or argument violates a structural contract."""


class ResourceLimitError(FinalgError, RuntimeError):
    """A computation would exceed a configured size bound.

    Carries enough context to report the bound and the demand that
    tripped it.
    """

    def __init__(self, what: str, needed: int, limit: int):
        self.what = what
        self.needed = needed
        self.limit = limit
        super().__init__(f"{what}: needs {needed}, limit is {limit}")


class ParseError(FinalgError, ValueError):
    """Syntax or resolution error in DSL input, tagged with a position."""

    def __init__(self, message: str, line: int, col: int):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")
