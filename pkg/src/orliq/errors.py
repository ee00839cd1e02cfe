"""Semantic exceptions shared across the package."""


class OrliqError(Exception):
    """Base error for this package."""


class DomainError(OrliqError, ValueError):
    """Input outside the mathematical or trusted numeric domain."""


class DegenerateInputError(OrliqError, ValueError):
    """Input is degenerate for the requested operation (e.g. A(t)=0)."""


class PreconditionError(OrliqError, RuntimeError):
    """A documented precondition of an operation does not hold."""


class ConstraintError(OrliqError, ValueError):
    """A declared parameter constraint of a built-in family is violated."""


class ConvergenceError(OrliqError, RuntimeError):
    """An iterative procedure failed to converge within its budget."""


class ConfigError(OrliqError, ValueError):
    """Run configuration is malformed or semantically invalid."""

    def __init__(self, message, key_path=None, line=None, column=None):
        self.key_path = key_path
        self.line = line
        self.column = column
        loc = ""
        if key_path:
            loc = f" (at {key_path})"
        elif line is not None:
            loc = f" (line {line}, column {column})"
        super().__init__(message + loc)
