"""Exception types shared across the package."""


class DictError(Exception):
    """Base class for dictionary-structure errors."""


class DuplicateKeyError(DictError):
    def __init__(self, key):
        super().__init__(f"key already present: {key}")
        self.key = key


class MissingKeyError(DictError):
    def __init__(self, key):
        super().__init__(f"key not present: {key}")
        self.key = key


class CapacityError(DictError):
    """Raised when an operation would exceed the supported layer count."""


class TraceError(DictError):
    """Raised for malformed trace text; carries line/column of the offence."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class IncompatibleTraceError(DictError):
    """Trace contains operations the selected structure does not support."""


class DivergenceError(DictError):
    """Lockstep run of two structures produced different states."""
