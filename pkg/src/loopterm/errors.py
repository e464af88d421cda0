"""Exception hierarchy."""


class LoopSystemError(ValueError):
    """Raised when a loop instance violates the problem assumptions."""


class DimensionMismatchError(LoopSystemError):
    pass


class NonCommutingError(LoopSystemError):
    def __init__(self, i, j):
        super().__init__(f"update matrices {i} and {j} do not commute")
        self.pair = (i, j)


class SingularMatrixError(LoopSystemError):
    def __init__(self, i):
        super().__init__(f"update matrix {i} is singular")
        self.index = i


class ZeroGuardRowError(LoopSystemError):
    def __init__(self, i):
        super().__init__(f"guard row {i} is the zero vector")
        self.index = i


class InstanceSyntaxError(ValueError):
    """Malformed instance text. ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class InternalInvariantError(AssertionError):
    """A certificate or trace failed an internal consistency check."""
