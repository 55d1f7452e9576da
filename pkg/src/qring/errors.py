"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent user-supplied configuration."""


class StructureError(RuntimeError):
    """A matrix block does not have the cyclic structure it must have.

    Raised when a class submatrix fails to be a polynomial in the shift
    matrix; this indicates a basis-ordering bug, never bad user input.
    """


class SolverError(RuntimeError):
    """An eigensolver failed to converge or verify its result."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConsistencyError(RuntimeError):
    """A physics consistency check failed (e.g. decay-rate sum rule)."""
