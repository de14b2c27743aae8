"""Exception types raised by entangle_bench."""


class EntangleBenchError(Exception):
    """Base class for all package errors."""


class InvalidStateError(EntangleBenchError, ValueError):
    """A matrix violates the density-matrix invariants."""


class NonHermitianError(EntangleBenchError, ValueError):
    pass


class NoConvergenceError(EntangleBenchError, RuntimeError):
    pass


class BadSplitError(EntangleBenchError, ValueError):
    """The bipartite split does not match the matrix size."""


class DomainError(EntangleBenchError, ValueError):
    """A spectral function is undefined on part of the spectrum."""


class InvalidSpecError(EntangleBenchError, ValueError):
    pass


class BadStrengthError(EntangleBenchError, ValueError):
    """Channel strength outside [0, 1]."""


class DimensionError(EntangleBenchError, ValueError):
    """Input has the wrong dimensions for the requested operation."""


class MissingMeasureError(EntangleBenchError, KeyError):
    pass


class NonPositiveFisherError(EntangleBenchError, ValueError):
    pass


class DataError(EntangleBenchError, ValueError):
    """Malformed input file content."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ReeConvergenceWarning(UserWarning):
    """Frank-Wolfe stopped with a duality gap above tolerance."""
