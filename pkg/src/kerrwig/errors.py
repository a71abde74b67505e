"""Exception hierarchy shared across the package.

Numerical guards raise rather than returning poisoned values; the CLI maps
guard trips to exit status 3 and config problems to exit status 2.
"""


class KerrwigError(Exception):
    """Base class for all package errors."""


class RangeError(KerrwigError, ArithmeticError):
    """A value left the representable / supported range (overflow)."""


class PoleError(KerrwigError, ArithmeticError):
    """Evaluation requested exactly at a pole."""


class SingularParameterError(KerrwigError):
    """A parameter sits on a removable singularity the caller must avoid."""


class CutoffError(KerrwigError):
    """Fock-space truncation too small for the requested state."""


class TruncationError(KerrwigError):
    """A truncated series did not reach the requested tolerance."""


class ConsistencyError(KerrwigError):
    """An internal cross-check failed (imaginary residue, Hermiticity, ...)."""


class GridError(KerrwigError):
    """Grid bounds or sampling insufficient for the requested state."""


class LeakageError(KerrwigError):
    """Probability mass reached the grid boundary beyond the configured guard."""


class SolverError(KerrwigError):
    """An implicit linear solve failed to converge."""


class AssemblyError(KerrwigError):
    """Operator coefficients were not finite on the grid."""


class ConfigError(KerrwigError):
    """A run configuration failed to parse or validate."""
