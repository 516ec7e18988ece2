"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto distinct process exit codes, so code that detects a
failure should raise the most specific class that applies.
"""


class MagnonChainError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(MagnonChainError, ValueError):
    """Invalid parameters, states, or configuration (CLI exit code 2)."""


class CommensurabilityError(ValidationError):
    """Lattice length incompatible with the modulation period."""


class ConvergenceError(MagnonChainError):
    """Iterative eigensolver failed to converge (CLI exit code 3)."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ResolutionError(ConvergenceError):
    """Chern sum not close enough to an integer; grid too coarse."""


class TopologicalObstructionError(MagnonChainError):
    """Gap closing or degeneracy that invalidates a topological quantity
    (CLI exit code 4)."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class GapClosingError(TopologicalObstructionError):
    """Two bands touch (within floor) somewhere on the sampled grid."""


class BandOverlapError(GapClosingError):
    """Bound band not separated from the scattering continuum."""


class DegenerateLinkError(TopologicalObstructionError):
    """Berry link overlap below floor; states at neighboring grid points
    are (numerically) orthogonal."""
