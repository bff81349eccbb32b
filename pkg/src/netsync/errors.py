"""Exception types shared across the library.

Every error raised by netsync derives from :class:`NetsyncError`, so callers
can catch the package's failures with a single except clause while still
distinguishing the specific condition by type.
"""

__all__ = [
    "NetsyncError",
    "InvalidInput",
    "EigensolverFailure",
    "PreconditionViolation",
    "DefectiveMatrix",
    "ArgumentMarginViolation",
    "RealizationResidue",
    "DimensionMismatch",
    "RankDeficient",
    "ZeroGain",
]


class NetsyncError(Exception):
    """Base class for all netsync errors."""


class InvalidInput(NetsyncError):
    """Malformed or invariant-violating user input (files, matrices)."""


class EigensolverFailure(NetsyncError):
    """The dense eigensolver failed to converge on a numerically
    pathological input."""


class PreconditionViolation(NetsyncError):
    """An operation was called outside its documented domain."""


class DefectiveMatrix(NetsyncError):
    """A matrix could not be reduced to a well-conditioned modal form."""


class ArgumentMarginViolation(PreconditionViolation):
    """A requested modal-entry argument does not clear the required
    phase margin over the topology's worst eigenvalue argument."""


class RealizationResidue(NetsyncError):
    """The imaginary residue of a realized coupling matrix exceeded
    tolerance; the modal entries are not conjugate-closed."""


class DimensionMismatch(NetsyncError):
    """Operand shapes are incompatible."""


class RankDeficient(NetsyncError):
    """A matrix required to have full column rank does not."""


class ZeroGain(NetsyncError):
    """Gain recovery produced an identically zero gain: the coupling
    matrix has no component in the range of the input matrix."""
