"""Exception types shared across the package."""

from __future__ import annotations


class HKTError(Exception):
    """Base class; ``witness`` carries 0-based indices of an offending item."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionError(HKTError, ValueError):
    """Input does not satisfy an operation's precondition."""


class ConstructionError(PreconditionError):
    """A construction was asked to use inadmissible data (non-flat D, ...)."""


class ObataError(HKTError, ValueError):
    """The Obata system is inconsistent or underdetermined."""


class TorsionNotSkewError(HKTError, ValueError):
    """Lowered torsion of a connection is not a 3-form."""


class InternalConsistencyError(HKTError, RuntimeError):
    """Two independent computations disagreed, or a defining property of a
    computed object failed its post-hoc check."""
