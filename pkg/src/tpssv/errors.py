"""Exception hierarchy shared by every module."""


class TPSSVError(Exception):
    """Base class for all errors raised by :mod:`tpssv`."""


class DomainError(TPSSVError, ValueError):
    """An argument falls outside the documented evaluation range."""


class ValidationError(TPSSVError, ValueError):
    """A state, channel or grid specification violates its invariants."""


class CutoffTooSmall(TPSSVError):
    """The Fock cutoff discards more probability mass than allowed."""


class LeakageTooLarge(TPSSVError):
    """A truncated-basis oracle cannot be trusted at the requested point."""


class SeriesNotConverged(TPSSVError):
    """An infinite operator sum needs more terms than the hard cap allows."""


class GridTooLarge(TPSSVError):
    """A phase-space grid request exceeds the point budget."""
