"""Exception types shared across the package."""

from __future__ import annotations


class SkewTentError(Exception):
    """Base class for all errors raised by this package."""


class InvalidMap(SkewTentError):
    """Map parameters are degenerate or outside the admissible domain."""


class NotReducible(SkewTentError):
    """The map cannot be conjugated onto the unit interval."""


class OutOfDomain(SkewTentError):
    """An argument lies outside the operation's domain."""


class WrongRegion(SkewTentError):
    """A region-specific construction was requested outside its region."""


class NotClassified(SkewTentError):
    """Parameters sit on a region boundary; no definite answer is asserted."""


class PrecisionLoss(SkewTentError):
    """A construction failed its numerical certificate.

    ``defect`` carries the measured gap or residual that broke the check.
    """

    def __init__(self, message: str, defect: float | None = None):
        super().__init__(message if defect is None else f"{message} (defect={defect:.3e})")
        self.defect = defect


class DepthOverflow(SkewTentError):
    """A renormalization depth exceeds the representable or practical range."""


class NoBoundedOrbit(SkewTentError):
    """Every sampled orbit escaped; no bounded statistics are available."""


class Inadmissible(SkewTentError):
    """A symbol word violates the subshift constraint."""


class InvalidWord(SkewTentError):
    """A symbol word contains symbols outside the system alphabet."""
