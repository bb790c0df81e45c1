"""Exception types raised by the library.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch that.
"""

from __future__ import annotations


class LNRError(ValueError):
    """Base class for domain errors (CLI exit code 1)."""


class AngleRangeError(LNRError):
    """An angle or numeric parameter is outside its admissible range."""


class DegeneratePairError(LNRError):
    """Two setting vectors are coincident (difference) or antipodal (sum)."""

    def __init__(self, message: str, angle: float):
        super().__init__(message)
        self.angle = angle


class DegenerateSettingsError(LNRError):
    """A settings bundle contains a degenerate pair and admits no bound."""


class UnrealizableAnglesError(LNRError):
    """Three pairwise angles that no triple of unit vectors can realize."""


class OutcomeDomainError(LNRError):
    """Outcome values outside {-1, +1} or an invalid weight table."""
