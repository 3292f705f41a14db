"""Exception types shared across the solvers."""

from __future__ import annotations


class AttractionError(Exception):
    """Base class for every error raised by this package."""


class InvalidGameError(AttractionError, ValueError):
    """A game instance violates its structural invariants."""


class InvalidProfileError(AttractionError, ValueError):
    """An action profile or assignment does not fit its game."""


class InstanceTooLargeError(AttractionError):
    """An exhaustive search would exceed the configured size cap."""

    def __init__(self, size: int, cap: int, what: str = "profiles") -> None:
        self.size = size
        self.cap = cap
        super().__init__(f"instance too large: {size} {what} exceeds cap {cap}")


class UnsupportedInstanceError(AttractionError, ValueError):
    """The requested operation is only defined for a subclass of instances."""


class AnchoringError(AttractionError, ValueError):
    """Popularity inference cannot anchor a slot's new movies."""

    def __init__(self, slot: int) -> None:
        self.slot = slot
        super().__init__(
            f"slot {slot} has new movies but no old movies with known popularity"
        )


class TheoremViolation(AssertionError):
    """A guaranteed structural property failed on a concrete instance."""
