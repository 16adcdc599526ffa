"""Exception types shared across the package."""


class TakagiError(Exception):
    """Base class for all package errors."""


class TolNotReached(TakagiError):
    """A truncated sum hit its term cap before the requested tolerance."""

    def __init__(self, achieved, requested, terms):
        self.achieved = achieved
        self.requested = requested
        self.terms = terms
        super().__init__(
            f"tolerance {requested:g} not reached after {terms} terms "
            f"(achieved bound {float(achieved):.3g})"
        )


class SignAmbiguous(TakagiError):
    """A sign decision fell below the resolution of a floating-point input.

    Raised by the float backend only. Supply an exact point (rational or
    algebraic) or raise the working precision.
    """

    def __init__(self, index, magnitude=None, precision=None):
        self.index = index
        self.magnitude = magnitude
        self.precision = precision
        msg = f"sign of partial sum {index} is not decidable"
        if precision is not None:
            msg += f" at {precision} bits"
        super().__init__(msg)


class NonCanonicalExpansion(TakagiError):
    """A binary expansion ends in a repeating block of ones."""


class InvalidParameter(TakagiError, ValueError):
    """An argument lies outside the domain of the operation."""
