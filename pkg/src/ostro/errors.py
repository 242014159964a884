"""Exception hierarchy.

Everything raised deliberately by the library derives from :class:`OstroError`
so the command line can map it to exit code 1.
"""


class OstroError(Exception):
    """Base class for computational failures and precondition violations."""


class PreconditionError(OstroError, ValueError):
    pass


class NegativeDiscriminant(PreconditionError):
    pass


class DegenerateDenominator(PreconditionError):
    pass


class ZeroCoefficient(PreconditionError):
    pass


class NonPositiveParameter(PreconditionError):
    pass


class SignMismatch(PreconditionError):
    pass


class ShapeMismatch(PreconditionError):
    pass


class DegenerateTopography(PreconditionError):
    pass


class GridTooSmall(PreconditionError):
    pass


class NotPeriodic(PreconditionError):
    pass


class NonZeroMean(PreconditionError):
    pass


class InsufficientSamples(PreconditionError):
    pass


class MissingTimeLevels(PreconditionError):
    pass


class NonRationalInput(PreconditionError, TypeError):
    pass


class StabilityViolation(PreconditionError):
    def __init__(self, msg, bound):
        super().__init__(msg)
        self.bound = bound


class StepUnderflow(OstroError):
    pass


class NonFiniteState(OstroError):
    """Integration produced inf/nan; ``partial`` holds what was computed."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial
