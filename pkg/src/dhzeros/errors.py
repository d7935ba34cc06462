"""Exception hierarchy shared by all modules."""


class DHError(Exception):
    """Base class for every error raised by this package."""


class NumericError(DHError):
    """A numerical operation could not produce a trustworthy value."""


class VerificationFailure(DHError):
    """A mathematical property that must hold was found violated."""


class NotPrimitive(DHError, ValueError):
    pass


class RealCharacter(DHError, ValueError):
    pass


class RealRootNumber(DHError, ValueError):
    pass


class PoleAtNonPositiveInteger(NumericError, ValueError):
    pass


class PoleAtOne(NumericError, ValueError):
    pass


class GammaPole(NumericError, ValueError):
    pass


class ToleranceNotReached(NumericError):
    pass


class ZeroOnBoundary(NumericError):
    """A zero of the evaluator lies (numerically) on the contour.

    ``suggestion`` holds a slightly enlarged rectangle the caller may retry with.
    """

    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


class PhaseUnresolvable(NumericError):
    pass


class NonConvergent(NumericError):
    pass


class SeedOffCurve(NumericError, ValueError):
    pass


class NotEnoughPairs(DHError, ValueError):
    pass


class MirrorNotFound(VerificationFailure):
    pass


class NotFound(VerificationFailure):
    pass
