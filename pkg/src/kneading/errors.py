"""Exception hierarchy shared by every module of the package."""


class KneadingError(Exception):
    """Base class for all errors raised by :mod:`kneading`."""


class ParseError(KneadingError, ValueError):
    """A symbol string contains characters outside {L, C, R}."""


class InvariantError(KneadingError):
    """A structural invariant was violated (interior C, count mismatch, ...)."""


class PrefixIncomparable(KneadingError):
    """One truncated itinerary is a strict prefix of the other."""


class RangeError(KneadingError, ValueError):
    """An argument lies outside its admissible range."""


class DomainViolation(KneadingError):
    """An inverse branch was asked for a preimage of a point above the critical value."""


class SingularPoint(KneadingError):
    """A derivative-based quantity was requested at the critical point."""


class SolveFailure(KneadingError):
    """A root-finding routine could not produce a bracket or converge."""


class PreconditionError(KneadingError):
    """The caller's input does not satisfy an operation's precondition."""


class CapExceeded(KneadingError):
    """The preimage tree outgrew its node cap before the requested depth.

    ``levels`` holds the per-level node counts computed before the cap hit.
    """

    def __init__(self, message, levels=()):
        super().__init__(message)
        self.levels = list(levels)
