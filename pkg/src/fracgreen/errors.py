"""Exception hierarchy shared by all fracgreen modules."""


class FracGreenError(Exception):
    """Base class for every error raised by the package."""


class DomainError(FracGreenError, ValueError):
    """A parameter lies outside the region where a formula applies."""


class InvalidInterval(DomainError):
    pass


class NonConvergence(FracGreenError):
    pass


class TailNotResolved(FracGreenError):
    pass


class SeriesDiverging(FracGreenError):
    pass


class SingularPoint(DomainError):
    """G(0) is infinite for alpha <= 1."""


class TruncationFailure(FracGreenError):
    pass


class ValidityViolation(DomainError):
    """The Mittag-Leffler integral representation does not converge for c >= c_alpha."""


class CurvesDisjoint(FracGreenError):
    pass


class BracketFailure(FracGreenError):
    pass


class NoRoot(FracGreenError):
    pass
