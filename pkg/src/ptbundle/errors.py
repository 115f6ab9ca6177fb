class PTBundleError(Exception):
    """Base class for domain errors raised by this package."""


class DeterminantError(PTBundleError, ValueError):
    pass


class NonHyperbolic(PTBundleError, ValueError):
    pass


class InvalidWord(PTBundleError, ValueError):
    pass


class InvalidPath(PTBundleError, ValueError):
    pass


class TooManyPaths(PTBundleError, RuntimeError):
    pass


class NoInteriorPoint(PTBundleError, RuntimeError):
    pass


class NonConvergence(PTBundleError, RuntimeError):
    pass


class ParseError(PTBundleError, ValueError):
    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class NonPositiveSyllable(InvalidWord):
    pass
