"""Exception types shared across the package."""


class ThetaCongError(Exception):
    """Base class for every error raised by thetacong."""


class NotInvertibleError(ThetaCongError, ZeroDivisionError):
    """A field element or series leading coefficient is zero mod ell."""


class ModulusMismatchError(ThetaCongError, ValueError):
    pass


class PrecisionError(ThetaCongError, ValueError):
    """The requested result needs coefficients beyond a series' truncation."""


class ExcludedCaseError(ThetaCongError, ValueError):
    """The prime ell divides r, which every construction here excludes."""


class EmptySpaceError(ThetaCongError, ValueError):
    pass


class InconsistentInputError(ThetaCongError, ValueError):
    pass


class InsufficientDataError(ThetaCongError, ValueError):
    """Too few nonzero coefficients to decide a theta shape."""


class HypothesisError(ThetaCongError):
    """A theorem's side condition fails on the computed data."""

    def __init__(self, message, failed=None):
        super().__init__(message)
        self.failed = failed


class VerificationError(ThetaCongError):
    """A computed series disagrees with the predicted closed form."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
