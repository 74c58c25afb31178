"""Theta-type congruences for colored partition numbers p_r(n) modulo primes."""

from .errors import (
    EmptySpaceError,
    ExcludedCaseError,
    HypothesisError,
    InconsistentInputError,
    InsufficientDataError,
    ModulusMismatchError,
    NotInvertibleError,
    PrecisionError,
    ThetaCongError,
    VerificationError,
)
from .qseries import Q24Series, SeriesMeta

__version__ = "0.1.0"

__all__ = [
    "Q24Series",
    "SeriesMeta",
    "ThetaCongError",
    "NotInvertibleError",
    "ModulusMismatchError",
    "PrecisionError",
    "ExcludedCaseError",
    "EmptySpaceError",
    "InconsistentInputError",
    "InsufficientDataError",
    "HypothesisError",
    "VerificationError",
]
