"""Exception hierarchy.

Every error raised on purpose by the package derives from ``HScatteredError``.
The CLI maps ``CapError`` subclasses to exit code 2 and the remaining input
errors to exit code 1.
"""


class HScatteredError(Exception):
    pass


class InputError(HScatteredError, ValueError):
    """Bad parameters or malformed objects."""


class CapError(HScatteredError):
    """A configured enumeration or size cap would be exceeded."""


class NotPrime(InputError):
    pass


class DegenerateDegree(InputError):
    pass


class FieldTooLarge(CapError):
    pass


class DivisionByZero(HScatteredError, ZeroDivisionError):
    pass


class AmbientMismatch(InputError):
    pass


class TowerMismatch(InputError):
    pass


class DependentRows(InputError):
    pass


class BadH(InputError):
    pass


class BadParams(InputError):
    pass


class NotMaximum(InputError):
    pass


class ZeroScalar(InputError):
    pass


class EnumerationTooLarge(CapError):
    pass


class CapExceeded(CapError):
    pass


class SearchExhausted(HScatteredError):
    pass


class DimensionTooSmall(InputError):
    pass


class DiamondViolated(InputError):
    pass


class FormSingular(InputError):
    pass


class CommonRoot(InputError):
    pass
