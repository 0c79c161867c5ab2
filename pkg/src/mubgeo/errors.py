"""Exception types raised across the package.

Every error derives from :class:`MubGeoError` so callers (and the CLI) can
catch input problems in one place.
"""


class MubGeoError(ValueError):
    """Base class for invalid input or failed invariants."""


# finite fields
class NonPrimeCharacteristic(MubGeoError):
    pass


class OrderTooLarge(MubGeoError):
    pass


class OrderNotPrimePower(MubGeoError):
    pass


class IndexOutOfRange(MubGeoError, IndexError):
    pass


class FieldDivisionByZero(MubGeoError, ZeroDivisionError):
    pass


# latin squares
class MalformedArray(MubGeoError):
    pass


class OrderMismatch(MubGeoError):
    pass


class NotOrthogonal(MubGeoError):
    pass


class WrongCount(MubGeoError):
    pass


# affine planes
class MalformedIncidence(MubGeoError):
    pass


class InvalidPlane(MubGeoError):
    pass


class SamePencil(MubGeoError):
    pass


# Hermitian space
class DimensionMismatch(MubGeoError):
    pass


class NotUnitTrace(MubGeoError):
    pass


class NotHermitian(MubGeoError):
    pass


# MUBs
class CommutationFailure(MubGeoError):
    """An operator class failed to commute; this is a bug, not bad input."""


class DegenerateCombination(MubGeoError):
    pass


class TooManyBases(MubGeoError):
    pass


class NonUnitVector(MubGeoError):
    pass


class InvalidMubSet(MubGeoError):
    pass


# polytope / wigner
class IncompleteChoice(MubGeoError):
    pass


class PlaneOrderMismatch(MubGeoError):
    pass


class UnknownLine(MubGeoError):
    pass


class AbstractRealization(MubGeoError):
    pass


class MissingPlane(MubGeoError):
    pass
