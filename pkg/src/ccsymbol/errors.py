"""Exception hierarchy shared by every module."""


class CCError(Exception):
    """Base class for all library errors."""


class MixedRings(CCError):
    pass


class DimensionMismatch(CCError):
    pass


class NotAUnit(CCError):
    pass


class OutsidePrecision(CCError):
    pass


class PrecisionExhausted(CCError):
    pass


class UnstablePrecision(CCError):
    """Enlarging the working box changed a value that should have stabilized."""


class InvalidEndo(CCError):
    pass


class NotInvertible(CCError):
    pass


class NotQAlgebra(CCError):
    pass


class NotAField(CCError):
    pass


class UnsupportedRing(CCError):
    pass


class ParseError(CCError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownVariable(ParseError):
    pass


class BadCoefficient(ParseError):
    pass
