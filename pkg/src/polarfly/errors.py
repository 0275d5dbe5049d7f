"""Exception types raised across the package."""


class PolarFlyError(ValueError):
    """Base class for all domain errors."""


class NotPrime(PolarFlyError):
    pass


class NotPrimePower(PolarFlyError):
    pass


class ZeroInverse(PolarFlyError, ZeroDivisionError):
    pass


class ZeroVector(PolarFlyError):
    pass


class FieldMismatch(PolarFlyError):
    pass


class DegenerateInput(PolarFlyError):
    pass


class OddQRequired(PolarFlyError):
    pass


class NotQuadric(PolarFlyError):
    pass


class NoAlternatePath(PolarFlyError):
    pass


class TooManyReplications(PolarFlyError):
    pass


class SameVertex(PolarFlyError):
    pass


class AdjacentEndpoints(PolarFlyError):
    pass


class LengthOutOfRange(PolarFlyError):
    pass


class InfeasiblePattern(PolarFlyError):
    pass


class InfeasibleDegree(PolarFlyError):
    pass


class ConfigError(PolarFlyError):
    """Invalid simulator configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")
