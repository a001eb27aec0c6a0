"""Exception types shared across the library."""


class RknSplitError(Exception):
    """Base class for all library errors."""


class UnknownScheme(RknSplitError, KeyError):
    """Requested scheme name is not in the registry."""


class InconsistentScheme(RknSplitError, ValueError):
    """Scheme coefficients violate the consistency conditions (sums != 1)."""


class CoefficientParseError(RknSplitError, ValueError):
    """Malformed coefficient file."""


class ForceSingularity(RknSplitError, ArithmeticError):
    """Force evaluation returned a non-finite value."""


class CollisionSingularity(ForceSingularity):
    """A gravitational denominator vanished during force evaluation."""


class NonIntegerStepCount(RknSplitError, ValueError):
    """(t_final - t0)/h is not an integer within tolerance."""


class EccentricityOutOfRange(RknSplitError, ValueError):
    """Kepler eccentricity outside [0, 1)."""


class UnsupportedLevel(RknSplitError, ValueError):
    """Extrapolation level outside the supported set {2, 3, 4}."""


class InsufficientData(RknSplitError, ValueError):
    """Too few points for an order estimate."""


class DegenerateFit(RknSplitError, ValueError):
    """Order estimate impossible (errors at or below the round-off floor)."""
