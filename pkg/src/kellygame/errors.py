"""Exception types shared across the package."""


class KellyGameError(ValueError):
    """Base class for all domain errors raised by this package."""


class DimensionMismatch(KellyGameError):
    """Vector or matrix dimensions do not agree with the market's size."""


class NonPositiveVolatility(KellyGameError):
    """A volatility entry is zero or negative."""


class InvalidCorrelation(KellyGameError):
    """Correlation matrix is asymmetric, has off-unit diagonal, or entries outside [-1, 1]."""


class SingularCovariance(KellyGameError):
    """Covariance matrix failed the positive-definiteness check."""


class TimeOffGrid(KellyGameError):
    """Requested evaluation time does not lie on the simulation grid."""


class DivisionDegenerate(KellyGameError):
    """Denominator randomization keeps sampling exact zeros; the wealth ratio is undefined."""


class DomainViolation(KellyGameError):
    """A finite-difference stencil point left the positive state domain."""
