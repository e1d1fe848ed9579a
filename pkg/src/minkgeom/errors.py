"""Exception types raised by the minkgeom kernel.

All domain errors derive from :class:`MinkGeomError` so callers can catch the
whole family with one clause.  Numerical failures carry the data needed to
diagnose them (iteration counts, residuals).
"""


class MinkGeomError(Exception):
    """Base class for all minkgeom errors."""


class ZeroVector(MinkGeomError):
    """A tangent vector fell below the zero-exclusion threshold."""


class ZeroCovector(MinkGeomError):
    """A covector fell below the zero-exclusion threshold."""


class NotInDomain(MinkGeomError):
    """Argument outside the norm's domain of positivity."""


class DegenerateMetric(MinkGeomError):
    """Fundamental tensor failed a positive-definiteness factorization."""


class NoConvergence(MinkGeomError):
    """Newton inversion of the Legendre map did not converge."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"Legendre inversion stalled after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


class BadDimension(MinkGeomError):
    """Dimension argument out of range for the requested operation."""


class DimensionTooLarge(MinkGeomError):
    """Quadrature budget does not cover this dimension."""


class CriticalPoint(MinkGeomError):
    """df vanishes (or nearly so) where a regular point is required."""


class CriticalPointOnLevel(MinkGeomError):
    """A sampled level-set point turned out to be critical."""


class LevelNotReached(MinkGeomError):
    """Bisection failed to bracket the target level in too many directions."""


class LeftRegularRegion(MinkGeomError):
    """Gradient-flow integration approached a critical point."""


class EigenFailure(MinkGeomError):
    """Symmetric eigendecomposition failed (degenerate frame metric)."""


class NotOrthogonal(MinkGeomError):
    """Vectors violate a required g_y-orthogonality precondition."""


class NotUnit(MinkGeomError):
    """Vector violates the F(y) = 1 precondition."""


class NotMonotone(MinkGeomError):
    """Reparametrization profile is not strictly increasing."""


class NotIsoparametric(MinkGeomError):
    """Operation requires a report with an isoparametric verdict."""


class ConfigError(MinkGeomError):
    """Scenario configuration is malformed.

    ``where`` is a dotted field path (or file:line for parse errors).
    """

    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}")
