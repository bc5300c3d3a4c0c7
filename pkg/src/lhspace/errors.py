"""Exception hierarchy shared across the library."""


class GeometryError(Exception):
    """Base class for all geometric and numerical failures."""


class ChartSingular(GeometryError):
    """A coordinate-chart formula was evaluated at a point it cannot represent.

    Raised e.g. for geodesics with mu2 = 0 (forward endpoint at upper-half-space
    infinity), infinite holomorphic coordinates, or points too close to the
    reflected diagonal 1 + mu1*conj(mu2) = 0.
    """


class DegenerateGeodesic(GeometryError):
    """The two ideal endpoints coincide, so no geodesic is determined."""


class NearBoundary(GeometryError):
    """A ball-model point is too close to the ideal boundary for conversion."""


class BaseMismatch(GeometryError):
    """Two tangent vectors at different base geodesics were combined."""


class OutOfDomain(GeometryError):
    """A chart was sampled outside its declared parameter domain."""


class DegenerateFrame(GeometryError):
    """The frame determinant of a congruence vanishes at the sample point."""


class DegenerateMetric(GeometryError):
    """The induced metric is degenerate, so curvature is undefined."""


class WrongRank(GeometryError):
    """The requested operation needs a chart of a different rank."""


class NotLagrangian(GeometryError):
    """An operation requiring a twist-free congruence met nonzero twist."""


class NonPositiveRho0(GeometryError):
    """The graph divergence quantity is non-positive where positivity is required."""


class FlatPoint(GeometryError):
    """The orthogonal surface has zero Gauss curvature, so ratio-based
    Weingarten quantities are undefined at this point."""


class PoleInDomain(GeometryError):
    """A Moebius chart's pole lies inside the requested parameter domain."""


class ExprError(GeometryError):
    """Base class for expression-language failures."""


class ExprSyntaxError(ExprError):
    """Malformed expression text. Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownIdentifier(ExprError):
    """An identifier that is neither a known variable nor a function."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown identifier '{name}' (offset {offset})")
        self.name = name
        self.offset = offset


class DivisionByZero(ExprError):
    """Division by a value of vanishing modulus during evaluation."""


class EvalDomainError(ExprError):
    """A function was evaluated outside its domain (e.g. ln(0))."""
