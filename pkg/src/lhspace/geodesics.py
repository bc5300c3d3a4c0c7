"""Oriented geodesics of hyperbolic 3-space as points of a 4-manifold.

An oriented geodesic is encoded by a pair (mu1, mu2) of extended complex
numbers away from the reflected diagonal mu1*conj(mu2) = -1.  In the upper
half space the ideal endpoints are

    z_minus = -mu1          (backward endpoint, r -> -infinity),
    z_plus  = 1/conj(mu2)   (forward endpoint,  r -> +infinity),

which are the limits of the parameterization below.  A second local chart
(xi, eta) is defined by

    xi  = 2 mu2 / (1 + conj(mu1) mu2),
    eta = (1 - mu1 conj(mu2)) / (2 conj(mu2)),

and the point an arc length r along the geodesic is

    z = eta + tanh(r) / conj(xi),      t = 1 / (|xi| cosh r).

Geodesics through the point at infinity of the half space (mu2 = 0, or an
infinite coordinate) are representable as values but rejected by the
chart-bound evaluations with ChartSingular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ChartSingular, DegenerateGeodesic
from .models import UpperHalfPoint

# Proximity guard for the reflected diagonal, where every chart denominator
# 1 + mu1*conj(mu2) blows up.
EPS_DIAG = 1e-10


@dataclass(frozen=True)
class ExtendedComplex:
    """A point of the Riemann sphere: a finite complex value or infinity."""

    value: complex = 0j
    infinite: bool = False

    @staticmethod
    def of(v) -> "ExtendedComplex":
        if isinstance(v, ExtendedComplex):
            return v
        return ExtendedComplex(complex(v))

    @staticmethod
    def inf() -> "ExtendedComplex":
        return ExtendedComplex(0j, True)

    @property
    def finite(self) -> bool:
        return not self.infinite

    def as_complex(self) -> complex:
        if self.infinite:
            raise ChartSingular("point at infinity has no finite coordinate")
        return self.value

    def reciprocal(self) -> "ExtendedComplex":
        if self.infinite:
            return ExtendedComplex(0j)
        if self.value == 0:
            return ExtendedComplex.inf()
        return ExtendedComplex(1.0 / self.value)

    def isclose(self, other: "ExtendedComplex", tol: float = 1e-12) -> bool:
        """Chart-aware closeness on the sphere.

        Two points are close if they are close in the identity chart or in
        the chart w -> 1/w; the latter makes infinity an honest point and
        keeps the test meaningful for values of large modulus.
        """
        other = ExtendedComplex.of(other)
        if self.finite and other.finite and abs(self.value - other.value) <= tol:
            return True
        ra, rb = self.reciprocal(), other.reciprocal()
        return ra.finite and rb.finite and abs(ra.value - rb.value) <= tol

    def __str__(self):
        return "inf" if self.infinite else repr(self.value)


@dataclass(frozen=True)
class OrientedGeodesic:
    """An oriented geodesic, off the reflected diagonal."""

    mu1: ExtendedComplex
    mu2: ExtendedComplex

    def __post_init__(self):
        object.__setattr__(self, "mu1", ExtendedComplex.of(self.mu1))
        object.__setattr__(self, "mu2", ExtendedComplex.of(self.mu2))
        zm, zp = _endpoints(self.mu1, self.mu2)
        if zm.isclose(zp, EPS_DIAG):
            raise DegenerateGeodesic(
                f"endpoints coincide for (mu1, mu2) = ({self.mu1}, {self.mu2})"
            )

    @staticmethod
    def of(mu1, mu2) -> "OrientedGeodesic":
        return OrientedGeodesic(ExtendedComplex.of(mu1), ExtendedComplex.of(mu2))

    def mu(self) -> tuple[complex, complex]:
        """Both coordinates as finite complex numbers, or ChartSingular."""
        return self.mu1.as_complex(), self.mu2.as_complex()

    def isclose(self, other: "OrientedGeodesic", tol: float = 1e-12) -> bool:
        return self.mu1.isclose(other.mu1, tol) and self.mu2.isclose(other.mu2, tol)


@dataclass(frozen=True)
class XiEtaCoords:
    """The second local chart on the space of geodesics; xi != 0."""

    xi: complex
    eta: complex


def _endpoints(mu1: ExtendedComplex, mu2: ExtendedComplex):
    zm = ExtendedComplex.inf() if mu1.infinite else ExtendedComplex(-mu1.value)
    if mu2.infinite:
        zp = ExtendedComplex(0j)
    elif mu2.value == 0:
        zp = ExtendedComplex.inf()
    else:
        zp = ExtendedComplex(1.0 / mu2.value.conjugate())
    return zm, zp


def boundary_endpoints(g: OrientedGeodesic) -> tuple[ExtendedComplex, ExtendedComplex]:
    """Backward and forward ideal endpoints (z_minus, z_plus) on the boundary plane."""
    return _endpoints(g.mu1, g.mu2)


def from_endpoints(z_minus, z_plus) -> OrientedGeodesic:
    """The oriented geodesic running from z_minus to z_plus."""
    zm, zp = ExtendedComplex.of(z_minus), ExtendedComplex.of(z_plus)
    if zm.isclose(zp, EPS_DIAG):
        raise DegenerateGeodesic(f"equal endpoints {zm} and {zp}")
    mu1 = ExtendedComplex.inf() if zm.infinite else ExtendedComplex(-zm.value)
    if zp.infinite:
        mu2 = ExtendedComplex(0j)
    elif zp.value == 0:
        mu2 = ExtendedComplex.inf()
    else:
        mu2 = ExtendedComplex(1.0 / zp.value.conjugate())
    return OrientedGeodesic(mu1, mu2)


def reverse(g: OrientedGeodesic) -> OrientedGeodesic:
    """The same geodesic with the opposite orientation (endpoints swapped)."""
    zm, zp = boundary_endpoints(g)
    return from_endpoints(zp, zm)


def mu_to_xieta(g: OrientedGeodesic) -> XiEtaCoords:
    """Chart change (mu1, mu2) -> (xi, eta); needs finite mu's and mu2 != 0."""
    if g.mu1.infinite or g.mu2.infinite:
        raise ChartSingular("infinite holomorphic coordinate")
    mu1, mu2 = g.mu1.value, g.mu2.value
    if mu2 == 0:
        raise ChartSingular("mu2 = 0: forward endpoint at upper-half-space infinity")
    den = 1.0 + mu1.conjugate() * mu2
    if abs(den) <= EPS_DIAG:
        raise ChartSingular("too close to the reflected diagonal")
    xi = 2.0 * mu2 / den
    eta = (1.0 - mu1 * mu2.conjugate()) / (2.0 * mu2.conjugate())
    return XiEtaCoords(xi, eta)


def xieta_to_mu(c: XiEtaCoords) -> OrientedGeodesic:
    """Inverse chart change: mu2 = xi/(1 + xi conj(eta)), mu1 = 1/conj(xi) - eta."""
    if c.xi == 0:
        raise ChartSingular("xi = 0 is outside the chart")
    den = 1.0 + c.xi * c.eta.conjugate()
    if abs(den) <= EPS_DIAG:
        raise ChartSingular("xi, eta correspond to an infinite mu2")
    mu2 = c.xi / den
    mu1 = 1.0 / c.xi.conjugate() - c.eta
    return OrientedGeodesic.of(mu1, mu2)


def point_at(g: OrientedGeodesic, r: float) -> UpperHalfPoint:
    """Point an arc length r along the geodesic (orientation z_minus -> z_plus)."""
    c = mu_to_xieta(g)
    t = 1.0 / (abs(c.xi) * math.cosh(r))
    z = c.eta + math.tanh(r) / c.xi.conjugate()
    return UpperHalfPoint(t, z)


def point_at_mu(g: OrientedGeodesic, r: float) -> UpperHalfPoint:
    """Same point evaluated directly in the (mu1, mu2) chart.

    z = (1 - mu1 conj(mu2))/(2 conj(mu2)) + (1 + mu1 conj(mu2))/(2 conj(mu2)) tanh r,
    t = |1 + conj(mu1) mu2| / (2 |mu2| cosh r).
    """
    mu1, mu2 = g.mu()
    if mu2 == 0:
        raise ChartSingular("mu2 = 0: forward endpoint at upper-half-space infinity")
    den = 1.0 + mu1.conjugate() * mu2
    if abs(den) <= EPS_DIAG:
        raise ChartSingular("too close to the reflected diagonal")
    m2b = mu2.conjugate()
    z = (1.0 - mu1 * m2b) / (2.0 * m2b) + (1.0 + mu1 * m2b) / (2.0 * m2b) * math.tanh(r)
    t = abs(den) / (2.0 * abs(mu2) * math.cosh(r))
    return UpperHalfPoint(t, z)


def tangent_at(g: OrientedGeodesic, r: float) -> np.ndarray:
    """Unit tangent (dt/dr, dx1/dr, dx2/dr) of the geodesic at parameter r."""
    c = mu_to_xieta(g)
    sech = 1.0 / math.cosh(r)
    dt = -sech * math.tanh(r) / abs(c.xi)
    dz = sech * sech / c.xi.conjugate()
    return np.array([dt, dz.real, dz.imag])


def parameter_of_point(g: OrientedGeodesic, p: UpperHalfPoint) -> float:
    """Arc-length parameter of the point of the geodesic nearest to p.

    For p exactly on the geodesic this returns the r with point_at(g, r) = p.
    """
    c = mu_to_xieta(g)
    th = (c.xi.conjugate() * (p.z - c.eta)).real
    th = min(1.0 - 1e-16, max(-1.0 + 1e-16, th))
    return math.atanh(th)


def geodesic_through(p: UpperHalfPoint, v: np.ndarray) -> tuple[OrientedGeodesic, float]:
    """The oriented geodesic through p with initial direction v.

    v is a tangent vector (dt, dx1, dx2) at p of unit hyperbolic norm (it is
    normalized defensively).  Returns the geodesic and the parameter r_p at
    which it passes through p.  Geodesics of the half space are vertical rays
    and semicircles orthogonal to the boundary; a direction whose forward
    endpoint is the point at infinity raises ChartSingular.
    """
    v = np.asarray(v, dtype=float)
    enorm = float(np.linalg.norm(v))
    if enorm == 0:
        raise ValueError("zero direction vector")
    v = v / enorm  # only the direction matters below
    vt, vh = v[0], complex(v[1], v[2])
    if abs(vh) <= 1e-14 * max(1.0, abs(vt)):
        # Vertical line through z = p.z.
        if vt > 0:
            raise ChartSingular("forward endpoint is the point at infinity")
        g = from_endpoints(ExtendedComplex.inf(), ExtendedComplex(p.z))
        return g, parameter_of_point(g, p)
    theta = vh / abs(vh)
    # In the vertical plane through p along theta: semicircle centred at
    # offset x0 on the boundary with radius R, tangent (|vh|, vt) at (0, t).
    x0 = p.t * vt / abs(vh)
    rad = math.hypot(x0, p.t)
    z_minus = p.z + (x0 - rad) * theta
    z_plus = p.z + (x0 + rad) * theta
    g = from_endpoints(z_minus, z_plus)
    return g, parameter_of_point(g, p)
