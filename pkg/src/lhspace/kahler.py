"""The complex structure, symplectic form and neutral metric on geodesic space.

Tangent vectors at an oriented geodesic are encoded by the complex pairs
(dmu1, dmu2) of a real tangent vector in the holomorphic chart; the
conjugate components are the conjugates.  The complex structure acts as
multiplication by i on both components.

The symplectic form is

    Omega = -[ dmu1 ^ dconj(mu2) / (1 + mu1 conj(mu2))^2
             + dconj(mu1) ^ dmu2 / (1 + conj(mu1) mu2)^2 ],

and the metric is G(. , .) = Omega(J . , .), of signature (+ + - -).

Convention note: a wedge evaluates with the antisymmetrization average,
(a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2, and a symmetric product with
the symmetrization average.  With this normalization the pullback of G to
a twist-free graph surface has complex component g_{11} equal to -i sigma0
(see induced.py), which is the normalization every curvature formula in
this library is written in.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BaseMismatch, ChartSingular
from .geodesics import EPS_DIAG, OrientedGeodesic


@dataclass(frozen=True)
class GeodesicTangent:
    """A real tangent vector at ``base`` in holomorphic components."""

    base: OrientedGeodesic
    dmu1: complex
    dmu2: complex


def _coeff(base: OrientedGeodesic) -> complex:
    mu1, mu2 = base.mu()
    den = 1.0 + mu1 * mu2.conjugate()
    if abs(den) <= EPS_DIAG:
        raise ChartSingular("base too close to the reflected diagonal")
    return 1.0 / (den * den)


def _check_bases(x: GeodesicTangent, y: GeodesicTangent):
    if not x.base.isclose(y.base, 1e-12):
        raise BaseMismatch("tangent vectors live at different geodesics")


def omega(x: GeodesicTangent, y: GeodesicTangent) -> float:
    """Symplectic form evaluated on two tangent vectors at the same base."""
    _check_bases(x, y)
    a = _coeff(x.base)  # 1/(1 + mu1 conj(mu2))^2
    first = a * (x.dmu1 * y.dmu2.conjugate() - y.dmu1 * x.dmu2.conjugate())
    # The second term of the form is the conjugate of the first.
    return -first.real


def apply_J(x: GeodesicTangent) -> GeodesicTangent:
    """Rotation of the tangent vector by the complex structure."""
    return GeodesicTangent(x.base, 1j * x.dmu1, 1j * x.dmu2)


def metric_G(x: GeodesicTangent, y: GeodesicTangent) -> float:
    """Neutral metric G(X, Y) = Omega(J X, Y)."""
    return omega(apply_J(x), y)
