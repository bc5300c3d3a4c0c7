"""Surfaces in hyperbolic space orthogonal to a twist-free congruence.

A twist-free congruence admits a one-parameter family of orthogonal
surfaces, cut out by support functions r(nu) solving

    2 dr = mu2/(conj(mu1) mu2 + 1) (d conj(mu1) + d mu2 / mu2^2)
         + conj(mu2)/(mu1 conj(mu2) + 1) (d mu1 + d conj(mu2) / conj(mu2)^2),

where d differentiates in nu; the real constant of integration indexes the
parallel family.  Inserting r(nu) into the geodesic parameterization
reconstructs the surface point by point; the optical scalars at (nu, r(nu))
carry its extrinsic geometry:

    |sigma| = |l1 - l2| / 2,     rho = -(l1 + l2) / 2,

for the principal curvatures l1 >= l2, and the Gauss curvature of those
surfaces is kappa = |rho|^2 - |sigma|^2 - 1 = l1 l2 - 1.

The closedness of the support 1-form is audited on every grid plaquette;
it fails exactly on twisted congruences, so the audit doubles as a
Lagrangian test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .congruence import (
    CongruenceChart,
    FunctionChart,
    Jet2,
    OpticalScalars,
    Rect,
    graph_data,
    optical_scalars,
)
from .errors import DegenerateFrame, FlatPoint, NotLagrangian
from .geodesics import OrientedGeodesic, geodesic_through, mu_to_xieta, point_at
from .induced import gauss_K
from .models import UpperHalfPoint

# Plaquette circulation threshold, as a fraction of the domain scale.
TOL_CLOSED_FRACTION = 1e-7
# Weingarten verdict thresholds (scale-normalized quantities).
TOL_K = 1e-5
TOL_DEFECT = 1e-4
# Below this |kappa| the curvature-ratio forms are undefined.
KAPPA_FLAT_BAND = 1e-9

# Five-point Gauss-Legendre rule on [0, 1].
_GL_X, _GL_W = np.polynomial.legendre.leggauss(5)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def hyperbolic_distance(p: UpperHalfPoint, q: UpperHalfPoint) -> float:
    """Distance in the upper half space model."""
    d2 = abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2
    return math.acosh(1.0 + d2 / (2.0 * p.t * q.t))


def support_derivative(j: Jet2) -> complex:
    """The complex value 2 dr/dnu of the support 1-form at a jet."""
    mu1, mu2 = j.mu1, j.mu2
    m1c, m2c = mu1.conjugate(), mu2.conjugate()
    d_m1c = j.db_mu1.conjugate()
    d_m2c = j.db_mu2.conjugate()
    return mu2 / (m1c * mu2 + 1.0) * (d_m1c + j.d_mu2 / (mu2 * mu2)) + m2c / (
        mu1 * m2c + 1.0
    ) * (j.d_mu1 + d_m2c / (m2c * m2c))


def _form_components(chart: CongruenceChart, nu: complex) -> tuple[float, float]:
    """(r_u, r_v) of the support form: dr = Re(W) du - Im(W) dv, W = 2 dr/dnu."""
    w = support_derivative(chart.jet(nu))
    return w.real, -w.imag


def _segment_integral(chart: CongruenceChart, a: complex, b: complex) -> float:
    """Gauss-Legendre line integral of the support form along [a, b]."""
    d = b - a
    total = 0.0
    for x, wgt in zip(_GL_X, _GL_W):
        ru, rv = _form_components(chart, a + x * d)
        total += wgt * (ru * d.real + rv * d.imag)
    return total


@dataclass
class RField:
    """Support function sampled on a grid, with its closedness audit."""

    chart: CongruenceChart
    rect: Rect
    n: int
    nodes: np.ndarray  # (n, n) complex, index [i, j] ~ (u_i, v_j)
    values: np.ndarray  # (n, n) float
    base_nu: complex
    base_r: float
    max_circulation: float

    def at(self, nu: complex) -> float:
        """Value at an arbitrary point: nearest node plus a line integral."""
        us = self.nodes[:, 0].real
        vs = self.nodes[0, :].imag
        i = int(np.argmin(np.abs(us - nu.real)))
        j = int(np.argmin(np.abs(vs - nu.imag)))
        return self.values[i, j] + _segment_integral(self.chart, self.nodes[i, j], nu)

    def shifted(self, dr: float) -> "RField":
        """The parallel field r + dr."""
        return RField(
            self.chart, self.rect, self.n, self.nodes, self.values + dr,
            self.base_nu, self.base_r + dr, self.max_circulation,
        )


def integrate_r(
    chart: CongruenceChart,
    nu0: complex,
    r0: float,
    rect: Rect | None = None,
    n: int = 41,
    tol_closed: float | None = None,
) -> RField:
    """Integrate the support form over a grid, auditing closedness.

    Raises NotLagrangian when the maximal plaquette circulation exceeds
    tol_closed (default TOL_CLOSED_FRACTION times the domain scale); for a
    twist-free chart the circulation is quadrature noise only.
    """
    rect = rect or chart.domain
    if rect is None:
        raise ValueError("no integration rectangle given and chart has no domain")
    if tol_closed is None:
        tol_closed = TOL_CLOSED_FRACTION * rect.scale

    us = np.linspace(rect.u0, rect.u1, n)
    vs = np.linspace(rect.v0, rect.v1, n)
    nodes = us[:, None] + 1j * vs[None, :]

    # Edge integrals: hor[i, j] from (i, j) to (i+1, j); ver[i, j] from
    # (i, j) to (i, j+1).  They drive both the integration and the audit.
    hor = np.zeros((n - 1, n))
    ver = np.zeros((n, n - 1))
    for i in range(n - 1):
        for j in range(n):
            hor[i, j] = _segment_integral(chart, nodes[i, j], nodes[i + 1, j])
    for i in range(n):
        for j in range(n - 1):
            ver[i, j] = _segment_integral(chart, nodes[i, j], nodes[i, j + 1])

    circ = hor[:, :-1] + ver[1:, :] - hor[:, 1:] - ver[:-1, :]
    max_circ = float(np.abs(circ).max()) if circ.size else 0.0
    if max_circ > tol_closed:
        raise NotLagrangian(
            f"support form is not closed: max plaquette circulation {max_circ:.3e} "
            f"exceeds {tol_closed:.3e}"
        )

    # Anchor the nearest node to (nu0, r0), integrate along its row, then
    # down/up every column.
    i0 = int(np.argmin(np.abs(us - nu0.real)))
    j0 = int(np.argmin(np.abs(vs - nu0.imag)))
    values = np.zeros((n, n))
    values[i0, j0] = r0 + _segment_integral(chart, nu0, nodes[i0, j0])
    for i in range(i0 + 1, n):
        values[i, j0] = values[i - 1, j0] + hor[i - 1, j0]
    for i in range(i0 - 1, -1, -1):
        values[i, j0] = values[i + 1, j0] - hor[i, j0]
    for j in range(j0 + 1, n):
        values[:, j] = values[:, j - 1] + ver[:, j - 1]
    for j in range(j0 - 1, -1, -1):
        values[:, j] = values[:, j + 1] - ver[:, j]

    return RField(chart, rect, n, nodes, values, nu0, r0, max_circ)


# ---------------------------------------------------------------------------
# Reconstruction


@dataclass(frozen=True)
class SurfaceSample:
    """A reconstructed surface point with its principal curvatures."""

    nu: complex
    r: float
    point: UpperHalfPoint
    lambda1: float
    lambda2: float
    kappa: float


def principal_curvatures(scalars: OpticalScalars, tol: float = 1e-6) -> tuple[float, float]:
    """Principal curvatures (l1 >= l2) of the orthogonal surface at this point."""
    if abs(scalars.twist) > tol * (1.0 + abs(scalars.rho)):
        raise NotLagrangian(f"twist {scalars.twist:.3e} is not ~0; no orthogonal surface")
    h = -scalars.rho.real
    s = abs(scalars.sigma)
    return h + s, h - s


def surface_kappa(chart: CongruenceChart, nu: complex, r: float) -> float:
    """Gauss curvature of the orthogonal surface through (nu, r): |rho|^2-|sigma|^2-1."""
    s = optical_scalars(chart, nu, r)
    return abs(s.rho) ** 2 - abs(s.sigma) ** 2 - 1.0


def surface_kappa_j(chart: CongruenceChart, nu: complex, r: float) -> float:
    """The same curvature from the jet-invariant display (8/Delta)[...]."""
    from .congruence import j_invariants, _chart_factors

    j = chart.jet(nu)
    mu1, mu2, p = _chart_factors(j)
    ji = j_invariants(j)
    pb = p.conjugate()
    s = optical_scalars(j, r=r)
    val = (8.0 / s.delta) * (ji.j21b / (pb * pb) + ji.j12b / (p * p))
    return val.real


def reconstruct_surface(
    chart: CongruenceChart, rf: RField, n: int | None = None
) -> list[SurfaceSample]:
    """Surface samples at the r-field grid (or an n x n subsample of it)."""
    out = []
    if n is None or n == rf.n:
        nodes = rf.nodes
        values = rf.values
        samples = [(nodes[i, j], values[i, j]) for i in range(rf.n) for j in range(rf.n)]
    else:
        samples = [(nu, rf.at(nu)) for nu in rf.rect.grid(n)]
    for nu, r in samples:
        m1, m2 = chart.mu(nu)
        g = OrientedGeodesic.of(m1, m2)
        p = point_at(g, r)
        s = optical_scalars(chart, nu, r)
        l1, l2 = principal_curvatures(s)
        out.append(SurfaceSample(nu, r, p, l1, l2, l1 * l2 - 1.0))
    return out


def surface_tangents(chart: CongruenceChart, nu: complex, r: float, r_u: float, r_v: float):
    """Exact coordinate tangents (d/du, d/dv) of the surface nu -> Phi(nu, r(nu)).

    Returns two 3-vectors in (t, x1, x2) components, given the partials of
    the support function at nu.
    """
    from .congruence import xieta_jet

    x = xieta_jet(chart.jet(nu))
    xi, eta = x.xi, x.eta
    xi_u = x.d_xi + x.db_xi
    xi_v = 1j * (x.d_xi - x.db_xi)
    eta_u = x.d_eta + x.db_eta
    eta_v = 1j * (x.d_eta - x.db_eta)

    axi = abs(xi)
    th = math.tanh(r)
    sech2 = 1.0 - th * th
    t = 1.0 / (axi * math.cosh(r))

    def tangent(xi_s: complex, eta_s: complex, r_s: float) -> np.ndarray:
        axi_s = (xi.conjugate() * xi_s).real / axi
        t_s = -t * (axi_s / axi + th * r_s)
        z_s = eta_s - th * xi_s.conjugate() / (xi.conjugate() ** 2) + sech2 * r_s / xi.conjugate()
        return np.array([t_s, z_s.real, z_s.imag])

    return tangent(xi_u, eta_u, r_u), tangent(xi_v, eta_v, r_v)


def orthogonality_residual(chart: CongruenceChart, rf: RField, nu: complex) -> float:
    """Normalized hyperbolic inner products of surface tangents with the geodesic."""
    from .geodesics import tangent_at

    j = chart.jet(nu)
    w = support_derivative(j)
    r = rf.at(nu)
    tu, tv = surface_tangents(chart, nu, r, w.real, -w.imag)
    g = OrientedGeodesic.of(j.mu1, j.mu2)
    e0 = tangent_at(g, r)
    res = 0.0
    for tangent in (tu, tv):
        denom = float(np.linalg.norm(tangent)) * float(np.linalg.norm(e0))
        res = max(res, abs(float(np.dot(tangent, e0))) / max(denom, 1e-300))
    return res


# ---------------------------------------------------------------------------
# Codazzi-type identity and the Weingarten test


def codazzi_residual(j: Jet2) -> float:
    """Residual of d(conj sigma0) = db(rho0) + 2 mu2 rho0/(1 + conj(mu1) mu2)."""
    gd = graph_data(j)
    pb = 1.0 + gd.mu1.conjugate() * gd.mu2
    d_sigma0_bar = gd.db_sigma0.conjugate()
    lhs = d_sigma0_bar
    rhs = gd.db_rho0 + 2.0 * gd.mu2 * gd.rho0 / pb
    scale = max(1.0, abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale


def wedge_factor(gd, r: float) -> complex:
    """Coefficient relating the curvature-ratio wedge to K d(mu1)^d(conj mu1).

    d(|sigma|^2/kappa^2) ^ d((rho+1)/kappa)
        = [ i |mu2|^2 |sigma0|^4 e^{-2r}
            / (2 rho0^4 |1 + mu1 conj(mu2)|^2) ] K d(mu1) ^ d(conj mu1).
    """
    p2 = abs(1.0 + gd.mu1 * gd.mu2.conjugate()) ** 2
    return (
        1j
        * abs(gd.mu2) ** 2
        * abs(gd.sigma0) ** 4
        * math.exp(-2.0 * r)
        / (2.0 * gd.rho0.real ** 4 * p2)
    )


@dataclass(frozen=True)
class WeingartenSample:
    """Weingarten defect and wedge-identity data at one point."""

    nu: complex
    kappa: float
    K: float
    defect: float  # |d l1 ^ d l2| normalized by |grad l1| |grad l2|
    defect_raw: float
    wedge_lhs: complex
    wedge_rhs: complex
    wedge_residual: float


def _lambda_fields(chart: CongruenceChart, rf: RField, nu: complex):
    s = optical_scalars(chart, nu, rf.at(nu))
    return principal_curvatures(s)


def _stencil_derivs(f: Callable[[complex], np.ndarray], nu: complex, h: float):
    """Fourth-order (f_u, f_v) for a vector-valued field."""
    fu = (-f(nu + 2 * h) + 8 * f(nu + h) - 8 * f(nu - h) + f(nu - 2 * h)) / (12 * h)
    fv = (
        -f(nu + 2j * h) + 8 * f(nu + 1j * h) - 8 * f(nu - 1j * h) + f(nu - 2j * h)
    ) / (12 * h)
    return fu, fv


def weingarten_defect(
    chart: CongruenceChart, nu: complex, rf: RField, step: float | None = None
) -> WeingartenSample:
    """Pointwise Weingarten data of the orthogonal surface family.

    The defect is the coefficient of d(lambda1) ^ d(lambda2), computed by
    finite differences of the principal-curvature fields and normalized by
    the product of their gradient magnitudes; the wedge identity relates
    the curvature-ratio differentials to the induced Gauss curvature K and
    is evaluated as an independent cross-check.  Points with |kappa| below
    KAPPA_FLAT_BAND raise FlatPoint (K = 0 holds there by the flat branch).
    """
    r = rf.at(nu)
    kappa = surface_kappa(chart, nu, r)
    if abs(kappa) <= KAPPA_FLAT_BAND:
        raise FlatPoint(f"|kappa| = {abs(kappa):.3e} at nu = {nu}")

    h = step if step is not None else 2e-4 * max(1.0, abs(nu))

    def lambdas(p: complex) -> np.ndarray:
        return np.array(_lambda_fields(chart, rf, p))

    lu, lv = _stencil_derivs(lambdas, nu, h)
    raw = abs(lu[0] * lv[1] - lv[0] * lu[1])
    g1 = math.hypot(lu[0], lv[0])
    g2 = math.hypot(lu[1], lv[1])
    defect = raw / max(g1 * g2, 1e-14)

    # Wedge identity, same stencil: P = |sigma|^2/kappa^2, Q = (rho+1)/kappa.
    def pq(pnu: complex) -> np.ndarray:
        s = optical_scalars(chart, pnu, rf.at(pnu))
        k = abs(s.rho) ** 2 - abs(s.sigma) ** 2 - 1.0
        return np.array([abs(s.sigma) ** 2 / k**2, (s.rho.real + 1.0) / k])

    pqu, pqv = _stencil_derivs(pq, nu, h)
    wedge_lhs = complex(pqu[0] * pqv[1] - pqv[0] * pqu[1])

    j = chart.jet(nu)
    gd = graph_data(j)
    K = gauss_K(chart, nu, "closed_form")
    m1_u = j.d_mu1 + j.db_mu1
    m1_v = 1j * (j.d_mu1 - j.db_mu1)
    basis = m1_u * m1_v.conjugate() - m1_v * m1_u.conjugate()  # d(mu1)^d(conj mu1) on (u,v)
    wedge_rhs = wedge_factor(gd, r) * K * basis
    wedge_residual = abs(wedge_lhs - wedge_rhs) / max(abs(wedge_lhs), abs(wedge_rhs), 1e-30)

    return WeingartenSample(nu, kappa, K, defect, raw, wedge_lhs, wedge_rhs, wedge_residual)


@dataclass
class MainTheoremReport:
    """Grid summary of the Weingarten <-> flat-induced-metric equivalence."""

    samples: list[WeingartenSample]
    flat_points: int
    max_abs_K: float
    max_defect: float
    max_wedge_residual: float
    weingarten: bool  # max defect below threshold
    scalar_flat: bool  # max |K| below threshold
    consistent: bool

    def verdict(self) -> str:
        return "pass" if self.consistent else "fail"


def main_theorem_check(
    chart: CongruenceChart,
    rf: RField,
    n: int = 9,
    tol_K: float = TOL_K,
    tol_defect: float = TOL_DEFECT,
    margin_fraction: float = 0.05,
) -> MainTheoremReport:
    """Evaluate K and the Weingarten defect over an inner grid of the r-field.

    The orthogonal surface is Weingarten iff the induced metric of the
    congruence is flat; the report records both sides and their agreement.
    """
    inner = rf.rect.shrunk(margin_fraction * rf.rect.scale)
    samples = []
    flat_points = 0
    for nu in inner.grid(n):
        try:
            samples.append(weingarten_defect(chart, nu, rf))
        except FlatPoint:
            flat_points += 1
            k = gauss_K(chart, nu, "closed_form")
            samples.append(
                WeingartenSample(nu, 0.0, k, 0.0, 0.0, 0j, 0j, 0.0)
            )
    max_k = max(abs(s.K) for s in samples)
    max_defect = max(s.defect for s in samples)
    max_wedge = max(s.wedge_residual for s in samples)
    weingarten = max_defect <= tol_defect
    scalar_flat = max_k <= tol_K
    return MainTheoremReport(
        samples, flat_points, max_k, max_defect, max_wedge,
        weingarten, scalar_flat, weingarten == scalar_flat,
    )


# ---------------------------------------------------------------------------
# From a surface back to its normal congruence


class GraphSurface:
    """An immersed graph surface t = h(u, v), z = u + i v with exact tangents."""

    def __init__(self, h: Callable[[float, float], float],
                 h_u: Callable[[float, float], float],
                 h_v: Callable[[float, float], float],
                 label: str = "graph-surface"):
        self.h, self.h_u, self.h_v = h, h_u, h_v
        self.label = label

    def point(self, u: float, v: float) -> UpperHalfPoint:
        return UpperHalfPoint(self.h(u, v), complex(u, v))

    def frame(self, u: float, v: float):
        p = self.point(u, v)
        tu = np.array([self.h_u(u, v), 1.0, 0.0])
        tv = np.array([self.h_v(u, v), 0.0, 1.0])
        return p, tu, tv


def rotational_surface(profile: Callable[[float], float],
                       dprofile: Callable[[float], float],
                       label: str = "rotational") -> GraphSurface:
    """Surface of revolution t = profile(|z|^2) about the vertical axis."""
    return GraphSurface(
        h=lambda u, v: profile(u * u + v * v),
        h_u=lambda u, v: 2.0 * u * dprofile(u * u + v * v),
        h_v=lambda u, v: 2.0 * v * dprofile(u * u + v * v),
        label=label,
    )


class NormalCongruence(FunctionChart):
    """The chart of oriented geodesics normal to an immersed surface.

    The unit normal is the hyperbolically normalized cross product of the
    coordinate tangents (orientation of the parameterization); surface_r
    returns the geodesic parameter of the foot point, i.e. the matching
    support function.
    """

    def __init__(self, surface, domain: Rect | None = None):
        self.surface = surface
        super().__init__(self._mu_of, domain, f"normals({getattr(surface, 'label', 'surface')})")

    def _geodesic(self, nu: complex):
        p, tu, tv = self.surface.frame(nu.real, nu.imag)
        n = np.cross(tu, tv)
        nn = float(np.linalg.norm(n))
        if nn == 0:
            raise ValueError("immersion is singular: degenerate tangent frame")
        return geodesic_through(p, n * (p.t / nn))

    def _mu_of(self, nu: complex):
        g, _ = self._geodesic(nu)
        return g.mu()

    def surface_r(self, nu: complex) -> float:
        return self._geodesic(nu)[1]


def normal_congruence_of_surface(surface, domain: Rect | None = None) -> NormalCongruence:
    """Normal congruence chart of an immersed surface."""
    return NormalCongruence(surface, domain)
