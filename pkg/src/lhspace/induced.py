"""The metric a congruence inherits from the ambient neutral metric.

Real components are taken in the coordinates nu = u + i v: g_uu, g_uv and
g_vv are the values of the pullback on the coordinate vectors d/du, d/dv
(metric normalization as in kahler.py).  In the complexified frame
(d/dnu, d/dconj nu) the same form has components (g_nn, g_nnb, g_nbnb) with

    g_uu = g_nn + 2 g_nnb + g_nbnb,      g_uv = i (g_nn - g_nbnb),
    g_vv = -g_nn + 2 g_nnb - g_nbnb,     det_real = -4 (g_nn g_nbnb - g_nnb^2).

For a twist-free rank-2 graph the complexified components reduce to
g_nn = -i sigma0, g_nbnb = i conj(sigma0), g_nnb = 0, and the Gauss
curvature of the induced metric collapses (through the divergence identity
d(conj sigma0) = db(rho0) + 2 mu2 rho0 / (1 + conj(mu1) mu2)) to the
first-order expression evaluated by gauss_K(..., "closed_form").

The determinant identity tying the metric to the optical scalars,

    det[f*G] = -Delta^2 (|sigma|^2 - twist^2) / 64,

holds for the conjugate-paired determinant det[f*G] = det_real / 4; the
helper det_identity_residual checks it in exactly that form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .congruence import (
    CongruenceChart,
    Jet2,
    classify_point,
    graph_data,
    optical_scalars,
)
from .errors import DegenerateMetric, WrongRank
from .geodesics import OrientedGeodesic
from .kahler import GeodesicTangent, metric_G

# Degenerate band for the real determinant, relative to the squared metric
# scale; curvature is undefined inside it.
DEGENERATE_DET_BAND = 1e-12
# Step for the finite-difference curvature oracle, as a fraction of the
# local coordinate scale.
FD_STEP_FRACTION = 1e-3


class Signature(Enum):
    LORENTZ = "lorentz"
    DEGENERATE = "degenerate"
    RIEMANNIAN = "riemannian"


@dataclass(frozen=True)
class MetricSample:
    """Induced metric at one point, in real (u, v) components."""

    g_uu: float
    g_uv: float
    g_vv: float
    det: float
    signature: Signature

    @property
    def det_conjugate_frame(self) -> float:
        """Determinant in the conjugate-paired complex frame (det_real / 4)."""
        return self.det / 4.0


def _metric_components(j: Jet2) -> tuple[float, float, float]:
    base = OrientedGeodesic.of(j.mu1, j.mu2)
    xu = GeodesicTangent(base, j.d_mu1 + j.db_mu1, j.d_mu2 + j.db_mu2)
    xv = GeodesicTangent(base, 1j * (j.d_mu1 - j.db_mu1), 1j * (j.d_mu2 - j.db_mu2))
    return metric_G(xu, xu), metric_G(xu, xv), metric_G(xv, xv)


def pullback_metric(chart_or_jet, nu: complex | None = None) -> MetricSample:
    """Pullback of the ambient metric at nu, with signature classification."""
    j = chart_or_jet if isinstance(chart_or_jet, Jet2) else chart_or_jet.jet(nu)
    g_uu, g_uv, g_vv = _metric_components(j)
    det = g_uu * g_vv - g_uv * g_uv
    scale = max(abs(g_uu), abs(g_uv), abs(g_vv))
    if abs(det) <= DEGENERATE_DET_BAND * max(scale, 1.0) ** 2:
        sig = Signature.DEGENERATE
    elif det < 0:
        sig = Signature.LORENTZ
    else:
        sig = Signature.RIEMANNIAN
    return MetricSample(g_uu, g_uv, g_vv, det, sig)


def signature_classify(chart: CongruenceChart, nu: complex, band: float = 1e-9) -> Signature:
    """Signature from the sign of |sigma|^2 - twist^2 (an r-free invariant)."""
    s = optical_scalars(chart, nu, 0.0)
    disc = abs(s.sigma) ** 2 - s.twist**2
    if abs(disc) <= band:
        return Signature.DEGENERATE
    return Signature.LORENTZ if disc > 0 else Signature.RIEMANNIAN


def det_identity_residual(chart_or_jet, nu: complex | None = None, r: float = 0.0) -> float:
    """Relative residual of det[f*G] = -Delta^2 (|sigma|^2 - twist^2)/64.

    det[f*G] is taken in the conjugate-paired frame (real determinant / 4);
    the right-hand side is r-dependent through Delta only in ways that
    cancel, so any r gives the same residual up to roundoff.
    """
    j = chart_or_jet if isinstance(chart_or_jet, Jet2) else chart_or_jet.jet(nu)
    m = pullback_metric(j)
    s = optical_scalars(j, r=r)
    lhs = m.det_conjugate_frame
    rhs = -s.delta**2 * (abs(s.sigma) ** 2 - s.twist**2) / 64.0
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)


# ---------------------------------------------------------------------------
# Gauss curvature of the induced metric, three independent routes


def gauss_K(chart: CongruenceChart, nu: complex, method: str = "closed_form",
            step: float | None = None) -> float:
    """Gauss curvature of the induced metric at nu.

    method:
      closed_form  -- first-order expression in the graph quantities
                      sigma0, rho0 (rank-2 twist-free graphs only);
      rank1_chain  -- Christoffel assembly for charts nu = u+iv ->
                      (mu1(u), mu2(u, v));
      fd_oracle    -- finite-difference Riemann tensor of the pullback
                      metric; independent of all closed forms.
    """
    if method == "closed_form":
        return _gauss_K_closed(chart.jet(nu))
    if method == "rank1_chain":
        return _gauss_K_rank1(chart, nu, step)
    if method == "fd_oracle":
        return _gauss_K_fd(chart, nu, step)
    raise ValueError(f"unknown method {method!r}")


def _gauss_K_closed(j: Jet2) -> float:
    gd = graph_data(j)
    s0 = gd.sigma0
    if abs(s0) ** 2 <= DEGENERATE_DET_BAND:
        raise DegenerateMetric("sigma0 ~ 0: induced metric degenerate")
    mu1, mu2 = gd.mu1, gd.mu2
    p = 1.0 + mu1 * mu2.conjugate()
    ds0, dbs0 = gd.d_sigma0, gd.db_sigma0
    ds0b, dbs0b = dbs0.conjugate(), ds0.conjugate()  # derivatives of conj(sigma0)
    s0b = s0.conjugate()
    bracket = (
        mu2.conjugate() * ds0b / p
        - mu2 * dbs0 / p.conjugate()
        + 0.25 * ((ds0b * ds0b - dbs0b * dbs0) / s0b - (dbs0 * dbs0 - ds0 * ds0b) / s0)
    )
    k = (1j * bracket) / (abs(s0) ** 2)
    return k.real


def _uv_derivatives(j: Jet2, component: str):
    """(f, f_u, f_v, f_uu, f_uv, f_vv) of one chart component from its jet."""
    if component == "mu1":
        f, d, b, dd, ddb, dbdb = j.mu1, j.d_mu1, j.db_mu1, j.dd_mu1, j.ddb_mu1, j.dbdb_mu1
    else:
        f, d, b, dd, ddb, dbdb = j.mu2, j.d_mu2, j.db_mu2, j.dd_mu2, j.ddb_mu2, j.dbdb_mu2
    fu = d + b
    fv = 1j * (d - b)
    fuu = dd + 2 * ddb + dbdb
    fvv = -(dd - 2 * ddb + dbdb)
    fuv = 1j * (dd - dbdb)
    return f, fu, fv, fuu, fuv, fvv


def rank1_metric(j: Jet2) -> tuple[float, float]:
    """(g_uu, g_uv) of a rank-1 chart nu -> (mu1(u), mu2(u, v)); g_vv = 0.

    g_uu = -i [ du(mu1) du(conj mu2) / (1 + mu1 conj mu2)^2
              - du(conj mu1) du(mu2) / (1 + conj mu1 mu2)^2 ],
    g_uv = (same with one v-derivative of mu2, halved).
    """
    m1, m1u, m1v, *_ = _uv_derivatives(j, "mu1")
    m2, m2u, m2v, *_ = _uv_derivatives(j, "mu2")
    p = 1.0 + m1 * m2.conjugate()
    pb = p.conjugate()
    g_uu = (-1j * (m1u * m2u.conjugate() / (p * p) - m1u.conjugate() * m2u / (pb * pb))).real
    g_uv = (-0.5j * (m1u * m2v.conjugate() / (p * p) - m1u.conjugate() * m2v / (pb * pb))).real
    return g_uu, g_uv


def rank1_gamma_uuu(j: Jet2) -> float:
    """The single surviving Christoffel symbol of a twist-free rank-1 chart.

    Gamma^u_uu = -Re( duu(mu1)/du(mu1) - 2 conj(mu2) du(mu1)/(1 + mu1 conj mu2) ).
    """
    m1, m1u, m1v, m1uu, _, _ = _uv_derivatives(j, "mu1")
    m2 = j.mu2
    if abs(m1u) <= 1e-14:
        raise WrongRank("du(mu1) = 0: chart not rank 1 in u")
    p = 1.0 + m1 * m2.conjugate()
    return -(m1uu / m1u - 2.0 * m2.conjugate() * m1u / p).real


def _gauss_K_rank1(chart: CongruenceChart, nu: complex, step: float | None) -> float:
    j = chart.jet(nu)
    _, _, m1v, *_ = _uv_derivatives(j, "mu1")
    if abs(m1v) > 1e-8 * max(1.0, abs(j.d_mu1 + j.db_mu1)):
        raise WrongRank("mu1 depends on v; rank-1 chain needs mu1 = mu1(u)")
    _, g_uv = rank1_metric(j)
    if abs(g_uv) <= DEGENERATE_DET_BAND:
        raise DegenerateMetric("g_uv ~ 0: rank-1 induced metric degenerate")
    h = step if step is not None else 1e-4 * max(1.0, abs(nu))
    # dv of Gamma^u_uu by fourth-order central differences; the curvature
    # relation R_vuvu = g_uv dv(Gamma^u_uu) = -g_uv^2 K closes the chain.
    gm2 = rank1_gamma_uuu(chart.jet(nu - 2j * h))
    gm1 = rank1_gamma_uuu(chart.jet(nu - 1j * h))
    gp1 = rank1_gamma_uuu(chart.jet(nu + 1j * h))
    gp2 = rank1_gamma_uuu(chart.jet(nu + 2j * h))
    dv_gamma = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h)
    return -dv_gamma / g_uv


def _gauss_K_fd(chart: CongruenceChart, nu: complex, step: float | None) -> float:
    h = step if step is not None else FD_STEP_FRACTION * max(1.0, abs(nu))
    k_h = _fd_K_once(chart, nu, h)
    k_h2 = _fd_K_once(chart, nu, h / 2.0)
    return (4.0 * k_h2 - k_h) / 3.0


def _fd_K_once(chart: CongruenceChart, nu: complex, h: float) -> float:
    """Second-order finite-difference Gauss curvature on a 5x5 metric stencil."""
    g = {}
    for i in range(-2, 3):
        for k in range(-2, 3):
            m = pullback_metric(chart.jet(nu + complex(i * h, k * h)))
            g[(i, k)] = np.array([[m.g_uu, m.g_uv], [m.g_uv, m.g_vv]])

    def dg(i, k):
        """(d_u g, d_v g) at stencil node (i, k) by central differences."""
        du = (g[(i + 1, k)] - g[(i - 1, k)]) / (2 * h)
        dv = (g[(i, k + 1)] - g[(i, k - 1)]) / (2 * h)
        return np.stack([du, dv])

    def christoffel(i, k):
        gm = g[(i, k)]
        det = gm[0, 0] * gm[1, 1] - gm[0, 1] ** 2
        if abs(det) <= DEGENERATE_DET_BAND * max(1.0, float(np.abs(gm).max())) ** 2:
            raise DegenerateMetric("degenerate metric in finite-difference stencil")
        ginv = np.array([[gm[1, 1], -gm[0, 1]], [-gm[0, 1], gm[0, 0]]]) / det
        d = dg(i, k)  # d[c, a, b] = d_c g_ab
        gamma = np.empty((2, 2, 2))
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    gamma[a, b, c] = 0.5 * sum(
                        ginv[a, d_] * (d[b, d_, c] + d[c, b, d_] - d[d_, b, c])
                        for d_ in range(2)
                    )
        return gamma

    gamma0 = christoffel(0, 0)
    du_gamma = (christoffel(1, 0) - christoffel(-1, 0)) / (2 * h)
    dv_gamma = (christoffel(0, 1) - christoffel(0, -1)) / (2 * h)
    dgamma = np.stack([du_gamma, dv_gamma])  # dgamma[c, a, b, d] = d_c Gamma^a_bd

    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    #           + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    u, v = 0, 1
    a = u

    def riem(a, b, c, d):
        val = dgamma[c, a, d, b] - dgamma[d, a, c, b]
        for e in range(2):
            val += gamma0[a, c, e] * gamma0[e, d, b] - gamma0[a, d, e] * gamma0[e, c, b]
        return val

    gm = g[(0, 0)]
    det = gm[0, 0] * gm[1, 1] - gm[0, 1] ** 2
    r_uvuv = gm[u, 0] * riem(0, v, u, v) + gm[u, 1] * riem(1, v, u, v)
    return float(r_uvuv / det)
