"""Closed-form congruence families and their classification predicates.

The holomorphic-and-Lagrangian (totally null) graphs are exactly the
Moebius charts

    mu2 = (A0 + (A0 conj(A0) + A1) mu1) / (1 + conj(A0) mu1),

with A0 complex and A1 real: geodesic spheres for A1 > 0, horospheres for
A1 = 0 (mu2 = A0 constant) and totally geodesic surfaces for A1 < 0.  The
support functions of the family are

    2 r = ln |A0 + (A1 + A0 conj(A0)) mu1|^2 + C,

with divergence rho = -(A1 e^C + 1)/(A1 e^C - 1) on the C-surface.

Two scalar predicates single out classical surface classes among rank-2
twist-free graphs: the orthogonal surfaces are flat iff mu2 is an
anti-holomorphic function of mu1, and some orthogonal surface has constant
mean curvature one iff sigma0 = d(conj mu2)/(1 + mu1 conj mu2)^2 is
holomorphic (with the mean-curvature-one member at
r = -ln(|1 + conj(mu1) mu2|^2 rho0 / |mu2|^2)/2, where it has rho = -1).

Rotationally symmetric congruences mu2 = g(|mu1|^2) mu1 with g real are
twist-free for every profile g; the profile ODE dg/ds = c (1 + g s)^2/s^2
makes sigma0 = c/mu1^2 holomorphic and provides non-umbilic tests of the
mean-curvature criterion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import solve_ivp

from .congruence import (
    CongruenceChart,
    ExprChart,
    Jet2,
    JetChart,
    Rect,
    classify_point,
    graph_chart,
    graph_data,
)
from .errors import NonPositiveRho0, NotLagrangian, PoleInDomain
from .models import UpperHalfPoint

# Default sampling domain: a square inside the disk |nu| <= 0.8, and the
# margin kept clear around any Moebius pole.
DEFAULT_RECT = Rect(-0.55, 0.55, -0.55, 0.55)
POLE_MARGIN = 0.05
DEFAULT_GRID = 41


@dataclass(frozen=True)
class AlphaParams:
    """Parameters of a totally null (holomorphic Lagrangian) graph chart."""

    a0: complex
    a1: float

    def __post_init__(self):
        if abs(float(self.a1)) == 0.0 and abs(self.a0) == 0.0:
            raise ValueError("A0 = A1 = 0 gives the constant chart mu2 = 0")


def _fmt_complex(c: complex) -> str:
    return f"({c.real:.17g}+{c.imag:.17g}i)" if c.imag >= 0 else f"({c.real:.17g}-{-c.imag:.17g}i)"


def alpha_chart(p: AlphaParams, domain: Rect | None = None) -> ExprChart:
    """The Moebius graph chart of the family, with its pole kept off-domain."""
    domain = domain or DEFAULT_RECT
    if abs(p.a0) > 0:
        pole = -1.0 / p.a0.conjugate()
        if domain.contains(pole, -POLE_MARGIN):
            raise PoleInDomain(f"pole {pole} inside chart domain {domain}")
    a0 = _fmt_complex(p.a0)
    lin = _fmt_complex(p.a0 * p.a0.conjugate() + p.a1)
    a0c = _fmt_complex(p.a0.conjugate())
    text = f"({a0} + {lin}*m1) / (1 + {a0c}*m1)"
    return graph_chart(text, domain, label=f"alpha(A0={p.a0}, A1={p.a1})")


def alpha_taylor_coefficient(p: AlphaParams, n: int) -> complex:
    """Taylor coefficient A_n of the chart at mu1 = 0: A_n = (-1)^(n-1) conj(A0)^(n-1) A1."""
    if n == 0:
        return p.a0
    return (-1.0) ** (n - 1) * p.a0.conjugate() ** (n - 1) * p.a1


def alpha_r_field(p: AlphaParams, c: float, nu: complex) -> float:
    """Closed-form support function 2r = ln|A0 + (A1 + |A0|^2) mu1|^2 + C."""
    f = p.a0 + (p.a1 + abs(p.a0) ** 2) * nu
    return 0.5 * (math.log(abs(f) ** 2) + c)


def alpha_rho(p: AlphaParams, c: float) -> float:
    """Divergence of the congruence on the C-surface of the family."""
    q = p.a1 * math.exp(c)
    return -(q + 1.0) / (q - 1.0)


def sphere_congruence(center: UpperHalfPoint) -> AlphaParams:
    """Parameters of the normal congruence of geodesic spheres about a point.

    Inverts z0 = A0/(A1 + |A0|^2), t0 = sqrt(A1)/(A1 + |A0|^2): with
    q = t0^2 + |z0|^2 one finds A0 = z0/q and A1 = t0^2/q^2.
    """
    q = center.t**2 + abs(center.z) ** 2
    return AlphaParams(center.z / q, center.t**2 / q**2)


def sphere_center(p: AlphaParams) -> UpperHalfPoint:
    """Centre of the geodesic spheres of an A1 > 0 chart."""
    if not p.a1 > 0:
        raise ValueError("sphere charts need A1 > 0")
    d = p.a1 + abs(p.a0) ** 2
    return UpperHalfPoint(math.sqrt(p.a1) / d, p.a0 / d)


def sphere_equation_residual(center: UpperHalfPoint, mu1: complex, mu2: complex) -> float:
    """Residual of conj(z0) mu1 mu2 + (t0^2 + |z0|^2) mu2 - mu1 - z0 = 0."""
    z0, t0 = center.z, center.t
    return abs(z0.conjugate() * mu1 * mu2 + (t0 * t0 + abs(z0) ** 2) * mu2 - mu1 - z0)


def horosphere_chart(a0: complex, domain: Rect | None = None) -> ExprChart:
    """Constant chart mu2 = A0: all geodesics end at the ideal point 1/conj(A0)."""
    return graph_chart(f"0*m1 + {_fmt_complex(a0)}", domain or DEFAULT_RECT,
                       label=f"horosphere(A0={a0})")


def totally_geodesic_chart(p: AlphaParams, domain: Rect | None = None
                           ) -> tuple[ExprChart, float]:
    """An A1 < 0 chart and the constant C = -ln(-A1) of its geodesic member.

    On the support surface with that constant both the shear and the
    divergence vanish; the surface is a hemisphere orthogonal to the
    ideal boundary.
    """
    if not p.a1 < 0:
        raise ValueError("totally geodesic branch needs A1 < 0")
    return alpha_chart(p, domain), -math.log(-p.a1)


# ---------------------------------------------------------------------------
# Scalar predicates on rank-2 twist-free graphs


def _lagrangian_gate(chart: CongruenceChart, samples, tol: float = 1e-6):
    for nu in samples:
        c = classify_point(chart, nu)
        if not c.lagrangian:
            raise NotLagrangian(
                f"chart is not twist-free at nu = {nu} (residual {c.lagrangian_residual:.3e})"
            )


def flatness_test(chart: CongruenceChart, n: int = 9, tol: float = 1e-8) -> bool:
    """True iff the orthogonal surfaces are flat: mu2 anti-holomorphic in mu1."""
    samples = chart.grid(n)
    _lagrangian_gate(chart, samples)
    worst = 0.0
    for nu in samples:
        gd = graph_data(chart.jet(nu))
        scale = max(1.0, abs(gd.d_mu2) + abs(gd.db_mu2))
        worst = max(worst, abs(gd.d_mu2) / scale)
    return worst <= tol


@dataclass(frozen=True)
class CmcResult:
    is_cmc: bool
    degenerate_shear: bool
    max_dbar_sigma0: float


def cmc1_r_field(gd, nu: complex | None = None) -> float:
    """Support value r = -ln(|1 + conj(mu1) mu2|^2 rho0 / |mu2|^2) / 2."""
    rho0 = gd.rho0.real
    if rho0 <= 0:
        raise NonPositiveRho0(f"rho0 = {rho0:.3e} <= 0")
    w = abs(1.0 + gd.mu1.conjugate() * gd.mu2) ** 2 / abs(gd.mu2) ** 2
    return -0.5 * math.log(w * rho0)


def cmc1_test(chart: CongruenceChart, n: int = 9, tol: float = 1e-7) -> CmcResult:
    """Does some orthogonal surface have constant mean curvature one?

    True iff sigma0 is holomorphic (max |db sigma0| <= tol over the grid).
    A chart with sigma0 identically zero is umbilic: the criterion is
    met but the induced metric is degenerate, which the flag reports.
    Charts with rho0 <= 0 somewhere cannot carry the distinguished
    surface and raise NonPositiveRho0 (unless the shear is degenerate).
    """
    samples = chart.grid(n)
    _lagrangian_gate(chart, samples)
    data = [graph_data(chart.jet(nu)) for nu in samples]
    max_db = max(abs(gd.db_sigma0) for gd in data)
    max_s0 = max(abs(gd.sigma0) for gd in data)
    degenerate = max_s0 <= 1e-12
    is_cmc = max_db <= tol
    if not degenerate:
        bad = min(gd.rho0.real for gd in data)
        if bad <= 0:
            raise NonPositiveRho0(f"rho0 reaches {bad:.3e} on the domain")
    return CmcResult(is_cmc, degenerate, max_db)


# ---------------------------------------------------------------------------
# Rotational congruences


def rotational_chart(g_text: str, domain: Rect, label: str = "rotational") -> ExprChart:
    """Chart mu2 = g(|mu1|^2) mu1 from a DSL expression g in s = m1*c1.

    Any real-valued profile g gives a twist-free congruence; its orthogonal
    surfaces are rotationally symmetric, hence Weingarten.
    """
    return graph_chart(f"({g_text})*m1", domain, label=label)


class Cmc1RotationalChart(JetChart):
    """Rotational chart whose profile solves dg/ds = c (1 + g s)^2 / s^2.

    This makes sigma0 = c / mu1^2 holomorphic, so the congruence carries an
    orthogonal surface of constant mean curvature one.  Jets are exact in
    terms of the profile: derivatives of g come from the ODE itself, so the
    only error is the ODE solver tolerance.
    """

    def __init__(self, c: float, g0: float, s0: float, s_range: tuple[float, float],
                 domain: Rect):
        if not (0 < s_range[0] < s0 < s_range[1]):
            raise ValueError("need 0 < s_min < s0 < s_max")
        self.c = float(c)

        def rhs(s, y):
            return [self.c * (1.0 + y[0] * s) ** 2 / (s * s)]

        kw = dict(rtol=1e-12, atol=1e-14, dense_output=True, method="DOP853")
        fwd = solve_ivp(rhs, (s0, s_range[1] * 1.01), [g0], **kw)
        bwd = solve_ivp(rhs, (s0, s_range[0] * 0.99), [g0], **kw)
        if not (fwd.success and bwd.success):
            raise RuntimeError("profile ODE integration failed")
        self._fwd, self._bwd, self._s0 = fwd.sol, bwd.sol, s0
        super().__init__(self._jet, domain, label=f"cmc1-rotational(c={c})")

    def _g(self, s: float) -> float:
        sol = self._fwd if s >= self._s0 else self._bwd
        return float(sol(s)[0])

    def _jet(self, nu: complex) -> Jet2:
        s = abs(nu) ** 2
        g = self._g(s)
        w = 1.0 + g * s
        g1 = self.c * w * w / (s * s)
        g2 = 2.0 * self.c * w * ((g1 * s + g) * s - w) / (s**3)
        # mu2 = g(s) mu1 with s = nu conj(nu):
        #   d mu2 = g1 s + g, db mu2 = g1 nu^2,
        #   dd mu2 = conj(nu)(g2 s + 2 g1), ddb mu2 = nu (g2 s + 2 g1),
        #   dbdb mu2 = g2 nu^3.
        nb = nu.conjugate()
        return Jet2(
            nu,
            mu1=nu, mu2=g * nu,
            d_mu1=1.0, db_mu1=0.0,
            d_mu2=g1 * s + g, db_mu2=g1 * nu * nu,
            dd_mu1=0.0, ddb_mu1=0.0, dbdb_mu1=0.0,
            dd_mu2=nb * (g2 * s + 2.0 * g1),
            ddb_mu2=nu * (g2 * s + 2.0 * g1),
            dbdb_mu2=g2 * nu**3,
        )


def _interval_min_sq(a: float, b: float) -> float:
    if a <= 0.0 <= b:
        return 0.0
    return min(a * a, b * b)


def cmc1_rotational_chart(c: float = 0.1, g0: float = 1.0, s0: float = 1.0,
                          domain: Rect | None = None) -> Cmc1RotationalChart:
    domain = domain or Rect(0.72, 1.32, -0.26, 0.26)
    s_min = _interval_min_sq(domain.u0, domain.u1) + _interval_min_sq(domain.v0, domain.v1)
    s_max = max(
        abs(complex(u, v)) ** 2
        for u in (domain.u0, domain.u1)
        for v in (domain.v0, domain.v1)
    )
    if s_min <= 0.0:
        raise ValueError("domain must avoid the rotation axis nu = 0")
    return Cmc1RotationalChart(c, g0, s0, (s_min, s_max), domain)


# ---------------------------------------------------------------------------
# Rank-1 twist-free charts


def rank1_chart(index: int = 0) -> ExprChart:
    """Canned rank-1 twist-free charts nu = u + i v -> (mu1(u), mu2(u, v)).

    They are built from mu2 = (1/H - 1)/conj(mu1) with H chosen so that
    1 + conj(mu1) mu2 = 1/H and Re((d/du ln conj(mu1)) H) is independent of
    v, which is exactly the twist-free condition at rank 1.
    """
    dom = Rect(0.6, 1.4, -0.4, 0.4)
    if index == 0:
        h = "u*(1 + i*(1 + 0.3*v))"
        return ExprChart("u", f"(1/({h}) - 1)/u", dom, label="rank1-0")
    if index == 1:
        h = "u*((1 + 0.2*u^2) + i*(1 + 0.25*v + 0.1*u*v))"
        return ExprChart("u", f"(1/({h}) - 1)/u", dom, label="rank1-1")
    if index == 2:
        # Complex curve mu1(u) = u + 0.2 i u^2; beta = d/du ln conj(mu1).
        m1 = "u + 0.2i*u^2"
        m1c = "u - 0.2i*u^2"
        beta = f"(1 - 0.4i*u)/({m1c})"
        h = f"((1 + 0.1*u) + i*(1 + 0.3*v))/({beta})"
        return ExprChart(m1, f"(1/({h}) - 1)/({m1c})", dom, label="rank1-2")
    raise ValueError("rank-1 chart index must be 0, 1 or 2")


# ---------------------------------------------------------------------------
# CLI-facing registry


def chart_from_name(name: str, *, center: UpperHalfPoint | None = None,
                    params: tuple | None = None, expr: str | None = None,
                    profile: str | None = None, domain: Rect | None = None):
    """Build a catalog chart (or surface congruence) by name.

    Names: sphere, horosphere, totally-geodesic, alpha, flat-conjugate,
    rotational, cmc1-rotational, custom-expression.
    """
    from .surfaces import normal_congruence_of_surface, rotational_surface

    if name == "cmc1-rotational":
        return cmc1_rotational_chart(domain=domain)
    domain = domain or DEFAULT_RECT
    if name == "sphere":
        if center is None:
            raise ValueError("sphere chart needs a --center")
        return alpha_chart(sphere_congruence(center), domain)
    if name == "horosphere":
        a0 = complex(*params) if params else 1.0 + 0j
        return horosphere_chart(a0, domain)
    if name == "totally-geodesic":
        if params:
            p = AlphaParams(complex(params[0], params[1]), float(params[2]))
        else:
            p = AlphaParams(0j, -1.0)
        return totally_geodesic_chart(p, domain)[0]
    if name == "alpha":
        if not params or len(params) < 3:
            raise ValueError("alpha chart needs --params a0_re,a0_im,a1")
        return alpha_chart(AlphaParams(complex(params[0], params[1]), float(params[2])), domain)
    if name == "flat-conjugate":
        return graph_chart("conj(m1)", domain, label="flat-conjugate")
    if name == "rotational":
        profiles = {
            "cosh": (lambda s: 0.6 * math.cosh(math.sqrt(s) / 1.2) if s > 0 else 0.6,
                     lambda s: 0.25 * math.sinh(math.sqrt(s) / 1.2) / math.sqrt(s)
                     if s > 1e-12 else 0.25 / 1.2),
            "paraboloid": (lambda s: 0.9 + 0.22 * s, lambda s: 0.22),
        }
        key = profile or "cosh"
        if key not in profiles:
            raise ValueError(f"unknown rotational profile {key!r}")
        p, dp = profiles[key]
        surf = rotational_surface(p, dp, label=f"rotational-{key}")
        return normal_congruence_of_surface(surf, domain)
    if name == "custom-expression":
        if not expr:
            raise ValueError("custom-expression needs --expr")
        return graph_chart(expr, domain, label="custom")
    raise ValueError(f"unknown catalog entry {name!r}")
