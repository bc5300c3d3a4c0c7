"""Parameterized surfaces in the space of oriented geodesics.

A congruence chart is a smooth map nu -> (mu1(nu, conj nu), mu2(nu, conj nu))
over a rectangle in the nu-plane, together with its first and second
Wirtinger jets.  Charts defined by expressions carry exact symbolic jets;
charts defined by plain callables get numeric jets from central differences
of the underlying real map (complex-step differentiation is inapplicable
because charts depend on nu and conj(nu) jointly).

First-order invariants of the congruence along its geodesics are the
optical scalars: the complex divergence rho (its imaginary part is the
twist), the complex shear sigma, and the frame determinant Delta, with

    J_kl = d(mu_k) db(mu_l) - db(mu_k) d(mu_l),   k, l in {1, 2, 1b, 2b},

    Delta/4 = J_22b e^{2r} / (|mu2|^2 |1+mu1 conj(mu2)|^2)
            + J_2b1 / (1+mu1 conj(mu2))^2 + J_1b2 / (1+conj(mu1) mu2)^2
            + |mu2|^2 J_11b e^{-2r} / |1+mu1 conj(mu2)|^2,

    sigma = 8 mu2 J_2b1b / (conj(mu2) Delta |1+mu1 conj(mu2)|^2),
    rho   = -1 - (8/Delta) [ J_21b / (1+conj(mu1) mu2)^2
                             - |mu2|^2 J_11b e^{-2r} / |1+conj(mu1) mu2|^2 ],

where d, db differentiate in nu, conj(nu).  They satisfy the Sachs
equations d(rho)/dr = rho^2 + |sigma|^2 - 1 and d(sigma)/dr = 2 Re(rho) sigma,
which the test-suite uses as the master oracle for every formula here.

The same scalars are also computed from the (xi, eta) chart through an
adapted null frame; the two routes agree (in rho and |sigma|; the phase of
sigma is tied to the frame and is not a chart invariant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ChartSingular, DegenerateFrame, OutOfDomain, WrongRank
from .geodesics import EPS_DIAG
from . import exprdsl

# Classification tolerance: one order above accumulated numeric-jet error.
TOL_CLASS = 1e-8
EPS_FRAME = 1e-10

_EPS = np.finfo(float).eps
# Order-adapted finite-difference steps.  First derivatives use the classic
# cbrt(eps) step; pure/mixed second differences need a larger step or the
# eps/h^2 roundoff would swamp the 1e-8 jet accuracy target.  One level of
# Richardson extrapolation keeps the truncation term at the same size.
_H1 = _EPS ** (1.0 / 3.0)
_H2 = _EPS ** (1.0 / 6.0)


# ---------------------------------------------------------------------------
# Domains and jets


@dataclass(frozen=True)
class Rect:
    """A closed rectangle [u0, u1] x [v0, v1] in the nu = u + i v plane."""

    u0: float
    u1: float
    v0: float
    v1: float

    def __post_init__(self):
        if not (self.u0 < self.u1 and self.v0 < self.v1):
            raise ValueError("rectangle must have positive extent")

    @property
    def scale(self) -> float:
        return max(self.u1 - self.u0, self.v1 - self.v0)

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.u0 + self.u1), 0.5 * (self.v0 + self.v1))

    def contains(self, nu: complex, margin: float = 0.0) -> bool:
        return (
            self.u0 + margin <= nu.real <= self.u1 - margin
            and self.v0 + margin <= nu.imag <= self.v1 - margin
        )

    def shrunk(self, margin: float) -> "Rect":
        return Rect(self.u0 + margin, self.u1 - margin, self.v0 + margin, self.v1 - margin)

    def grid(self, n: int) -> np.ndarray:
        """An n x n grid of sample points, flattened to one complex array."""
        if n < 2:
            raise ValueError("need at least a 2 x 2 grid")
        us = np.linspace(self.u0, self.u1, n)
        vs = np.linspace(self.v0, self.v1, n)
        uu, vv = np.meshgrid(us, vs, indexing="ij")
        return (uu + 1j * vv).ravel()


@dataclass(frozen=True)
class Jet2:
    """Values and Wirtinger partials of (mu1, mu2) up to second order.

    d_* is the nu-derivative, db_* the conj(nu)-derivative; mixed partials
    commute.  Partials of the conjugated components follow by conjugation,
    e.g. d(conj mu1) = conj(db mu1).
    """

    nu: complex
    mu1: complex
    mu2: complex
    d_mu1: complex
    db_mu1: complex
    d_mu2: complex
    db_mu2: complex
    dd_mu1: complex
    ddb_mu1: complex
    dbdb_mu1: complex
    dd_mu2: complex
    ddb_mu2: complex
    dbdb_mu2: complex


class CongruenceChart:
    """Base class: a map nu -> (mu1, mu2) with second-order jets."""

    def __init__(self, domain: Rect | None = None, label: str = "chart"):
        self.domain = domain
        self.label = label

    def mu(self, nu: complex) -> tuple[complex, complex]:
        raise NotImplementedError

    def jet(self, nu: complex) -> Jet2:
        raise NotImplementedError

    def check_domain(self, nu: complex, margin: float = 0.0):
        if self.domain is not None and not self.domain.contains(nu, margin):
            raise OutOfDomain(f"nu = {nu} outside the chart domain {self.domain}")

    def grid(self, n: int = 41) -> np.ndarray:
        if self.domain is None:
            raise OutOfDomain("chart has no declared domain to sample")
        return self.domain.grid(n)


class ExprChart(CongruenceChart):
    """Chart whose components are DSL expressions with exact symbolic jets.

    Expressions either use m1/c1 (nu and its conjugate) or the real pair
    u/v; the two styles cannot be mixed within one chart.
    """

    def __init__(self, mu1_expr, mu2_expr, domain: Rect | None = None, label: str = "expr"):
        super().__init__(domain, label)
        self.mu1_expr = exprdsl.parse(mu1_expr) if isinstance(mu1_expr, str) else mu1_expr
        self.mu2_expr = exprdsl.parse(mu2_expr) if isinstance(mu2_expr, str) else mu2_expr
        used = exprdsl.variables_of(self.mu1_expr) | exprdsl.variables_of(self.mu2_expr)
        if used <= {"m1", "c1"}:
            first, second = "m1", "c1"
        elif used <= {"u", "v"}:
            first, second = "u", "v"
        else:
            raise ValueError(f"mixed variable sets in chart expressions: {sorted(used)}")
        self._real_vars = first == "u"
        self._derivs = {}
        for name, e in (("mu1", self.mu1_expr), ("mu2", self.mu2_expr)):
            da = exprdsl.diff(e, first)
            db = exprdsl.diff(e, second)
            self._derivs[name] = (
                e,
                da,
                db,
                exprdsl.diff(da, first),
                exprdsl.diff(da, second),
                exprdsl.diff(db, second),
            )

    def _env(self, nu: complex) -> dict:
        if self._real_vars:
            return {"u": complex(nu.real), "v": complex(nu.imag)}
        return {"m1": nu, "c1": nu.conjugate()}

    def mu(self, nu: complex) -> tuple[complex, complex]:
        env = self._env(nu)
        return exprdsl.evaluate(self.mu1_expr, env), exprdsl.evaluate(self.mu2_expr, env)

    def jet(self, nu: complex) -> Jet2:
        self.check_domain(nu)
        env = self._env(nu)
        out = {}
        for name in ("mu1", "mu2"):
            e, da, db, daa, dab, dbb = self._derivs[name]
            vals = [exprdsl.evaluate(x, env) for x in (e, da, db, daa, dab, dbb)]
            if self._real_vars:
                # Convert u/v partials to Wirtinger: d = (du - i dv)/2.
                f, fu, fv, fuu, fuv, fvv = vals
                d = 0.5 * (fu - 1j * fv)
                dbw = 0.5 * (fu + 1j * fv)
                dd = 0.25 * (fuu - fvv - 2j * fuv)
                ddb = 0.25 * (fuu + fvv)
                dbdb = 0.25 * (fuu - fvv + 2j * fuv)
                vals = [f, d, dbw, dd, ddb, dbdb]
            out[name] = vals
        m1, m2 = out["mu1"], out["mu2"]
        return Jet2(
            nu,
            m1[0], m2[0], m1[1], m1[2], m2[1], m2[2],
            m1[3], m1[4], m1[5], m2[3], m2[4], m2[5],
        )


def graph_chart(mu2_expr, domain: Rect | None = None, label: str = "graph") -> ExprChart:
    """Rank-2 graph chart mu1 = nu, mu2 = F(nu, conj nu) from a DSL expression."""
    return ExprChart(exprdsl.Var("m1"), mu2_expr, domain, label)


class FunctionChart(CongruenceChart):
    """Chart from a plain callable nu -> (mu1, mu2) with numeric Wirtinger jets."""

    def __init__(self, fn: Callable[[complex], tuple[complex, complex]],
                 domain: Rect | None = None, label: str = "callable"):
        super().__init__(domain, label)
        self._fn = fn

    def mu(self, nu: complex) -> tuple[complex, complex]:
        m1, m2 = self._fn(nu)
        return complex(m1), complex(m2)

    def jet(self, nu: complex) -> Jet2:
        scale = max(1.0, abs(nu))
        h2 = _H2 * scale
        self.check_domain(nu, margin=2.0 * h2)
        return _numeric_jet(self.mu, nu, scale)


class JetChart(CongruenceChart):
    """Chart defined directly by a user-supplied exact jet function."""

    def __init__(self, jet_fn: Callable[[complex], Jet2],
                 domain: Rect | None = None, label: str = "jet"):
        super().__init__(domain, label)
        self._jet_fn = jet_fn

    def mu(self, nu: complex) -> tuple[complex, complex]:
        j = self._jet_fn(nu)
        return j.mu1, j.mu2

    def jet(self, nu: complex) -> Jet2:
        self.check_domain(nu)
        return self._jet_fn(nu)


class ReversedChart(CongruenceChart):
    """The orientation-reversed congruence of a base chart.

    Reversal swaps the ideal endpoints, (mu1, mu2) -> (-1/conj(mu2),
    -1/conj(mu1)); the jets transform by exact chain rule.
    """

    def __init__(self, base: CongruenceChart):
        super().__init__(base.domain, f"reversed({base.label})")
        self.base = base

    def mu(self, nu: complex) -> tuple[complex, complex]:
        m1, m2 = self.base.mu(nu)
        if m1 == 0 or m2 == 0:
            raise ChartSingular("reversal needs nonzero mu1 and mu2")
        return -1.0 / m2.conjugate(), -1.0 / m1.conjugate()

    def jet(self, nu: complex) -> Jet2:
        j = self.base.jet(nu)
        if j.mu1 == 0 or j.mu2 == 0:
            raise ChartSingular("reversal needs nonzero mu1 and mu2")
        # New first component: -1/conj(mu2).  With w = conj(mu2):
        # d(-1/w) = d(w)/w^2 and d(conj mu2) = conj(db mu2), etc.
        m1n, d1, db1, dd1, ddb1, dbdb1 = _inv_conj_jet(
            j.mu2, j.d_mu2, j.db_mu2, j.dd_mu2, j.ddb_mu2, j.dbdb_mu2
        )
        m2n, d2, db2, dd2, ddb2, dbdb2 = _inv_conj_jet(
            j.mu1, j.d_mu1, j.db_mu1, j.dd_mu1, j.ddb_mu1, j.dbdb_mu1
        )
        return Jet2(j.nu, m1n, m2n, d1, db1, d2, db2, dd1, ddb1, dbdb1, dd2, ddb2, dbdb2)


def _inv_conj_jet(f, d, db, dd, ddb, dbdb):
    """Jet of g = -1/conj(f) from the jet of f."""
    w = f.conjugate()
    # Wirtinger partials of conj(f).
    dw, dbw = db.conjugate(), d.conjugate()
    ddw, ddbw, dbdbw = dbdb.conjugate(), ddb.conjugate(), dd.conjugate()
    g = -1.0 / w
    dg = dw / (w * w)
    dbg = dbw / (w * w)
    ddg = ddw / (w * w) - 2.0 * dw * dw / (w * w * w)
    ddbg = ddbw / (w * w) - 2.0 * dw * dbw / (w * w * w)
    dbdbg = dbdbw / (w * w) - 2.0 * dbw * dbw / (w * w * w)
    return g, dg, dbg, ddg, ddbg, dbdbg


def _numeric_jet(fn, nu: complex, scale: float) -> Jet2:
    """Central differences with one Richardson level on the real map (u, v)."""

    def val(du: float, dv: float) -> np.ndarray:
        m1, m2 = fn(nu + complex(du, dv))
        return np.array([m1, m2], dtype=complex)

    f0 = val(0.0, 0.0)

    def d1(axis: int, h: float) -> np.ndarray:
        if axis == 0:
            return (val(h, 0) - val(-h, 0)) / (2 * h)
        return (val(0, h) - val(0, -h)) / (2 * h)

    def d2(axis: int, h: float) -> np.ndarray:
        if axis == 0:
            return (val(h, 0) - 2 * f0 + val(-h, 0)) / (h * h)
        return (val(0, h) - 2 * f0 + val(0, -h)) / (h * h)

    def dmix(h: float) -> np.ndarray:
        return (val(h, h) + val(-h, -h) - val(h, -h) - val(-h, h)) / (4 * h * h)

    h1 = _H1 * scale
    h2 = _H2 * scale
    fu = (4.0 * d1(0, h1 / 2) - d1(0, h1)) / 3.0
    fv = (4.0 * d1(1, h1 / 2) - d1(1, h1)) / 3.0
    fuu = (4.0 * d2(0, h2 / 2) - d2(0, h2)) / 3.0
    fvv = (4.0 * d2(1, h2 / 2) - d2(1, h2)) / 3.0
    fuv = (4.0 * dmix(h2 / 2) - dmix(h2)) / 3.0

    d = 0.5 * (fu - 1j * fv)
    db = 0.5 * (fu + 1j * fv)
    dd = 0.25 * (fuu - fvv - 2j * fuv)
    ddb = 0.25 * (fuu + fvv)
    dbdb = 0.25 * (fuu - fvv + 2j * fuv)
    return Jet2(
        nu,
        f0[0], f0[1],
        d[0], db[0], d[1], db[1],
        dd[0], ddb[0], dbdb[0], dd[1], ddb[1], dbdb[1],
    )


def jets(chart: CongruenceChart, nu: complex) -> Jet2:
    """Second-order Wirtinger jet of the chart at nu."""
    return chart.jet(nu)


# ---------------------------------------------------------------------------
# First-order jet numbers: a value together with its nu-derivatives, with
# arithmetic.  Conjugation swaps the two derivative slots, matching
# d(conj f) = conj(db f).


class JNum:
    __slots__ = ("v", "d", "b")

    def __init__(self, v: complex, d: complex = 0j, b: complex = 0j):
        self.v, self.d, self.b = complex(v), complex(d), complex(b)

    def conj(self) -> "JNum":
        return JNum(self.v.conjugate(), self.b.conjugate(), self.d.conjugate())

    def __add__(self, o):
        o = _jnum(o)
        return JNum(self.v + o.v, self.d + o.d, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = _jnum(o)
        return JNum(self.v - o.v, self.d - o.d, self.b - o.b)

    def __rsub__(self, o):
        return _jnum(o).__sub__(self)

    def __mul__(self, o):
        o = _jnum(o)
        return JNum(self.v * o.v, self.d * o.v + self.v * o.d, self.b * o.v + self.v * o.b)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _jnum(o)
        iv = 1.0 / o.v
        q = self.v * iv
        return JNum(q, (self.d - q * o.d) * iv, (self.b - q * o.b) * iv)

    def __rtruediv__(self, o):
        return _jnum(o).__truediv__(self)

    def __neg__(self):
        return JNum(-self.v, -self.d, -self.b)


def _jnum(x) -> JNum:
    return x if isinstance(x, JNum) else JNum(complex(x))


def _jet_numbers(j: Jet2):
    """The four quantities mu1, mu2, and their first partials as JNums."""
    mu1 = JNum(j.mu1, j.d_mu1, j.db_mu1)
    mu2 = JNum(j.mu2, j.d_mu2, j.db_mu2)
    dmu1 = JNum(j.d_mu1, j.dd_mu1, j.ddb_mu1)
    dbmu1 = JNum(j.db_mu1, j.ddb_mu1, j.dbdb_mu1)
    dmu2 = JNum(j.d_mu2, j.dd_mu2, j.ddb_mu2)
    dbmu2 = JNum(j.db_mu2, j.ddb_mu2, j.dbdb_mu2)
    return mu1, mu2, dmu1, dbmu1, dmu2, dbmu2


# ---------------------------------------------------------------------------
# J invariants and optical scalars


_INDEX = ("1", "2", "1b", "2b")


@dataclass(frozen=True)
class JInvariants:
    """The antisymmetric invariants J_kl = d(mu_k) db(mu_l) - db(mu_k) d(mu_l)."""

    j12: complex
    j11b: complex
    j12b: complex
    j21b: complex
    j22b: complex
    j2b1b: complex

    def get(self, k: str, l: str) -> complex:
        table = {
            ("1", "2"): self.j12,
            ("1", "1b"): self.j11b,
            ("1", "2b"): self.j12b,
            ("2", "1b"): self.j21b,
            ("2", "2b"): self.j22b,
            ("2b", "1b"): self.j2b1b,
        }
        if (k, l) in table:
            return table[(k, l)]
        if (l, k) in table:
            return -table[(l, k)]
        # Remaining pairs follow from conjugation: J_{kb lb} = conj(J_lk),
        # i.e. -conj(J_kl), with the convention kb-bar = k.
        kk, ll = _conj_index(k), _conj_index(l)
        if (kk, ll) in table:
            return -table[(kk, ll)].conjugate()
        if (ll, kk) in table:
            return table[(ll, kk)].conjugate()
        raise KeyError((k, l))


def _conj_index(k: str) -> str:
    return k[:-1] if k.endswith("b") else k + "b"


def j_invariants(j: Jet2) -> JInvariants:
    d1, b1 = j.d_mu1, j.db_mu1
    d2, b2 = j.d_mu2, j.db_mu2
    d1c, b1c = b1.conjugate(), d1.conjugate()  # partials of conj(mu1)
    d2c, b2c = b2.conjugate(), d2.conjugate()
    return JInvariants(
        j12=d1 * b2 - b1 * d2,
        j11b=d1 * b1c - b1 * d1c,
        j12b=d1 * b2c - b1 * d2c,
        j21b=d2 * b1c - b2 * d1c,
        j22b=d2 * b2c - b2 * d2c,
        j2b1b=d2c * b1c - b2c * d1c,
    )


@dataclass(frozen=True)
class OpticalScalars:
    """rho (divergence + i twist), sigma (shear), twist and frame determinant."""

    rho: complex
    sigma: complex
    twist: float
    delta: float


def _chart_factors(j: Jet2):
    mu1, mu2 = j.mu1, j.mu2
    if mu2 == 0:
        raise ChartSingular("mu2 = 0 is outside the scalar formulas' chart")
    p = 1.0 + mu1 * mu2.conjugate()  # 1 + mu1 conj(mu2)
    if abs(p) <= EPS_DIAG:
        raise ChartSingular("too close to the reflected diagonal")
    return mu1, mu2, p


def optical_scalars(chart_or_jet, nu: complex | None = None, r: float = 0.0) -> OpticalScalars:
    """Optical scalars of the congruence at (nu, r) in the holomorphic chart."""
    if isinstance(chart_or_jet, Jet2):
        if nu is not None:
            raise TypeError("pass r by keyword when supplying a jet directly")
        j = chart_or_jet
    else:
        j = chart_or_jet.jet(nu)
    mu1, mu2, p = _chart_factors(j)
    ji = j_invariants(j)
    pb = p.conjugate()  # 1 + conj(mu1) mu2
    p2 = abs(p) ** 2
    m2sq = abs(mu2) ** 2
    e2r = math.exp(2.0 * r)

    delta_c = 4.0 * (
        ji.j22b * e2r / (m2sq * p2)
        + ji.get("2b", "1") / (p * p)
        + ji.get("1b", "2") / (pb * pb)
        + m2sq * ji.j11b / (p2 * e2r)
    )
    delta = delta_c.real
    if abs(delta_c.imag) > 1e-9 * max(1.0, abs(delta)):
        raise DegenerateFrame(f"frame determinant not real: {delta_c!r}")
    if abs(delta) <= EPS_FRAME:
        raise DegenerateFrame(f"frame determinant {delta:.3e} below threshold")

    sigma = 8.0 * mu2 * ji.j2b1b / (mu2.conjugate() * delta * p2)
    rho = -1.0 - (8.0 / delta) * (ji.j21b / (pb * pb) - m2sq * ji.j11b / (p2 * e2r))
    return OpticalScalars(rho=rho, sigma=sigma, twist=rho.imag, delta=delta)


def lagrangian_residual(j: Jet2) -> float:
    """Scale-normalized modulus of the pullback coefficient of the symplectic form.

    The pullback is [J_21b/(1+conj(mu1) mu2)^2 - J_12b/(1+mu1 conj(mu2))^2]
    d nu ^ d conj(nu); it vanishes exactly at Lagrangian (twist-free) points,
    independently of r.
    """
    mu1, mu2, p = _chart_factors(j)
    ji = j_invariants(j)
    pb = p.conjugate()
    coeff = ji.j21b / (pb * pb) - ji.j12b / (p * p)
    scale = (
        abs(ji.j22b) / (abs(mu2) ** 2 * abs(p) ** 2)
        + abs(ji.j21b) / abs(p) ** 2
        + abs(ji.j12b) / abs(p) ** 2
        + abs(mu2) ** 2 * abs(ji.j11b) / abs(p) ** 2
    )
    if scale == 0.0:
        return 0.0
    return abs(coeff) / scale


def symplectic_pullback_coefficient(j: Jet2) -> complex:
    """Coefficient of d nu ^ d conj(nu) in the pullback of the symplectic form."""
    _, _, p = _chart_factors(j)
    ji = j_invariants(j)
    pb = p.conjugate()
    return ji.j21b / (pb * pb) - ji.j12b / (p * p)


@dataclass(frozen=True)
class PointClass:
    lagrangian: bool
    complex_point: bool
    rank: int
    totally_null: bool
    lagrangian_residual: float
    complex_residual: float


def classify_point(chart: CongruenceChart, nu: complex, tol: float = TOL_CLASS) -> PointClass:
    """Pointwise classification: Lagrangian, complex, first-factor rank."""
    j = chart.jet(nu)
    lag_res = lagrangian_residual(j)

    ji = j_invariants(j)
    cscale = (
        abs(j.d_mu1) * abs(j.db_mu2)
        + abs(j.db_mu1) * abs(j.d_mu2)
        + abs(j.d_mu1) * abs(j.d_mu2)
        + abs(j.db_mu1) * abs(j.db_mu2)
    )
    comp_res = abs(ji.j12) / cscale if cscale > 0 else 0.0

    rank = _first_factor_rank(j, tol)
    lag = lag_res <= tol
    comp = comp_res <= tol
    return PointClass(lag, comp, rank, lag and comp, lag_res, comp_res)


def _first_factor_rank(j: Jet2, tol: float) -> int:
    # Real 2x2 Jacobians of nu -> mu_k: columns are u- and v-derivatives.
    def jac(d, db):
        fu = d + db
        fv = 1j * (d - db)
        return np.array([[fu.real, fv.real], [fu.imag, fv.imag]])

    j1 = jac(j.d_mu1, j.db_mu1)
    j2 = jac(j.d_mu2, j.db_mu2)
    scale = max(np.linalg.norm(j1, 2), np.linalg.norm(j2, 2), 1e-300)
    sv = np.linalg.svd(j1, compute_uv=False)
    return int(np.sum(sv > tol * scale))


# ---------------------------------------------------------------------------
# The (xi, eta) chart: adapted frame and Sachs scalars


@dataclass(frozen=True)
class XiEtaJet:
    """First-order data of the chart in (xi, eta) coordinates."""

    xi: complex
    eta: complex
    d_xi: complex
    db_xi: complex
    d_eta: complex
    db_eta: complex


def xieta_jet(chart_or_jet, nu: complex | None = None) -> XiEtaJet:
    """(xi, eta) values and first partials, by exact chain rule from mu jets."""
    j = chart_or_jet if isinstance(chart_or_jet, Jet2) else chart_or_jet.jet(nu)
    mu1, mu2, p = _chart_factors(j)
    pb = p.conjugate()
    d_m1c, db_m1c = j.db_mu1.conjugate(), j.d_mu1.conjugate()
    d_m2c, db_m2c = j.db_mu2.conjugate(), j.d_mu2.conjugate()

    xi = 2.0 * mu2 / pb
    # d(xi) = 2 (d mu2 - mu2^2 d conj(mu1)) / (1 + conj(mu1) mu2)^2
    d_xi = 2.0 * (j.d_mu2 - mu2 * mu2 * d_m1c) / (pb * pb)
    db_xi = 2.0 * (j.db_mu2 - mu2 * mu2 * db_m1c) / (pb * pb)

    m2c = mu2.conjugate()
    eta = (1.0 - mu1 * m2c) / (2.0 * m2c)
    # eta = 1/(2 conj(mu2)) - mu1/2
    d_eta = -d_m2c / (2.0 * m2c * m2c) - j.d_mu1 / 2.0
    db_eta = -db_m2c / (2.0 * m2c * m2c) - j.db_mu1 / 2.0
    return XiEtaJet(xi, eta, d_xi, db_xi, d_eta, db_eta)


@dataclass(frozen=True)
class FrameCoefficients:
    """Coefficients of the adapted null frame along the congruence."""

    omega_c: complex
    a: complex
    b: complex
    dpF: complex
    dmF: complex
    delta: float


def _frame_pieces(x: XiEtaJet, r: float):
    xi, eta = x.xi, x.eta
    if xi == 0:
        raise ChartSingular("xi = 0 is outside the chart")
    er, emr = math.exp(r), math.exp(-r)
    d_etab = x.db_eta.conjugate()
    db_etab = x.d_eta.conjugate()
    d_lnxi = x.d_xi / xi
    db_lnxi = x.db_xi / xi
    d_lnxib = x.db_xi.conjugate() / xi.conjugate()
    db_lnxib = x.d_xi.conjugate() / xi.conjugate()

    dpF = xi * er * d_etab - xi.conjugate() * emr * x.d_eta - er * d_lnxi - emr * d_lnxib
    dmF = xi * er * db_etab - xi.conjugate() * emr * x.db_eta - er * db_lnxi - emr * db_lnxib
    return dpF, dmF, d_etab, db_etab, d_lnxi, db_lnxi


def adapted_frame(chart_or_jet, nu: complex | None = None, r: float = 0.0) -> FrameCoefficients:
    """Adapted null frame coefficients at (nu, r).

    e0 = d/dr and e+ = a d/dnu + b d/dconj(nu) + omega d/dr with

        a = 2 sqrt(2) conj(dpF)/Delta,   b = -2 sqrt(2) conj(dmF)/Delta,
        Delta = |dpF|^2 - |dmF|^2,

    where dpF, dmF are the two frame derivatives above.
    """
    x = chart_or_jet if isinstance(chart_or_jet, XiEtaJet) else xieta_jet(chart_or_jet, nu)
    dpF, dmF, d_etab, db_etab, _, _ = _frame_pieces(x, r)
    delta = (dpF * dpF.conjugate() - dmF * dmF.conjugate()).real
    if abs(delta) <= EPS_FRAME:
        raise DegenerateFrame(f"frame determinant {delta:.3e} below threshold")
    a = 2.0 * math.sqrt(2.0) * dpF.conjugate() / delta
    b = -2.0 * math.sqrt(2.0) * dmF.conjugate() / delta
    xi = x.xi
    omega_c = (
        math.sqrt(2.0)
        / delta
        * (
            dmF.conjugate() * (xi.conjugate() * x.db_eta + xi * db_etab)
            - dpF.conjugate() * (xi.conjugate() * x.d_eta + xi * d_etab)
        )
    )
    return FrameCoefficients(omega_c=omega_c, a=a, b=b, dpF=dpF, dmF=dmF, delta=delta)


def optical_scalars_xieta(chart_or_jet, nu: complex | None = None, r: float = 0.0) -> OpticalScalars:
    """Optical scalars computed from the adapted frame in the (xi, eta) chart."""
    x = chart_or_jet if isinstance(chart_or_jet, XiEtaJet) else xieta_jet(chart_or_jet, nu)
    dpF, dmF, d_etab, db_etab, d_lnxi, db_lnxi = _frame_pieces(x, r)
    delta = (dpF * dpF.conjugate() - dmF * dmF.conjugate()).real
    if abs(delta) <= EPS_FRAME:
        raise DegenerateFrame(f"frame determinant {delta:.3e} below threshold")
    xi = x.xi
    emr = math.exp(-r)
    sigma = (2.0 * emr / delta) * (
        (xi * db_etab + db_lnxi) * dmF.conjugate() - (xi * d_etab + d_lnxi) * dpF.conjugate()
    )
    rho = -1.0 + (2.0 * emr / delta) * (
        (xi * d_etab + d_lnxi) * dmF - (xi * db_etab + db_lnxi) * dpF
    )
    return OpticalScalars(rho=rho, sigma=sigma, twist=rho.imag, delta=delta)


# ---------------------------------------------------------------------------
# Graph reparameterization: any rank-2 chart as mu2 = F(mu1, conj mu1)


@dataclass(frozen=True)
class GraphData:
    """First-order graph quantities of a rank-2 chart at a point.

    D and Db are the Wirtinger derivatives with respect to w = mu1 after
    locally inverting nu -> mu1:

        D f = (db(conj mu1) d f - d(conj mu1) db f) / J_11b.

    sigma0 = D(conj mu2) / (1 + mu1 conj(mu2))^2 and
    rho0   = D(mu2)      / (1 + conj(mu1) mu2)^2 are the shear- and
    divergence-like graph quantities; rho0 is real exactly at Lagrangian
    points.
    """

    mu1: complex
    mu2: complex
    j11b: float
    sigma0: complex
    rho0: complex
    d_sigma0: complex
    db_sigma0: complex
    d_rho0: complex
    db_rho0: complex
    d_mu2: complex
    db_mu2: complex


def graph_data(j: Jet2) -> GraphData:
    mu1, mu2, dmu1, dbmu1, dmu2, dbmu2 = _jet_numbers(j)
    m1c, m2c = mu1.conj(), mu2.conj()
    dmu1c, dbmu1c = dbmu1.conj(), dmu1.conj()
    dmu2c, dbmu2c = dbmu2.conj(), dmu2.conj()

    j11b = dmu1 * dbmu1c - dbmu1 * dmu1c
    if abs(j11b.v) <= EPS_FRAME:
        raise WrongRank("first-factor Jacobian is singular; chart is not a rank-2 graph")
    j21b = dmu2 * dbmu1c - dbmu2 * dmu1c
    j2b1b = dmu2c * dbmu1c - dbmu2c * dmu1c

    p = 1.0 + mu1 * m2c  # 1 + mu1 conj(mu2)
    pb = p.conj()
    sigma0 = j2b1b / (j11b * p * p)
    rho0 = j21b / (j11b * pb * pb)
    gd_mu2 = j21b / j11b
    gdb_mu2 = (dmu1 * dbmu2 - dbmu1 * dmu2) / j11b  # J_12 / J_11b

    def D(f: JNum) -> complex:
        return ((dbmu1c.v * f.d - dmu1c.v * f.b) / j11b.v)

    def Db(f: JNum) -> complex:
        return ((dmu1.v * f.b - dbmu1.v * f.d) / j11b.v)

    return GraphData(
        mu1=mu1.v,
        mu2=mu2.v,
        j11b=j11b.v.real,
        sigma0=sigma0.v,
        rho0=rho0.v,
        d_sigma0=D(sigma0),
        db_sigma0=Db(sigma0),
        d_rho0=D(rho0),
        db_rho0=Db(rho0),
        d_mu2=gd_mu2.v,
        db_mu2=gdb_mu2.v,
    )
