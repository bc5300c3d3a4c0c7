"""A small expression language for chart formulas, with exact Wirtinger calculus.

Expressions are trees over complex literals, the variables m1 and c1
(c1 is the conjugate of m1) or the real variables u and v, the binary
operators + - * /, integer powers written with ^, unary minus, and the
functions conj, exp and ln.  ln is the principal branch, cut along the
negative real axis; the charts built here only ever feed it logarithms of
moduli, where the cut never bites, but the branch choice is fixed anyway.

Differentiation is symbolic.  d_m1 and d_c1 are the Wirtinger operators:
m1 and c1 are independent (d m1/d c1 = 0) and conj swaps them,
d_m1(conj e) = conj(d_c1 e).  For expressions in the real variables u, v
the same swap rule degenerates to d_u(conj e) = conj(d_u e).

There is no simplifier beyond constant folding and the conj involution;
derivative trees can grow, and a numeric oracle in the test-suite guards
against algebraic slips.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import DivisionByZero, EvalDomainError, ExprSyntaxError, UnknownIdentifier

VARIABLES = ("m1", "c1", "u", "v")
FUNCTIONS = ("conj", "exp", "ln")

# Wirtinger partner: differentiation passes through conj by switching to
# the partner variable.  The real variables are their own partners.
_PARTNER = {"m1": "c1", "c1": "m1", "u": "u", "v": "v"}


class Expr:
    """Base class of expression nodes; immutable and shareable."""

    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: complex


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of + - * /
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    n: int


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Func(Expr):
    name: str  # conj, exp or ln
    arg: Expr


ZERO = Const(0j)
ONE = Const(1 + 0j)


def _is_const(e: Expr, value=None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) and not _is_const(b, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if _is_const(a) and _is_const(b) and b.value != 0:
        return Const(a.value / b.value)
    return BinOp("/", a, b)


def neg(a: Expr) -> Expr:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def pow_int(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    if _is_const(a):
        return Const(a.value**n)
    return Pow(a, n)


def conj(a: Expr) -> Expr:
    if _is_const(a):
        return Const(a.value.conjugate())
    if isinstance(a, Func) and a.name == "conj":
        return a.arg
    return Func("conj", a)


def func(name: str, a: Expr) -> Expr:
    if name == "conj":
        return conj(a)
    return Func(name, a)


# ---------------------------------------------------------------------------
# Parsing


class _Parser:
    """Recursive descent over a token list; precedence is
    power > unary minus > mul/div > add/sub."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, offset: int | None = None):
        raise ExprSyntaxError(message, self.pos if offset is None else offset)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.accept(ch):
            self.error(f"expected '{ch}'")

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            if self.accept("+"):
                e = add(e, self.term())
            elif self.accept("-"):
                e = sub(e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            if self.accept("*"):
                e = mul(e, self.unary())
            elif self.accept("/"):
                e = div(e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        if self.accept("-"):
            return neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        e = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            self.skip_ws()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == start:
                self.error("expected an integer exponent", start)
            e = pow_int(e, sign * int(self.text[start : self.pos]))
        return e

    def atom(self) -> Expr:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit() or ch == ".":
            return self.number()
        if ch.isalpha() or ch == "_":
            return self.identifier()
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {ch!r}")

    def number(self) -> Expr:
        start = self.pos
        seen_dot = False
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isdigit():
                self.pos += 1
            elif c == "." and not seen_dot:
                seen_dot = True
                self.pos += 1
            elif c in "eE" and self.pos + 1 < len(self.text) and (
                self.text[self.pos + 1].isdigit() or self.text[self.pos + 1] in "+-"
            ):
                self.pos += 2
                while self.pos < len(self.text) and self.text[self.pos].isdigit():
                    self.pos += 1
            else:
                break
        try:
            value = float(self.text[start : self.pos])
        except ValueError:
            self.error("malformed number", start)
        if self.pos < len(self.text) and self.text[self.pos] == "i":
            # Imaginary literal like 2i or 0.5i.
            self.pos += 1
            return Const(complex(0.0, value))
        return Const(complex(value))

    def identifier(self) -> Expr:
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        name = self.text[start : self.pos]
        if name == "i":
            return Const(1j)
        if name in FUNCTIONS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return func(name, arg)
        if name in VARIABLES:
            return Var(name)
        raise UnknownIdentifier(name, start)


def parse(text: str) -> Expr:
    """Parse expression text into a tree; reports failures with byte offsets."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Evaluation

_MIN_DIVISOR = 1e-300


def evaluate(e: Expr, bindings: dict[str, complex]) -> complex:
    """Evaluate with all variables bound; c1 defaults to conj(m1)."""
    env = dict(bindings)
    if "c1" not in env and "m1" in env:
        env["c1"] = complex(env["m1"]).conjugate()
    return _eval(e, env)


def _eval(e: Expr, env: dict[str, complex]) -> complex:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        try:
            return complex(env[e.name])
        except KeyError:
            raise UnknownIdentifier(e.name, -1) from None
    if isinstance(e, Neg):
        return -_eval(e.arg, env)
    if isinstance(e, Pow):
        base = _eval(e.base, env)
        if e.n < 0 and abs(base) <= _MIN_DIVISOR:
            raise DivisionByZero(f"negative power of ~0 value {base!r}")
        return base**e.n
    if isinstance(e, BinOp):
        a = _eval(e.lhs, env)
        b = _eval(e.rhs, env)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if abs(b) <= _MIN_DIVISOR:
            raise DivisionByZero(f"division by ~0 value {b!r}")
        return a / b
    if isinstance(e, Func):
        a = _eval(e.arg, env)
        if e.name == "conj":
            return a.conjugate()
        if e.name == "exp":
            return cmath.exp(a)
        if a == 0:
            raise EvalDomainError("ln(0)")
        return cmath.log(a)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Differentiation


def diff(e: Expr, var: str) -> Expr:
    """Symbolic derivative with the Wirtinger rules; var is one of m1, c1, u, v."""
    if var not in VARIABLES:
        raise ValueError(f"cannot differentiate with respect to {var!r}")
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return neg(diff(e.arg, var))
    if isinstance(e, Pow):
        return mul(mul(Const(complex(e.n)), pow_int(e.base, e.n - 1)), diff(e.base, var))
    if isinstance(e, BinOp):
        da, db = diff(e.lhs, var), diff(e.rhs, var)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, e.rhs), mul(e.lhs, db))
        return div(sub(mul(da, e.rhs), mul(e.lhs, db)), pow_int(e.rhs, 2))
    if isinstance(e, Func):
        if e.name == "conj":
            return conj(diff(e.arg, _PARTNER[var]))
        if e.name == "exp":
            return mul(e, diff(e.arg, var))
        return div(diff(e.arg, var), e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def wirtinger_diff(e: Expr, which: str) -> Expr:
    """The two Wirtinger derivatives of an m1/c1 expression.

    which is "d_m1" or "d_c1".  (Charts written in the real variables u, v
    take their Wirtinger combinations 0.5*(d_u -+ i d_v) downstream.)
    """
    if which == "d_m1":
        return diff(e, "m1")
    if which == "d_c1":
        return diff(e, "c1")
    raise ValueError(f"which must be 'd_m1' or 'd_c1', got {which!r}")


def variables_of(e: Expr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Const,)):
        return set()
    if isinstance(e, Neg):
        return variables_of(e.arg)
    if isinstance(e, Pow):
        return variables_of(e.base)
    if isinstance(e, BinOp):
        return variables_of(e.lhs) | variables_of(e.rhs)
    if isinstance(e, Func):
        return variables_of(e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def to_text(e: Expr) -> str:
    """Fully parenthesized text that parses back to an equal tree."""
    if isinstance(e, Const):
        re_, im = e.value.real, e.value.imag
        if im == 0:
            return _fmt(re_)
        if re_ == 0:
            return f"{_fmt(im)}i" if im >= 0 else f"(-{_fmt(-im)}i)"
        sign = "+" if im >= 0 else "-"
        return f"({_fmt(re_)}{sign}{_fmt(abs(im))}i)"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.arg)})"
    if isinstance(e, Pow):
        n = f"{e.n}" if e.n >= 0 else f"-{-e.n}"
        return f"({to_text(e.base)}^{n})"
    if isinstance(e, BinOp):
        return f"({to_text(e.lhs)}{e.op}{to_text(e.rhs)})"
    if isinstance(e, Func):
        return f"{e.name}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"
