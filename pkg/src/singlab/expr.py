"""Holomorphic expression parsing and truncated complex Taylor-jet evaluation.

Expressions are small ASTs in one complex variable ``z``.  Evaluation
propagates truncated Taylor coefficients (order <= 3) through each node,
so every derivative a downstream criterion needs is exact up to rounding.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass

MAX_ORDER = 3

FUNCTIONS = ("exp", "log", "sin", "cos", "sinh", "cosh", "sqrt")


class ExprError(Exception):
    """Base class for expression-layer errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalDomainError(ExprError):
    """Evaluation hit a domain problem (division by zero, log(0), ...)."""

    def __init__(self, message: str, subtree: "Expression"):
        super().__init__(f"{message} in subexpression '{to_source(subtree)}'")
        self.subtree = subtree


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexJet:
    """Truncated Taylor expansion of a holomorphic function at ``z0``.

    ``coeffs[k]`` is f^(k)(z0)/k!.  Arithmetic never reads beyond the
    declared order.
    """

    z0: complex
    order: int
    coeffs: tuple

    def __post_init__(self):
        if not (0 <= self.order <= MAX_ORDER):
            raise ValueError(f"jet order must be in 0..{MAX_ORDER}")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count does not match order")

    @property
    def value(self) -> complex:
        return self.coeffs[0]

    def derivative(self, k: int = 1) -> complex:
        """k-th derivative at z0 (k <= order)."""
        if k > self.order:
            raise ValueError(f"jet of order {self.order} has no derivative {k}")
        return self.coeffs[k] * math.factorial(k)

    def truncate(self, order: int) -> "ComplexJet":
        if order > self.order:
            raise ValueError("cannot extend a jet by truncation")
        return ComplexJet(self.z0, order, self.coeffs[: order + 1])

    def shift(self) -> "ComplexJet":
        """Jet of f' at the same point, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        c = tuple((k + 1) * self.coeffs[k + 1] for k in range(self.order))
        return ComplexJet(self.z0, self.order - 1, c)

    # -- ring operations ----------------------------------------------------

    def _check(self, other: "ComplexJet"):
        if self.z0 != other.z0 or self.order != other.order:
            raise ValueError("jet base point / order mismatch")

    def __add__(self, other):
        other = _coerce(other, self)
        self._check(other)
        return ComplexJet(self.z0, self.order,
                          tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return ComplexJet(self.z0, self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other, self)
        return self.__add__(-other)

    def __rsub__(self, other):
        return _coerce(other, self).__sub__(self)

    def __mul__(self, other):
        other = _coerce(other, self)
        self._check(other)
        n = self.order
        c = [0j] * (n + 1)
        for i, a in enumerate(self.coeffs):
            for j in range(n + 1 - i):
                c[i + j] += a * other.coeffs[j]
        return ComplexJet(self.z0, n, tuple(c))

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = _coerce(other, self)
        self._check(other)
        b0 = other.coeffs[0]
        if b0 == 0:
            raise ZeroDivisionError("jet division by zero constant term")
        n = self.order
        q = [self.coeffs[0] / b0]
        for k in range(1, n + 1):
            acc = self.coeffs[k]
            for j in range(1, k + 1):
                acc -= other.coeffs[j] * q[k - j]
            q.append(acc / b0)
        return ComplexJet(self.z0, n, tuple(q))

    def __rtruediv__(self, other):
        return _coerce(other, self).__truediv__(self)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise TypeError("jet exponent must be an integer")
        if exponent < 0:
            return constant_jet(1.0, self.z0, self.order) / self.__pow__(-exponent)
        result = constant_jet(1.0, self.z0, self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def _coerce(value, like: ComplexJet) -> ComplexJet:
    if isinstance(value, ComplexJet):
        return value
    return constant_jet(value, like.z0, like.order)


def constant_jet(value: complex, z0: complex, order: int) -> ComplexJet:
    return ComplexJet(z0, order, (complex(value),) + (0j,) * order)


def identity_jet(z0: complex, order: int) -> ComplexJet:
    c = [complex(z0)] + [0j] * order
    if order >= 1:
        c[1] = 1.0 + 0j
    return ComplexJet(z0, order, tuple(c))


def _compose(jet: ComplexJet, derivs) -> ComplexJet:
    """Jet of F(u) for a jet u, given F^(k)(u0) for k = 0..order."""
    n = jet.order
    # w = u - u0 has zero constant term, so w^k contributes from degree k on.
    w = ComplexJet(jet.z0, n, (0j,) + jet.coeffs[1:])
    result = constant_jet(derivs[0], jet.z0, n)
    wk = constant_jet(1.0, jet.z0, n)
    for k in range(1, n + 1):
        wk = wk * w
        result = result + (derivs[k] / math.factorial(k)) * wk
    return result


def jet_exp(j: ComplexJet) -> ComplexJet:
    e = cmath.exp(j.value)
    return _compose(j, [e] * (j.order + 1))


def jet_log(j: ComplexJet) -> ComplexJet:
    u0 = j.value
    if u0 == 0:
        raise ZeroDivisionError("log(0)")
    d = [cmath.log(u0), 1 / u0, -1 / u0 ** 2, 2 / u0 ** 3]
    return _compose(j, d[: j.order + 1])


def jet_sqrt(j: ComplexJet) -> ComplexJet:
    u0 = j.value
    if u0 == 0:
        if j.order == 0:
            return constant_jet(0.0, j.z0, 0)
        raise ZeroDivisionError("sqrt(0) with derivative request")
    s = cmath.sqrt(u0)
    d = [s, 0.5 / s, -0.25 / (s * u0), 0.375 / (s * u0 * u0)]
    return _compose(j, d[: j.order + 1])


def jet_sin(j: ComplexJet) -> ComplexJet:
    s, c = cmath.sin(j.value), cmath.cos(j.value)
    return _compose(j, [s, c, -s, -c][: j.order + 1])


def jet_cos(j: ComplexJet) -> ComplexJet:
    s, c = cmath.sin(j.value), cmath.cos(j.value)
    return _compose(j, [c, -s, -c, s][: j.order + 1])


def jet_sinh(j: ComplexJet) -> ComplexJet:
    s, c = cmath.sinh(j.value), cmath.cosh(j.value)
    return _compose(j, [s, c, s, c][: j.order + 1])


def jet_cosh(j: ComplexJet) -> ComplexJet:
    s, c = cmath.sinh(j.value), cmath.cosh(j.value)
    return _compose(j, [c, s, c, s][: j.order + 1])


_JET_FUNCS = {
    "exp": jet_exp,
    "log": jet_log,
    "sqrt": jet_sqrt,
    "sin": jet_sin,
    "cos": jet_cos,
    "sinh": jet_sinh,
    "cosh": jet_cosh,
}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expression:
    pass


@dataclass(frozen=True)
class Const(Expression):
    value: complex


@dataclass(frozen=True)
class Var(Expression):
    pass


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression


@dataclass(frozen=True)
class Add(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Sub(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Mul(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Div(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Pow(Expression):
    base: Expression
    exponent: int


@dataclass(frozen=True)
class Call(Expression):
    name: str
    arg: Expression


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class _Token:
    __slots__ = ("kind", "text", "offset")

    def __init__(self, kind, text, offset):
        self.kind = kind
        self.text = text
        self.offset = offset


def _tokenize(source: str):
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            raise ExprSyntaxError(
                f"unexpected character {stripped[0]!r}",
                len(source) - len(stripped))
        for kind in ("num", "name", "op"):
            text = m.group(kind)
            if text is not None:
                tokens.append(_Token(kind, text, m.start(kind)))
                break
        pos = m.end()
    tokens.append(_Token("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = _tokenize(source)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ExprSyntaxError(f"expected {op!r}", tok.offset)
        return self.advance()

    def parse(self) -> Expression:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.offset)
        return e

    def expr(self) -> Expression:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expression:
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> Expression:
        node = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            node = Pow(node, self.int_literal())
        return node

    def int_literal(self) -> int:
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            sign = -1
            tok = self.peek()
        if tok.kind != "num":
            raise ExprSyntaxError("expected integer exponent", tok.offset)
        if not tok.text.isdigit():
            raise ExprSyntaxError(
                f"exponent must be an integer, got {tok.text!r}", tok.offset)
        self.advance()
        return sign * int(tok.text)

    def atom(self) -> Expression:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "name":
            self.advance()
            if tok.text == "z":
                return Var()
            if tok.text == "i":
                return Const(1j)
            if tok.text == "pi":
                return Const(complex(math.pi))
            if self.peek().kind == "op" and self.peek().text == "(":
                if tok.text not in FUNCTIONS:
                    raise ExprSyntaxError(
                        f"unknown function {tok.text!r}", tok.offset)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            raise ExprSyntaxError(f"unknown name {tok.text!r}", tok.offset)
        if tok.kind == "op":
            if tok.text == "(":
                self.advance()
                inner = self.expr()
                self.expect_op(")")
                return inner
            if tok.text == "-":
                self.advance()
                return Neg(self.atom())
        raise ExprSyntaxError(f"unexpected token {tok.text or 'end of input'!r}",
                              tok.offset)


def parse(source: str) -> Expression:
    """Parse an expression in the variable z.  Raises ExprSyntaxError."""
    return _Parser(source).parse()


# ---------------------------------------------------------------------------
# Printing (round-trips through parse)
# ---------------------------------------------------------------------------

def _num_repr(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _const_source(value: complex) -> str:
    re_, im = value.real, value.imag
    if im == 0:
        body = _num_repr(re_)
        return f"(-{body[1:]})" if body.startswith("-") else body
    if re_ == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "(-i)"
        s = f"{_num_repr(abs(im))}*i"
        return f"({s})" if im > 0 else f"(-{s})"
    im_part = "i" if abs(im) == 1 else f"{_num_repr(abs(im))}*i"
    op = "+" if im > 0 else "-"
    lhs = _num_repr(re_)
    return f"({lhs}{op}{im_part})"


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4, Call: 5,
         Const: 5, Var: 5}


def to_source(expr: Expression) -> str:
    """Render an AST back to parseable text."""

    def render(e, parent_prec):
        prec = _PREC[type(e)]
        if isinstance(e, Const):
            text = _const_source(e.value)
        elif isinstance(e, Var):
            text = "z"
        elif isinstance(e, Neg):
            # '^' binds to the atom after '-', so a negated power needs parens.
            text = "-" + render(e.operand, _PREC[Call])
        elif isinstance(e, Add):
            text = render(e.left, prec) + " + " + render(e.right, prec + 1)
        elif isinstance(e, Sub):
            text = render(e.left, prec) + " - " + render(e.right, prec + 1)
        elif isinstance(e, Mul):
            text = render(e.left, prec) + "*" + render(e.right, prec + 1)
        elif isinstance(e, Div):
            text = render(e.left, prec) + "/" + render(e.right, prec + 1)
        elif isinstance(e, Pow):
            exp = str(e.exponent) if e.exponent >= 0 else f"-{-e.exponent}"
            text = render(e.base, prec + 1) + "^" + exp
        elif isinstance(e, Call):
            return f"{e.name}({render(e.arg, 0)})"
        else:  # pragma: no cover
            raise TypeError(f"unknown node {e!r}")
        if prec < parent_prec:
            return f"({text})"
        return text

    return render(expr, 0)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def eval_jet(expr: Expression, z0: complex, order: int = MAX_ORDER) -> ComplexJet:
    """Evaluate an expression as a Taylor jet at z0.

    Raises EvalDomainError if a subtree hits a singularity (division by
    zero constant term, log(0), sqrt(0) at order >= 1).
    """
    if not (0 <= order <= MAX_ORDER):
        raise ValueError(f"order must be in 0..{MAX_ORDER}")

    def go(e: Expression) -> ComplexJet:
        if isinstance(e, Const):
            return constant_jet(e.value, z0, order)
        if isinstance(e, Var):
            return identity_jet(z0, order)
        if isinstance(e, Neg):
            return -go(e.operand)
        if isinstance(e, Add):
            return go(e.left) + go(e.right)
        if isinstance(e, Sub):
            return go(e.left) - go(e.right)
        if isinstance(e, Mul):
            return go(e.left) * go(e.right)
        if isinstance(e, Div):
            num, den = go(e.left), go(e.right)
            try:
                return num / den
            except ZeroDivisionError:
                raise EvalDomainError("division by zero", e) from None
        if isinstance(e, Pow):
            base = go(e.base)
            try:
                return base ** e.exponent
            except ZeroDivisionError:
                raise EvalDomainError("zero raised to negative power", e) from None
        if isinstance(e, Call):
            arg = go(e.arg)
            try:
                return _JET_FUNCS[e.name](arg)
            except ZeroDivisionError as exc:
                raise EvalDomainError(str(exc), e) from None
        raise TypeError(f"unknown node {e!r}")  # pragma: no cover

    return go(expr)


def eval_value(expr: Expression, z0: complex) -> complex:
    return eval_jet(expr, z0, 0).value
