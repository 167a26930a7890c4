"""Closed-form scalar expressions over chart coordinates.

Expressions are parsed from a small infix grammar and evaluated either as
plain floats or as truncated multivariate jets carrying exact partial
derivatives up to third order.

Grammar (whitespace-insensitive)::

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?          # right-associative, constant exponent
    atom    := NUMBER | NAME | NAME '(' sum ')' | '(' sum ')'

Unary minus binds looser than ``^`` and tighter than ``*``, so ``-x^2`` is
``-(x^2)`` and ``2^-1`` is ``2^(-1)``.
"""

from __future__ import annotations

import math
import re
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cache

import numpy as np

from .errors import (
    DomainError,
    ExpressionSyntaxError,
    NonConstantExponent,
    UnknownIdentifier,
)

FUNCTIONS = ("exp", "ln", "sin", "cos", "tan", "sinh", "cosh", "tanh", "sqrt")
CONSTANTS = {"pi": math.pi}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Expr:
    """Base class of expression nodes. Nodes are immutable and hashable."""

    def evaluate(self, point: Sequence[float]) -> float:
        return _evaluate(self, tuple(float(v) for v in point))

    def jet(self, point, order=2) -> Jet:
        return eval_jet(self, point, order)

    def is_constant(self) -> bool:
        return not any(isinstance(node, Coord) for node in self.walk())

    def walk(self):
        yield self
        for child in self.children():
            yield from child.walk()

    def children(self):
        return ()

    def sexpr(self) -> str:
        raise NotImplementedError

    def to_text(self) -> str:
        return _to_text(self, 0)

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True)
class Num(Expr):
    value: float

    def sexpr(self):
        return _fmt_number(self.value)


@dataclass(frozen=True)
class Const(Expr):
    name: str

    @property
    def value(self):
        return CONSTANTS[self.name]

    def sexpr(self):
        return self.name


@dataclass(frozen=True)
class Coord(Expr):
    name: str
    index: int

    def sexpr(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr

    def children(self):
        return (self.operand,)

    def sexpr(self):
        return f"neg({self.operand.sexpr()})"


_BIN_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div"}


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)

    def sexpr(self):
        return f"{_BIN_NAMES[self.op]}({self.left.sexpr()},{self.right.sexpr()})"


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr

    def children(self):
        return (self.base, self.exponent)

    @property
    def exponent_value(self) -> float:
        return _evaluate(self.exponent, ())

    def sexpr(self):
        return f"pow({self.base.sexpr()},{self.exponent.sexpr()})"


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr

    def children(self):
        return (self.arg,)

    def sexpr(self):
        return f"{self.func}({self.arg.sexpr()})"


def _fmt_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


# precedence levels used by the printer
_PREC_SUM, _PREC_PRODUCT, _PREC_UNARY, _PREC_POWER, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, BinOp):
        return _PREC_SUM if e.op in "+-" else _PREC_PRODUCT
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, Pow):
        return _PREC_POWER
    if isinstance(e, Num) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return _PREC_UNARY
    return _PREC_ATOM


def _to_text(e: Expr, ctx: int) -> str:
    if isinstance(e, Num):
        text = _fmt_number(e.value)
    elif isinstance(e, (Coord, Const)):
        text = e.name
    elif isinstance(e, Call):
        text = f"{e.func}({_to_text(e.arg, 0)})"
    elif isinstance(e, Neg):
        text = "-" + _to_text(e.operand, _PREC_UNARY)
    elif isinstance(e, Pow):
        # the base must be an atom; the exponent parses at unary level
        text = _to_text(e.base, _PREC_ATOM) + "^" + _to_text(e.exponent, _PREC_UNARY)
    else:
        p = _prec(e)
        # left-associative: the right operand needs parentheses at equal precedence
        text = f"{_to_text(e.left, p)}{e.op}{_to_text(e.right, p + 1)}"
    if _prec(e) < ctx:
        return f"({text})"
    return text


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


class _Parser:
    def __init__(self, source: str, coords: Sequence[str]):
        self.source = source
        self.coords = {name: i for i, name in enumerate(coords)}
        self.tokens = list(self._tokenize())
        self.pos = 0

    def _offset(self, char_index):
        return len(self.source[:char_index].encode("utf-8"))

    def _tokenize(self):
        i = 0
        while i < len(self.source):
            m = _TOKEN.match(self.source, i)
            if m is None:
                raise ExpressionSyntaxError(
                    f"unexpected character {self.source[i]!r}", self._offset(i)
                )
            kind = m.lastgroup
            if kind != "ws":
                text = m.group()
                if text == "−":
                    text = "-"
                yield kind, text, i
            i = m.end()
        yield "end", "", len(self.source)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text):
        kind, value, at = self.advance()
        if value != text or kind == "end":
            found = "end of input" if kind == "end" else repr(value)
            raise ExpressionSyntaxError(f"expected {text!r}, found {found}", self._offset(at))

    def parse(self) -> Expr:
        expr = self.parse_sum()
        kind, value, at = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {value!r}", self._offset(at))
        return expr

    def parse_sum(self):
        left = self.parse_product()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = BinOp(op, left, self.parse_product())
        return left

    def parse_product(self):
        left = self.parse_unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            left = BinOp(op, left, self.parse_unary())
        return left

    def parse_unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.parse_unary())
        if kind == "op" and value == "+":
            self.advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        kind, value, at = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            exponent = self.parse_unary()
            if not exponent.is_constant():
                raise NonConstantExponent(self._offset(at))
            return Pow(base, exponent)
        return base

    def parse_atom(self):
        kind, value, at = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if value not in FUNCTIONS:
                    raise UnknownIdentifier(value, self._offset(at))
                self.advance()
                arg = self.parse_sum()
                self.expect(")")
                return Call(value, arg)
            if value in self.coords:
                return Coord(value, self.coords[value])
            if value in CONSTANTS:
                return Const(value)
            raise UnknownIdentifier(value, self._offset(at))
        if kind == "op" and value == "(":
            inner = self.parse_sum()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise ExpressionSyntaxError(f"unexpected {found}", self._offset(at))


def parse(source: str, chart) -> Expr:
    """Parse ``source`` against a chart (a ``Chart`` or a sequence of coordinate names)."""
    coords = getattr(chart, "coordinates", chart)
    if not source or not source.strip():
        raise ExpressionSyntaxError("empty expression", 0)
    return _Parser(source, tuple(coords)).parse()


# ---------------------------------------------------------------------------
# Scalar kernels shared by plain and jet evaluation
# ---------------------------------------------------------------------------


def _derivs(func: str, u: float, order: int) -> tuple:
    """Value and the first ``order`` derivatives of a unary function at ``u``."""
    if func == "exp":
        v = math.exp(u)
        return (v,) * (order + 1)
    if func == "ln":
        if u <= 0.0:
            raise DomainError("ln", u)
        return (math.log(u), 1.0 / u, -1.0 / u**2, 2.0 / u**3)[: order + 1]
    if func == "sqrt":
        if u < 0.0 or (u == 0.0 and order > 0):
            raise DomainError("sqrt", u)
        s = math.sqrt(u)
        if order == 0:
            return (s,)
        return (s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u))[: order + 1]
    if func == "sin":
        s, c = math.sin(u), math.cos(u)
        return (s, c, -s, -c)[: order + 1]
    if func == "cos":
        s, c = math.sin(u), math.cos(u)
        return (c, -s, -c, s)[: order + 1]
    if func == "tan":
        if math.cos(u) == 0.0:
            raise DomainError("tan", u)
        t = math.tan(u)
        sec2 = 1.0 + t * t
        return (t, sec2, 2.0 * t * sec2, sec2 * (2.0 + 6.0 * t * t))[: order + 1]
    if func == "sinh":
        s, c = math.sinh(u), math.cosh(u)
        return (s, c, s, c)[: order + 1]
    if func == "cosh":
        s, c = math.sinh(u), math.cosh(u)
        return (c, s, c, s)[: order + 1]
    if func == "tanh":
        t = math.tanh(u)
        sech2 = 1.0 - t * t
        return (t, sech2, -2.0 * t * sech2, sech2 * (6.0 * t * t - 2.0))[: order + 1]
    raise ValueError(f"unknown function {func!r}")


def _pow_derivs(u: float, c: float, order: int) -> tuple:
    """Derivatives of u**c for a constant exponent c."""
    if c.is_integer() and abs(c) <= 64:
        k = int(c)
        if k < 0 and u == 0.0:
            raise DomainError("^", u)
        out = [u**k]
        coeff = 1.0
        for m in range(1, order + 1):
            coeff *= k - m + 1
            if coeff == 0.0:
                out.append(0.0)
            elif u == 0.0 and k - m < 0:
                raise DomainError("^", u)
            else:
                out.append(coeff * u ** (k - m))
        return tuple(out)
    if u <= 0.0:
        raise DomainError("^", u)
    v = math.exp(c * math.log(u))
    out = [v]
    coeff = 1.0
    for m in range(1, order + 1):
        coeff *= c - m + 1
        out.append(coeff * v / u**m)
    return tuple(out)


def _evaluate(e: Expr, point: tuple) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Coord):
        return point[e.index]
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Neg):
        return -_evaluate(e.operand, point)
    if isinstance(e, BinOp):
        a = _evaluate(e.left, point)
        b = _evaluate(e.right, point)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b == 0.0:
            raise DomainError("/", b)
        return a / b
    if isinstance(e, Pow):
        return _pow_derivs(_evaluate(e.base, point), e.exponent_value, 0)[0]
    if isinstance(e, Call):
        return _derivs(e.func, _evaluate(e.arg, point), 0)[0]
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------


@cache
def _canonical_maps(n: int):
    """Flat-index maps sending every index tuple to its sorted representative."""
    i, j = np.indices((n, n))
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    canon2 = lo * n + hi
    i, j, k = np.indices((n, n, n))
    s = np.sort(np.stack([i, j, k]), axis=0)
    canon3 = (s[0] * n + s[1]) * n + s[2]
    return canon2, canon3


class Jet:
    """Truncated multivariate Taylor data of a scalar function at a point.

    ``d1[i]`` is the first partial along coordinate i, ``d2[i, j]`` and
    ``d3[i, j, k]`` the second and third partials. Tiers above ``order`` are
    ``None``. The higher tiers are stored exactly symmetric.
    """

    __slots__ = ("d1", "d2", "d3", "n", "order", "value")

    def __init__(self, value, d1=None, d2=None, d3=None, *, order=None, n=None):
        self.value = float(value)
        self.d1, self.d2, self.d3 = d1, d2, d3
        if order is None:
            order = 3 if d3 is not None else 2 if d2 is not None else 1 if d1 is not None else 0
        self.order = order
        if n is None:
            n = len(d1) if d1 is not None else 0
        self.n = n

    @classmethod
    def constant(cls, value, n, order):
        return cls(
            value,
            np.zeros(n) if order >= 1 else None,
            np.zeros((n, n)) if order >= 2 else None,
            np.zeros((n, n, n)) if order >= 3 else None,
            order=order,
            n=n,
        )

    @classmethod
    def variable(cls, value, index, n, order):
        jet = cls.constant(value, n, order)
        if order >= 1:
            jet.d1[index] = 1.0
        return jet

    def _symmetrized(self):
        canon2, canon3 = _canonical_maps(self.n)
        if self.d2 is not None:
            self.d2 = self.d2.ravel()[canon2]
        if self.d3 is not None:
            self.d3 = self.d3.ravel()[canon3]
        return self

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.n, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(
            self.value + o.value,
            *(None if a is None else a + b for a, b in _tiers(self, o)),
            order=min(self.order, o.order),
            n=self.n,
        )

    __radd__ = __add__

    def __neg__(self):
        return Jet(
            -self.value,
            *(None if a is None else -a for a in (self.d1, self.d2, self.d3)),
            order=self.order,
            n=self.n,
        )

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(
            self.value - o.value,
            *(None if a is None else a - b for a, b in _tiers(self, o)),
            order=min(self.order, o.order),
            n=self.n,
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = float(other)
            return Jet(
                self.value * c,
                *(None if a is None else a * c for a in (self.d1, self.d2, self.d3)),
                order=self.order,
                n=self.n,
            )
        return _product(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.value == 0.0:
            raise DomainError("/", o.value)
        q = _product(self, o.reciprocal())
        q.value = self.value / o.value
        return q

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def reciprocal(self):
        u = self.value
        if u == 0.0:
            raise DomainError("/", u)
        return self.apply((1.0 / u, -1.0 / u**2, 2.0 / u**3, -6.0 / u**4))

    def apply(self, f):
        """Compose a unary function, given its value and derivatives at ``self.value``."""
        order = self.order
        d1 = d2 = d3 = None
        u1 = self.d1
        if order >= 1:
            d1 = f[1] * u1
        if order >= 2:
            outer = np.multiply.outer(u1, u1)
            d2 = f[2] * outer + f[1] * self.d2
        if order >= 3:
            u2u1 = np.multiply.outer(self.d2, u1)
            d3 = (
                f[3] * np.multiply.outer(outer, u1)
                + f[2] * (u2u1 + u2u1.transpose(0, 2, 1) + u2u1.transpose(2, 0, 1))
                + f[1] * self.d3
            )
        return Jet(f[0], d1, d2, d3, order=order, n=self.n)._symmetrized()

    def tiers(self):
        return tuple(t for t in (self.d1, self.d2, self.d3) if t is not None)

    def __repr__(self):
        return f"Jet(value={self.value!r}, order={self.order}, n={self.n})"


def _tiers(a: Jet, b: Jet):
    order = min(a.order, b.order)
    pairs = []
    for k, (x, y) in enumerate(zip((a.d1, a.d2, a.d3), (b.d1, b.d2, b.d3)), start=1):
        pairs.append((x, y) if k <= order else (None, None))
    return pairs


def _product(a: Jet, b: Jet) -> Jet:
    order = min(a.order, b.order)
    d1 = d2 = d3 = None
    if order >= 1:
        d1 = a.d1 * b.value + a.value * b.d1
    if order >= 2:
        cross = np.multiply.outer(a.d1, b.d1)
        d2 = a.d2 * b.value + cross + cross.T + a.value * b.d2
    if order >= 3:
        p = np.multiply.outer(a.d2, b.d1)
        q = np.multiply.outer(a.d1, b.d2)
        d3 = (
            a.d3 * b.value
            + (p + p.transpose(0, 2, 1) + p.transpose(2, 0, 1))
            + (q + q.transpose(1, 0, 2) + q.transpose(1, 2, 0))
            + a.value * b.d3
        )
    return Jet(a.value * b.value, d1, d2, d3, order=order, n=a.n)._symmetrized()


def eval_jet(e: Expr, point, order: int = 2) -> Jet:
    """Value and all partial derivatives up to ``order`` (0..3) of ``e`` at ``point``."""
    if order not in (0, 1, 2, 3):
        raise ValueError(f"jet order must be 0..3, got {order}")
    point = tuple(float(v) for v in point)
    return _jet(e, point, len(point), order)


def _jet(e: Expr, point, n, order) -> Jet:
    if isinstance(e, Num):
        return Jet.constant(e.value, n, order)
    if isinstance(e, Const):
        return Jet.constant(e.value, n, order)
    if isinstance(e, Coord):
        if e.index >= n:
            raise ValueError(f"coordinate {e.name!r} has index {e.index} but the point has {n} entries")
        return Jet.variable(point[e.index], e.index, n, order)
    if isinstance(e, Neg):
        return -_jet(e.operand, point, n, order)
    if isinstance(e, BinOp):
        a = _jet(e.left, point, n, order)
        b = _jet(e.right, point, n, order)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        return a / b
    if isinstance(e, Pow):
        base = _jet(e.base, point, n, order)
        return base.apply(_pad(_pow_derivs(base.value, e.exponent_value, order)))
    if isinstance(e, Call):
        arg = _jet(e.arg, point, n, order)
        return arg.apply(_pad(_derivs(e.func, arg.value, order)))
    raise TypeError(f"not an expression node: {e!r}")


def _pad(f):
    return tuple(f) + (0.0,) * (4 - len(f))


def field_jets(exprs: Sequence[Expr], point, order: int):
    """Stack jets of several expressions into arrays ``(values, d1, d2, d3)``.

    Returned arrays have the expression index first and derivative indices
    trailing; tiers above ``order`` are ``None``.
    """
    jets = [eval_jet(e, point, order) for e in exprs]
    out = [np.array([j.value for j in jets])]
    for k in (1, 2, 3):
        out.append(np.array([j.tiers()[k - 1] for j in jets]) if order >= k else None)
    return tuple(out)
