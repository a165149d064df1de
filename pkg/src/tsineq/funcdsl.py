"""A tiny expression language in one variable ``t``.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)*
    atom   := NUMBER | 't' | FUNC '(' expr ')' | '(' expr ')'
    exponent := INT | '(' INT ')'

Exponents are non-negative integer literals, which keeps symbolic
differentiation closed over the language.  Expressions evaluate on floats or
numpy arrays.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, ExprSyntaxError, OutOfRange, UnknownIdentifier

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]

T = Var()
ZERO = Num(0.0)
ONE = Num(1.0)


# -- smart constructors with constant folding --------------------------------


def num(v: float) -> Num:
    return Num(float(v))


def neg(a: Expr) -> Expr:
    if isinstance(a, Num):
        return num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def add(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return num(a.value + b.value)
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return num(a.value - b.value)
    if b == ZERO:
        return a
    if a == ZERO:
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num):
        return num(a.value * b.value)
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0.0:
        return num(a.value / b.value)
    if a == ZERO:
        return ZERO
    if b == ONE:
        return a
    return BinOp("/", a, b)


def power(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Num):
        return num(a.value**n)
    return Pow(a, n)


def call(name: str, a: Expr) -> Expr:
    return Call(name, a)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.replace("−", "-")  # typographic minus
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            offset = len(text[:pos].encode()) + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", offset)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), len(text[:start].encode())))
        pos = m.end()
    tokens.append(("end", "", len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, off = self.take()
        if val != value or kind == "end":
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", off)
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            arg = self.unary()
            # fold negative literals so printing round-trips
            return Num(-arg.value) if isinstance(arg, Num) else Neg(arg)
        return self.power()

    def power(self):
        e = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            e = Pow(e, self.exponent())
        return e

    def exponent(self) -> int:
        kind, val, off = self.take()
        wrapped = kind == "op" and val == "("
        if wrapped:
            kind, val, off = self.take()
            if kind == "op" and val == "-":
                raise ExprSyntaxError("negative exponent", off)
        elif kind == "op" and val == "-":
            raise ExprSyntaxError("negative exponent", off)
        if kind != "num" or not re.fullmatch(r"\d+", val):
            raise ExprSyntaxError("exponent must be a non-negative integer literal", off)
        if wrapped:
            self.expect(")")
        return int(val)

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if val == "t":
                return T
            if val in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            raise UnknownIdentifier(f"unknown identifier {val!r}", off)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ExprSyntaxError(f"unexpected {val or 'end of input'!r}", off)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


def to_string(e: Expr) -> str:
    """Fully parenthesised rendering; ``parse(to_string(e)) == e``."""
    if isinstance(e, Num):
        s = repr(e.value)
        return f"({s})" if e.value < 0 or s.startswith("-") else s
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return f"(-{to_string(e.arg)})"
    if isinstance(e, BinOp):
        return f"({to_string(e.left)} {e.op} {to_string(e.right)})"
    if isinstance(e, Pow):
        return f"({to_string(e.base)}^{e.exp})"
    if isinstance(e, Call):
        return f"{e.name}({to_string(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# Differentiation and evaluation


def differentiate(e: Expr) -> Expr:
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Neg):
        return neg(differentiate(e.arg))
    if isinstance(e, BinOp):
        a, b = e.left, e.right
        da, db = differentiate(a), differentiate(b)
        if e.op == "+":
            return add(da, db)
        if e.op == "-":
            return sub(da, db)
        if e.op == "*":
            return add(mul(da, b), mul(a, db))
        if e.op == "/":
            return div(sub(mul(da, b), mul(a, db)), power(b, 2))
    if isinstance(e, Pow):
        if e.exp == 0:
            return ZERO
        return mul(mul(num(e.exp), power(e.base, e.exp - 1)), differentiate(e.base))
    if isinstance(e, Call):
        u, du = e.arg, differentiate(e.arg)
        outer = {
            "sin": lambda: call("cos", u),
            "cos": lambda: neg(call("sin", u)),
            "exp": lambda: e,
            "log": lambda: div(ONE, u),
            "sqrt": lambda: div(ONE, mul(num(2.0), e)),
        }[e.name]()
        return mul(outer, du)
    raise TypeError(f"not an expression: {e!r}")


def _check(cond, message):
    if np.any(cond):
        raise DomainError(message)


def evaluate(e: Expr, t):
    """Evaluate at a float or an array of floats."""
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(e, t)
    out = np.broadcast_to(out, t.shape) if np.ndim(out) < t.ndim else out
    return float(out) if t.ndim == 0 else np.array(out, dtype=float)


def _eval(e, t):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Neg):
        return -_eval(e.arg, t)
    if isinstance(e, BinOp):
        a, b = _eval(e.left, t), _eval(e.right, t)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        _check(np.asarray(b) == 0.0, "division by zero")
        return a / b
    if isinstance(e, Pow):
        return _eval(e.base, t) ** e.exp
    if isinstance(e, Call):
        u = _eval(e.arg, t)
        if e.name == "log":
            _check(np.asarray(u) <= 0.0, "log of non-positive argument")
            return np.log(u)
        if e.name == "sqrt":
            _check(np.asarray(u) < 0.0, "sqrt of negative argument")
            return np.sqrt(u)
        return {"sin": np.sin, "cos": np.cos, "exp": np.exp}[e.name](u)
    raise TypeError(f"not an expression: {e!r}")


def as_polynomial(e: Expr):
    """Return a numpy ``Polynomial`` equal to ``e``, or None if it is not one."""
    P = np.polynomial.Polynomial
    if isinstance(e, Num):
        return P([e.value])
    if isinstance(e, Var):
        return P([0.0, 1.0])
    if isinstance(e, Neg):
        a = as_polynomial(e.arg)
        return None if a is None else -a
    if isinstance(e, BinOp):
        a, b = as_polynomial(e.left), as_polynomial(e.right)
        if a is None or b is None:
            return None
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        if b.degree() == 0 and b.coef[0] != 0.0:
            return a / b.coef[0]
        return None
    if isinstance(e, Pow):
        a = as_polynomial(e.base)
        return None if a is None else a**e.exp
    return None


@dataclass(frozen=True)
class DifferentiableFn:
    """An expression together with its exact symbolic derivative."""

    expr: Expr
    classical_derivative: Expr
    source: str = ""

    @classmethod
    def from_text(cls, text: str) -> "DifferentiableFn":
        e = parse(text)
        return cls(e, differentiate(e), text)

    @classmethod
    def from_expr(cls, e: Expr) -> "DifferentiableFn":
        return cls(e, differentiate(e), to_string(e))

    def __call__(self, t):
        return evaluate(self.expr, t)

    def derivative(self, t):
        return evaluate(self.classical_derivative, t)

    def scaled(self, c: float) -> "DifferentiableFn":
        return DifferentiableFn.from_expr(mul(num(c), self.expr))

    def __str__(self):
        return self.source or to_string(self.expr)


# ---------------------------------------------------------------------------
# Parameter functions psi: [0, 1] -> [0, 1]


@dataclass(frozen=True)
class ParamFunction:
    """Catalog of maps of the unit interval into itself.

    ``kind`` is one of ``identity``, ``constant`` (``value``), ``power``
    (``exponent`` > 0) or ``table`` (``points``: (lambda, psi) knots, linearly
    interpolated, first knot at 0 and last at 1).
    """

    kind: str
    value: float = 0.0
    exponent: float = 1.0
    points: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.kind == "identity":
            return
        if self.kind == "constant":
            if not 0.0 <= self.value <= 1.0:
                raise OutOfRange(f"constant psi must lie in [0, 1], got {self.value}")
        elif self.kind == "power":
            if not self.exponent > 0.0:
                raise OutOfRange(f"power psi needs a positive exponent, got {self.exponent}")
        elif self.kind == "table":
            pts = tuple((float(x), float(y)) for x, y in self.points)
            object.__setattr__(self, "points", pts)
            xs = np.array([p[0] for p in pts])
            if len(pts) < 2 or xs[0] != 0.0 or xs[-1] != 1.0 or np.any(np.diff(xs) <= 0):
                raise OutOfRange("table psi needs increasing knots spanning [0, 1]")
            probe = self._table(np.linspace(0.0, 1.0, 10_000))
            if probe.min() < 0.0 or probe.max() > 1.0:
                raise OutOfRange("table psi leaves [0, 1]")
        else:
            raise ValueError(f"unknown psi kind {self.kind!r}")

    def _table(self, lam):
        xs, ys = zip(*self.points)
        return np.interp(lam, xs, ys)

    def __call__(self, lam):
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0.0) or np.any(lam_arr > 1.0):
            raise OutOfRange(f"psi is defined on [0, 1], got {lam}")
        if self.kind == "identity":
            out = lam_arr
        elif self.kind == "constant":
            out = np.full_like(lam_arr, self.value)
        elif self.kind == "power":
            out = lam_arr**self.exponent
        else:
            out = self._table(lam_arr)
        return float(out) if lam_arr.ndim == 0 else out

    def to_dict(self) -> dict:
        if self.kind == "identity":
            return {"kind": "identity"}
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "power":
            return {"kind": "power", "exponent": self.exponent}
        return {"kind": "table", "points": [list(p) for p in self.points]}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamFunction":
        kind = d.get("kind")
        if kind == "constant":
            return cls("constant", value=float(d["value"]))
        if kind == "power":
            return cls("power", exponent=float(d["exponent"]))
        if kind == "table":
            return cls("table", points=tuple(tuple(p) for p in d["points"]))
        return cls(kind)


IDENTITY_PSI = ParamFunction("identity")


def psi_eval(psi: ParamFunction, lam: float) -> float:
    return psi(lam)


__all__ = [
    "Expr", "Num", "Var", "Neg", "BinOp", "Pow", "Call", "parse", "to_string",
    "differentiate", "evaluate", "as_polynomial", "DifferentiableFn",
    "ParamFunction", "IDENTITY_PSI", "psi_eval",
]
