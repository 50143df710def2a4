"""Arithmetic expressions for chart components.

Grammar (whitespace-insensitive)::

    tuple  := expr (',' expr)*           # only via parse_components
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | NAME | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := sin | cos | exp | sqrt

So ``-u^2`` is ``-(u^2)``, ``2^-1`` is ``0.5`` and ``a^b^c`` is ``a^(b^c)``.
Parse errors carry a 1-based character offset.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EvalError, ParseError

__all__ = [
    "Expression",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse_expression",
    "parse_components",
    "FUNCTIONS",
]

FUNCTIONS = ("sin", "cos", "exp", "sqrt")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

# binding strength used by the printer
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4, "atom": 5}


class Expression:
    """Base class of the expression tree."""

    prec = _PREC["atom"]

    def evaluate(self, env: Mapping[str, float]) -> float:
        raise NotImplementedError

    def diff(self, var: str) -> "Expression":
        raise NotImplementedError

    def variables(self) -> frozenset[str]:
        raise NotImplementedError

    def __call__(self, **env: float) -> float:
        return self.evaluate(env)

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class Num(Expression):
    value: float

    def evaluate(self, env):
        return self.value

    def diff(self, var):
        return Num(0.0)

    def variables(self):
        return frozenset()

    @property
    def prec(self):
        return _PREC["neg"] if math.copysign(1.0, self.value) < 0 else _PREC["atom"]

    def pretty(self):
        v = float(self.value)
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v)) if v or math.copysign(1.0, v) > 0 else "-0"
        return repr(v)


@dataclass(frozen=True)
class Var(Expression):
    name: str

    def evaluate(self, env):
        try:
            return float(env[self.name])
        except KeyError:
            raise EvalError(f"unbound variable {self.name!r}") from None

    def diff(self, var):
        return Num(1.0 if var == self.name else 0.0)

    def variables(self):
        return frozenset({self.name})

    def pretty(self):
        return self.name


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression
    prec = _PREC["neg"]

    def evaluate(self, env):
        return -self.operand.evaluate(env)

    def diff(self, var):
        return _neg(self.operand.diff(var))

    def variables(self):
        return self.operand.variables()

    def pretty(self):
        inner = self.operand.pretty()
        if self.operand.prec < self.prec:
            inner = f"({inner})"
        return f"-{inner}"


def _finite(x: float, what: str) -> float:
    if not math.isfinite(x):
        raise EvalError(f"{what} produced a non-finite value")
    return x


@dataclass(frozen=True)
class BinOp(Expression):
    op: str
    left: Expression
    right: Expression

    @property
    def prec(self):
        return _PREC[self.op]

    def evaluate(self, env):
        a = self.left.evaluate(env)
        b = self.right.evaluate(env)
        op = self.op
        try:
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            elif op == "*":
                r = a * b
            elif op == "/":
                if b == 0.0:
                    raise EvalError("division by zero")
                r = a / b
            else:
                if a == 0.0 and b < 0:
                    raise EvalError("zero raised to a negative power")
                if a < 0 and not float(b).is_integer():
                    raise EvalError("negative base with non-integer exponent")
                r = math.pow(a, b)
        except OverflowError:
            raise EvalError(f"overflow in '{op}'") from None
        return _finite(r, f"'{op}'")

    def diff(self, var):
        f, g = self.left, self.right
        df, dg = f.diff(var), g.diff(var)
        op = self.op
        if op == "+":
            return _add(df, dg)
        if op == "-":
            return _sub(df, dg)
        if op == "*":
            return _add(_mul(df, g), _mul(f, dg))
        if op == "/":
            return _div(_sub(_mul(df, g), _mul(f, dg)), _pow(g, Num(2.0)))
        # power
        if not (var in g.variables()):
            if isinstance(g, Num):
                return _mul(_mul(g, _pow(f, Num(g.value - 1.0))), df)
            return _mul(_mul(g, _pow(f, _sub(g, Num(1.0)))), df)
        # d(f^g) = f^g (g' ln f + g f'/f), ln f written as a call is not in the
        # grammar, so only constant bases are supported here
        raise EvalError("derivative of a variable exponent is not supported; use exp()")

    def variables(self):
        return self.left.variables() | self.right.variables()

    def pretty(self):
        p = self.prec
        left = self.left.pretty()
        right = self.right.pretty()
        if self.op == "^":
            if self.left.prec <= p:
                left = f"({left})"
            if self.right.prec < _PREC["neg"]:
                right = f"({right})"
            return f"{left}^{right}"
        if self.left.prec < p:
            left = f"({left})"
        if self.right.prec <= p:
            right = f"({right})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Call(Expression):
    func: str
    arg: Expression

    def evaluate(self, env):
        x = self.arg.evaluate(env)
        try:
            if self.func == "sqrt":
                if x < 0:
                    raise EvalError("sqrt of a negative number")
                return math.sqrt(x)
            return _finite(getattr(math, self.func)(x), self.func)
        except OverflowError:
            raise EvalError(f"overflow in {self.func}") from None

    def diff(self, var):
        u = self.arg
        du = u.diff(var)
        if self.func == "sin":
            outer = Call("cos", u)
        elif self.func == "cos":
            outer = _neg(Call("sin", u))
        elif self.func == "exp":
            outer = self
        else:
            outer = _div(Num(0.5), self)
        return _mul(outer, du)

    def variables(self):
        return self.arg.variables()

    def pretty(self):
        return f"{self.func}({self.arg.pretty()})"


# -- light constant folding for derivatives


def _is(e: Expression, v: float) -> bool:
    return isinstance(e, Num) and e.value == v


def _neg(a):
    if isinstance(a, Num):
        return Num(-a.value)
    return Neg(a)


def _add(a, b):
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return _neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if _is(a, 0.0) or _is(b, 0.0):
        return Num(0.0)
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if _is(a, 0.0):
        return Num(0.0)
    if _is(b, 1.0):
        return a
    return BinOp("/", a, b)


def _pow(a, b):
    if _is(b, 1.0):
        return a
    if _is(b, 0.0):
        return Num(1.0)
    return BinOp("^", a, b)


# -- parser


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    offset: int  # 1-based


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1, text)
        kind = mo.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, mo.group(), pos + 1))
        pos = mo.end()
    toks.append(_Tok("eof", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        return ParseError(msg, tok.offset, self.text)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    def expr(self) -> Expression:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expression:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expression:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expression:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            value = float(tok.text)
            if not math.isfinite(value):
                raise self.error("number out of range", tok)
            return Num(value)
        if tok.kind == "name":
            self.i += 1
            if tok.text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(tok.text, arg)
            return Var(tok.text)
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse_expression(text: str) -> Expression:
    """Parse a single expression.

    >>> parse_expression("u^2 - v^2").evaluate({"u": 1, "v": 2})
    -3.0
    """
    p = _Parser(text)
    node = p.expr()
    p.finish()
    return node


def parse_components(text: str | Sequence[str]) -> list[Expression]:
    """Parse chart components: a list of strings or one ``"(e1, e2, ...)"`` tuple."""
    if not isinstance(text, str):
        return [parse_expression(t) for t in text]
    try:
        return [parse_expression(text)]
    except ParseError:
        if "," not in text:
            raise
    p = _Parser(text)
    wrapped = p.accept("(")
    items = [p.expr()]
    while p.accept(","):
        items.append(p.expr())
    if wrapped:
        p.expect(")")
    p.finish()
    return items
