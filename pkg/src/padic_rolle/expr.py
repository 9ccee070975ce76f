"""Parser and renderer for polynomial / rational-function expressions in ``T``.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' '-'? INT)?
    atom   := INT | 'T' | '(' expr ')'

``**`` is accepted as a synonym for ``^``.  Rational constants are written
as quotients (``1/2*T``).  Degrees are capped by the environment variable
``PADIC_ROLLE_MAX_DEGREE`` (default 4096).
"""
from __future__ import annotations

import os
import re
from fractions import Fraction

from . import poly as P
from .series import RatFunc
from .valuation import PrimeContext, format_rational

__all__ = ["ExprSyntaxError", "parse_poly_expr", "parse_ratfunc", "render", "max_degree"]

DEFAULT_MAX_DEGREE = 4096

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([A-Za-z_]\w*)|(\S))")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


def max_degree() -> int:
    raw = os.environ.get("PADIC_ROLLE_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"PADIC_ROLLE_MAX_DEGREE must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("PADIC_ROLLE_MAX_DEGREE must be positive")
    return cap


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        num, op, ident, bad = m.groups()
        start = m.start(m.lastindex)
        if bad is not None:
            raise ExprSyntaxError(f"unexpected character {bad!r}", start)
        if ident is not None and ident != "T":
            raise ExprSyntaxError(f"unknown identifier {ident!r}", start)
        kind = "num" if num is not None else ("T" if ident else op)
        if kind == "**":
            kind = "^"
        tokens.append((kind, num, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: PrimeContext):
        self.tokens = _tokenize(text)
        self.i = 0
        self.ctx = ctx
        self.cap = max_degree()

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {self._describe(tok)}", tok[2])
        return tok

    @staticmethod
    def _describe(tok):
        if tok[0] == "end":
            return "end of input"
        if tok[0] == "num":
            return f"number {tok[1]}"
        return repr(tok[0])

    def check(self, r: RatFunc, offset: int) -> RatFunc:
        if r.degree > self.cap:
            raise ExprSyntaxError(f"degree {r.degree} exceeds PADIC_ROLLE_MAX_DEGREE={self.cap}", offset)
        return r

    def parse(self) -> RatFunc:
        r = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected {self._describe(tok)}", tok[2])
        return r

    def expr(self):
        r = self.term()
        while self.peek()[0] in ("+", "-"):
            op, _, off = self.take()
            rhs = self.term()
            r = self.check(r + rhs if op == "+" else r - rhs, off)
        return r

    def term(self):
        r = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, off = self.take()
            rhs = self.unary()
            if op == "*":
                r = self.check(r * rhs, off)
            else:
                if rhs.is_zero():
                    raise ExprSyntaxError("division by zero", off)
                r = self.check(r / rhs, off)
        return r

    def unary(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, off = self.take()
            negative = False
            if self.peek()[0] == "-":
                self.take()
                negative = True
            e = int(self.expect("num")[1])
            if base.degree * e > self.cap:
                raise ExprSyntaxError(f"degree {base.degree * e} exceeds PADIC_ROLLE_MAX_DEGREE={self.cap}", off)
            if negative and base.is_zero():
                raise ExprSyntaxError("negative power of zero", off)
            return base ** (-e if negative else e)
        return base

    def atom(self):
        kind, val, off = self.take()
        if kind == "num":
            return RatFunc.constant(self.ctx, int(val))
        if kind == "T":
            return RatFunc.variable(self.ctx)
        if kind == "(":
            r = self.expr()
            self.expect(")")
            return r
        raise ExprSyntaxError(f"unexpected {self._describe((kind, val, off))}", off)


def parse_ratfunc(text: str, ctx: PrimeContext) -> RatFunc:
    return _Parser(text, ctx).parse()


def parse_poly_expr(text: str, ctx: PrimeContext):
    """A coefficient tuple for polynomial input, otherwise a :class:`RatFunc`."""
    r = parse_ratfunc(text, ctx)
    return r.num if r.is_polynomial() else r


def _render_poly(f) -> str:
    if not f:
        return "0"
    parts = []
    for k in range(len(f) - 1, -1, -1):
        c = Fraction(f[k])
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = format_rational(a)
        else:
            mono = "T" if k == 1 else f"T^{k}"
            body = mono if a == 1 else f"{format_rational(a)}*{mono}"
        if not parts:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


def render(f) -> str:
    """Inverse of :func:`parse_poly_expr` on normalized input."""
    if isinstance(f, RatFunc):
        if f.is_polynomial():
            return _render_poly(f.num)
        return f"({_render_poly(f.num)})/({_render_poly(f.den)})"
    return _render_poly(P.to_poly(f))
