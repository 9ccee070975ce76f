"""Truncated power series and rational functions with rational coefficients.

:class:`PSeries` is a series known modulo ``T**trunc``; every operation
returns the tightest truncation order its inputs certify and never extends it.
:class:`RatFunc` is an eagerly normalized quotient of polynomials (coprime,
monic denominator), so structural equality is mathematical equality.

Gauss valuations ``v_s(f) = min_i (ord_p a_i + i*s)`` give the absolute
value ``p**-v_s(f)`` of ``f`` at the maximal point of the disk of log-radius
``s``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import poly as P
from .errors import (
    ContextMismatchError,
    DivisionByZeroError,
    DomainError,
    PoleError,
    UnstableValuationError,
)
from .valuation import INF, PrimeContext, as_fraction, format_rational, ord_p, parse_rational

__all__ = [
    "PSeries",
    "RatFunc",
    "GaussPoint",
    "arith",
    "derivative",
    "compose",
    "gauss_valuation",
    "poly_gauss_valuation",
    "ratfunc_arith",
    "ratfunc_derivative",
]


def _check_ctx(a, b):
    if a.ctx != b.ctx:
        raise ContextMismatchError(f"prime {a.ctx.p} vs prime {b.ctx.p}")


@dataclass(frozen=True)
class GaussPoint:
    """Maximal point of the disk ``|T| <= p**-s``; ``s = 0`` is the Gauss point."""

    s: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "s", as_fraction(self.s))


class PSeries:
    """A power series in ``T`` known modulo ``T**trunc``."""

    __slots__ = ("ctx", "coeffs", "trunc")

    def __init__(self, ctx: PrimeContext, coeffs: Sequence, trunc: int | None = None):
        cs = [as_fraction(c) for c in coeffs]
        if trunc is None:
            trunc = len(cs)
        if trunc < 1:
            raise ValueError("truncation order must be positive")
        cs = cs[:trunc]
        cs.extend([Fraction(0)] * (trunc - len(cs)))
        self.ctx = ctx
        self.coeffs = tuple(cs)
        self.trunc = trunc

    @classmethod
    def from_poly(cls, ctx: PrimeContext, f, trunc: int) -> "PSeries":
        return cls(ctx, list(f), trunc)

    def __repr__(self):
        body = ", ".join(format_rational(c) for c in self.coeffs)
        return f"PSeries(p={self.ctx.p}, [{body}], trunc={self.trunc})"

    def __eq__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        return self.ctx == other.ctx and self.trunc == other.trunc and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.trunc, self.coeffs))

    def __getitem__(self, i):
        return self.coeffs[i]

    def __len__(self):
        return self.trunc

    def truncate(self, n: int) -> "PSeries":
        return PSeries(self.ctx, self.coeffs[:n], min(n, self.trunc))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def order(self):
        """Index of the first nonzero stored coefficient (``INF`` if none)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INF

    def __neg__(self):
        return PSeries(self.ctx, [-c for c in self.coeffs], self.trunc)

    def __add__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        _check_ctx(self, other)
        t = min(self.trunc, other.trunc)
        return PSeries(self.ctx, [self.coeffs[i] + other.coeffs[i] for i in range(t)], t)

    def __sub__(self, other):
        if not isinstance(other, PSeries):
            return NotImplemented
        _check_ctx(self, other)
        t = min(self.trunc, other.trunc)
        return PSeries(self.ctx, [self.coeffs[i] - other.coeffs[i] for i in range(t)], t)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PSeries(self.ctx, [c * other for c in self.coeffs], self.trunc)
        if not isinstance(other, PSeries):
            return NotImplemented
        _check_ctx(self, other)
        t = min(self.trunc, other.trunc)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * t
        for i in range(t):
            ai = a[i]
            if ai:
                for j in range(t - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return PSeries(self.ctx, out, t)

    __rmul__ = __mul__

    def derivative(self) -> "PSeries":
        if self.trunc < 2:
            # d/dT of a series known mod T is known mod T**0: nothing certified
            raise DomainError("derivative of a series known only modulo T")
        return PSeries(self.ctx, [i * self.coeffs[i] for i in range(1, self.trunc)], self.trunc - 1)

    def compose(self, inner: "PSeries") -> "PSeries":
        """``self(inner(T))``; ``inner`` must have zero constant term."""
        _check_ctx(self, inner)
        if inner.coeffs[0] != 0:
            raise DomainError("inner series has a nonzero constant term")
        t = min(self.trunc, inner.trunc)
        inner_t = inner.truncate(t)
        top = t - 1
        while top > 0 and self.coeffs[top] == 0:
            top -= 1
        acc = PSeries(self.ctx, [self.coeffs[top]], t)
        for k in range(top - 1, -1, -1):
            acc = acc * inner_t
            acc = PSeries(self.ctx, (acc.coeffs[0] + self.coeffs[k],) + acc.coeffs[1:], t)
        return acc

    def to_json(self) -> dict:
        return {
            "prime": self.ctx.p,
            "coeffs": [format_rational(c) for c in self.coeffs],
            "trunc": self.trunc,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PSeries":
        ctx = PrimeContext(int(data["prime"]))
        coeffs = [parse_rational(c) for c in data["coeffs"]]
        return cls(ctx, coeffs, int(data.get("trunc", len(coeffs))))


class RatFunc:
    """A normalized quotient ``num/den`` of polynomials over Q."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: PrimeContext, num: Sequence, den: Sequence = (1,)):
        num, den = P.to_poly(num), P.to_poly(den)
        if not den:
            raise DivisionByZeroError("rational function with zero denominator")
        if not num:
            den = P.ONE
        else:
            g = P.gcd(num, den)
            if len(g) > 1:
                num = P.divmod_poly(num, g)[0]
                den = P.divmod_poly(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = tuple(c / lead for c in num)
                den = tuple(c / lead for c in den)
        self.ctx = ctx
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, ctx: PrimeContext, c) -> "RatFunc":
        return cls(ctx, (as_fraction(c),))

    @classmethod
    def variable(cls, ctx: PrimeContext) -> "RatFunc":
        return cls(ctx, P.T)

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            _check_ctx(self, other)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return RatFunc.constant(self.ctx, other)
        return None

    def __repr__(self):
        num = ", ".join(format_rational(c) for c in self.num)
        den = ", ".join(format_rational(c) for c in self.den)
        return f"RatFunc(p={self.ctx.p}, num=[{num}], den=[{den}])"

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RatFunc) else other
        if o is None:
            return NotImplemented
        return self.ctx == o.ctx and self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.ctx, self.num, self.den))

    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return self.den == P.ONE

    @property
    def degree(self) -> int:
        """``max(deg num, deg den)``: the degree of the induced map of P^1."""
        return max(P.degree(self.num), P.degree(self.den))

    def __neg__(self):
        return RatFunc(self.ctx, P.neg(self.num), self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.ctx, P.add(self.num, o.num), self.den)
        return RatFunc(
            self.ctx,
            P.add(P.mul(self.num, o.den), P.mul(o.num, self.den)),
            P.mul(self.den, o.den),
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.ctx, P.mul(self.num, o.num), P.mul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZeroError("division by the zero rational function")
        return RatFunc(self.ctx, P.mul(self.num, o.den), P.mul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            if self.is_zero():
                raise DivisionByZeroError("negative power of zero")
            return RatFunc(self.ctx, P.power(self.den, -e), P.power(self.num, -e))
        return RatFunc(self.ctx, P.power(self.num, e), P.power(self.den, e))

    def derivative(self) -> "RatFunc":
        # quotient rule
        n, d = self.num, self.den
        return RatFunc(
            self.ctx,
            P.sub(P.mul(P.derivative(n), d), P.mul(n, P.derivative(d))),
            P.mul(d, d),
        )

    def __call__(self, x):
        x = as_fraction(x)
        d = P.evaluate(self.den, x)
        if d == 0:
            raise PoleError(f"{format_rational(x)} is a pole")
        return Fraction(P.evaluate(self.num, x)) / d

    def taylor(self, x0, trunc: int) -> PSeries:
        """Expansion in ``u = T - x0`` modulo ``u**trunc``."""
        x0 = as_fraction(x0)
        num = P.taylor_shift(self.num, x0)
        den = P.taylor_shift(self.den, x0)
        if not den or den[0] == 0:
            raise PoleError(f"{format_rational(x0)} is a pole")
        d0 = den[0]
        out = []
        for k in range(trunc):
            acc = num[k] if k < len(num) else Fraction(0)
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / d0)
        return PSeries(self.ctx, out, trunc)

    def to_json(self) -> dict:
        return {
            "prime": self.ctx.p,
            "num": [format_rational(c) for c in self.num],
            "den": [format_rational(c) for c in self.den],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RatFunc":
        ctx = PrimeContext(int(data["prime"]))
        return cls(
            ctx,
            [parse_rational(c) for c in data["num"]],
            [parse_rational(c) for c in data.get("den", ["1"])],
        )


def poly_gauss_valuation(f, s, ctx: PrimeContext):
    """``min_i (ord_p a_i + i*s)`` over a coefficient sequence; ``INF`` for zero."""
    best = INF
    for i, c in enumerate(f):
        if c:
            v = ord_p(c, ctx) + i * s
            if v < best:
                best = v
    return best


def gauss_valuation(f, pt: GaussPoint = GaussPoint(), ctx: PrimeContext | None = None, *, tail_floor=0):
    """Gauss valuation of a polynomial, :class:`RatFunc` or :class:`PSeries`.

    For a truncated series the minimum over stored coefficients is returned
    only when the unknown tail cannot undercut it: every unknown coefficient
    is assumed to have valuation ``>= tail_floor`` (the default 0 says the
    tail is integral), so the tail contributes at least
    ``tail_floor + trunc*s``.  Otherwise :class:`UnstableValuationError`.
    """
    s = pt.s
    if isinstance(f, RatFunc):
        vn = poly_gauss_valuation(f.num, s, f.ctx)
        if vn is INF:
            return INF
        return vn - poly_gauss_valuation(f.den, s, f.ctx)
    if isinstance(f, PSeries):
        m = poly_gauss_valuation(f.coeffs, s, f.ctx)
        if s < 0 or m is INF or tail_floor + f.trunc * s < m:
            raise UnstableValuationError(
                f"minimum over {f.trunc} stored coefficients is not certified at s={format_rational(s)}"
            )
        return m
    if ctx is None:
        raise TypeError("a prime context is required for a bare polynomial")
    return poly_gauss_valuation(f, s, ctx)


def arith(a: PSeries, b: PSeries, kind: str) -> PSeries:
    ops = {"add": PSeries.__add__, "sub": PSeries.__sub__, "mul": PSeries.__mul__}
    return ops[kind](a, b)


def derivative(a):
    return a.derivative()


def compose(outer: PSeries, inner: PSeries) -> PSeries:
    return outer.compose(inner)


def ratfunc_arith(a: RatFunc, b: RatFunc, kind: str) -> RatFunc:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise ValueError(f"unknown operation {kind!r}")


def ratfunc_derivative(a: RatFunc) -> RatFunc:
    return a.derivative()
