"""Exact p-adic valuations of rationals.

Valuations live in Q together with a distinguished infinity, :data:`INF`,
which is the valuation of zero.  Radii are never stored as floats: a radius
``p**-v`` is represented by its log-radius ``v`` (a ``Fraction``), so a larger
log-radius means a *smaller* disk.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import InvalidPrimeError

__all__ = [
    "INF",
    "PrimeContext",
    "LogValue",
    "ord_p",
    "factorial_valuation",
    "key_inequality_check",
    "KeyInequality",
    "format_rational",
    "parse_rational",
    "as_fraction",
]


class _Infinity:
    """The valuation of zero.  Absorbs addition, exceeds every rational."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_Infinity, ())

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ValueError("inf - inf is undefined")
        if isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    def __rsub__(self, other):
        raise ValueError("finite - inf has no representation as a valuation")

    def __neg__(self):
        raise ValueError("-inf has no representation as a valuation")

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("padic_rolle.INF")

    def __lt__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __le__(self, other):
        if other is self:
            return True
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if other is self:
            return False
        if isinstance(other, (int, Fraction)):
            return True
        return NotImplemented

    def __ge__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return True
        return NotImplemented


INF = _Infinity()

LogValue = Union[int, Fraction, _Infinity]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeContext:
    """The residue characteristic ``p``; validated by trial division."""

    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int) or not _is_prime(self.p):
            raise InvalidPrimeError(f"{self.p!r} is not a prime")

    @property
    def rolle_bound(self) -> Fraction:
        """Log-radius ``1/(p-1)`` of the disk of radius ``p**(-1/(p-1))``."""
        return Fraction(1, self.p - 1)


def _ord_int(n: int, p: int) -> int:
    if p == 2:
        return (n & -n).bit_length() - 1
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p(x, ctx: PrimeContext) -> LogValue:
    """Exponent of ``ctx.p`` in the rational ``x``; ``INF`` for zero.

    >>> ord_p(Fraction(6, 5), PrimeContext(3))
    1
    """
    if isinstance(x, int):
        if x == 0:
            return INF
        return _ord_int(x, ctx.p)
    if not isinstance(x, Fraction):
        raise TypeError(f"ord_p needs an exact rational, got {type(x).__name__}")
    if x == 0:
        return INF
    p = ctx.p
    num, den = x.numerator, x.denominator
    if num % p == 0:
        return _ord_int(num, p)
    if den % p == 0:
        return -_ord_int(den, p)
    return 0


def factorial_valuation(n: int, ctx: PrimeContext) -> int:
    """``ord_p(n!)`` by Legendre's formula ``(n - s_p(n)) / (p - 1)``."""
    if n < 0:
        raise ValueError("factorial of a negative integer")
    p = ctx.p
    digits, m = 0, n
    while m:
        m, r = divmod(m, p)
        digits += r
    return (n - digits) // (p - 1)


class KeyInequality(NamedTuple):
    """Outcome of ``ord_p(n) <= (n-1)/(p-1)`` for ``n = p**k * m``.

    ``lhs`` and ``rhs`` are the two sides of the integer form
    ``p**k * m - 1 >= k * (p - 1)``.
    """

    holds: bool
    p: int
    n: int
    k: int
    m: int
    lhs: int
    rhs: int

    @property
    def ord(self) -> int:
        return self.k

    @property
    def bound(self) -> Fraction:
        return Fraction(self.n - 1, self.p - 1)

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs


def key_inequality_check(n: int, ctx: PrimeContext) -> KeyInequality:
    """Check ``|n| >= |p|**((n-1)/(p-1))`` in its integer form."""
    if n < 2:
        raise ValueError("key inequality is stated for n >= 2")
    p = ctx.p
    k, m = 0, n
    while m % p == 0:
        m //= p
        k += 1
    rhs = k * (p - 1)
    return KeyInequality(rhs <= n - 1, p, n, k, m, n - 1, rhs)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def format_rational(x) -> str:
    """``"num/den"`` with the denominator omitted when 1; ``"inf"`` for INF."""
    if x is INF:
        return "inf"
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text, allow_inf: bool = False):
    if isinstance(text, str) and text.strip() == "inf":
        if not allow_inf:
            raise ValueError("infinity not allowed here")
        return INF
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc
