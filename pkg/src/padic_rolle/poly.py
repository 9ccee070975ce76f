"""Dense univariate polynomials over Q.

A polynomial is a tuple of coefficients in ascending degree with no trailing
zeros; the zero polynomial is ``()``.  Coefficients are ``Fraction`` or
``int``; nothing here ever produces a float.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, lcm
from typing import Sequence, Tuple

Poly = Tuple

ZERO: Poly = ()
ONE: Poly = (Fraction(1),)
T: Poly = (Fraction(0), Fraction(1))


def trim(coeffs: Sequence) -> Poly:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def to_poly(coeffs: Sequence) -> Poly:
    return trim([c if isinstance(c, Fraction) else Fraction(c) for c in coeffs])


def degree(f: Poly) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(f) - 1


def add(f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] += c
    return trim(out)


def neg(f: Poly) -> Poly:
    return tuple(-c for c in f)


def sub(f: Poly, g: Poly) -> Poly:
    return add(f, neg(g))


def scale(f: Poly, c) -> Poly:
    if c == 0:
        return ZERO
    return tuple(a * c for a in f)


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ZERO
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def power(f: Poly, e: int) -> Poly:
    if e < 0:
        raise ValueError("negative polynomial power")
    result: Poly = (Fraction(1),) if not f or isinstance(f[0], Fraction) else (1,)
    base = f
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def derivative(f: Poly) -> Poly:
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f: Poly, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def divmod_poly(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return ZERO, f
    rem = [Fraction(c) for c in f]
    lead = Fraction(g[-1])
    q = [Fraction(0)] * (len(f) - len(g) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = rem[k + len(g) - 1] / lead
        q[k] = c
        if c:
            for j, b in enumerate(g):
                rem[k + j] -= c * b
    return trim(q), trim(rem[: len(g) - 1])


def monic(f: Poly) -> Poly:
    if not f:
        return f
    lead = Fraction(f[-1])
    return tuple(Fraction(c) / lead for c in f)


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm (remainders kept monic)."""
    f, g = monic(f), monic(g)
    while g:
        _, r = divmod_poly(f, g)
        f, g = g, monic(r)
    return f


def taylor_shift(f: Poly, x0) -> Poly:
    """Coefficients of ``f(x0 + u)`` in ``u``."""
    d = len(f)
    return trim(
        [sum(comb(j, i) * f[j] * x0 ** (j - i) for j in range(i, d)) for i in range(d)]
    )


def compose(f: Poly, g: Poly) -> Poly:
    acc: Poly = ZERO
    for c in reversed(f):
        acc = add(mul(acc, g), (c,))
    return acc


def content_lcm(f: Poly) -> int:
    """Least common multiple of the coefficient denominators."""
    out = 1
    for c in f:
        if isinstance(c, Fraction):
            out = lcm(out, c.denominator)
    return out
