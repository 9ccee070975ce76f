"""Linear differential systems ``dY/dT = G Y`` over rational functions.

The iterates ``G_[i]`` defined by ``(1/i!) d^i Y/dT^i = G_[i] Y`` satisfy
``G_[1] = G`` and ``(i+1) G_[i+1] = d/dT G_[i] + G_[i] G``.  Writing
``G = A/D`` with integer polynomial matrix ``A`` and integer polynomial ``D``,
every iterate is ``G_[i] = B_i / (i! D**i)`` with

    B_1 = A,    B_{i+1} = B_i' D - i D' B_i + B_i A,

so the whole chain runs on integer polynomials and never needs a gcd.

The generic radius at the Gauss point of log-radius ``s`` is
``liminf max(1, |G_[i]|)**(-1/i)``; in log form each index contributes
``max(0, -v_s(G_[i]))/i``.  Only finitely many indices are ever computed, so
:func:`generic_radius` reports a prefix maximum and a tail-window value and
never claims to have found the limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Sequence

from . import poly as P
from .errors import ContextMismatchError, PoleError, SingularMatrixError
from .expr import parse_ratfunc
from .series import GaussPoint, PSeries, RatFunc, gauss_valuation, poly_gauss_valuation
from .valuation import INF, PrimeContext, as_fraction, factorial_valuation, format_rational, parse_rational

__all__ = [
    "DiffSystem",
    "SystemIterates",
    "RadiusEstimate",
    "GaugeResult",
    "iterate_system",
    "log_radius_sequence",
    "generic_radius",
    "trivial_estimate",
    "gauge_transform",
    "is_unimodular",
    "solution_at_point",
    "matrix_valuation",
    "mat_mul",
    "mat_inverse",
]

Matrix = List[List[RatFunc]]


def _neglog(v) -> Fraction:
    """``max(0, -v)``, the log of ``max(1, |x|)``."""
    if v is INF or v >= 0:
        return Fraction(0)
    return Fraction(-v)


# -- matrices of rational functions ---------------------------------------


def identity(ctx: PrimeContext, n: int) -> Matrix:
    return [[RatFunc.constant(ctx, int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, k = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(k):
            acc = a[i][0] * b[0][j]
            for t in range(1, m):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_derivative(a: Matrix) -> Matrix:
    return [[x.derivative() for x in row] for row in a]


def mat_inverse(a: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the field Q(T)."""
    n = len(a)
    ctx = a[0][0].ctx
    work = [list(row) + ident for row, ident in zip(a, identity(ctx, n))]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not work[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular over Q(T)")
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and not work[r][col].is_zero():
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]


def matrix_valuation(a: Matrix, pt: GaussPoint = GaussPoint()):
    """Min of the entries' Gauss valuations (so ``|A|`` is the max entry)."""
    return min((gauss_valuation(x, pt) for row in a for x in row), default=INF)


# -- systems ---------------------------------------------------------------


class DiffSystem:
    """``dY/dT = G Y`` with ``G`` a square matrix of :class:`RatFunc`."""

    __slots__ = ("ctx", "G")

    def __init__(self, ctx: PrimeContext, G: Sequence[Sequence]):
        n = len(G)
        if n == 0 or any(len(row) != n for row in G):
            raise ValueError("G must be a nonempty square matrix")
        rows = []
        for row in G:
            out = []
            for x in row:
                if not isinstance(x, RatFunc):
                    x = RatFunc.constant(ctx, as_fraction(x))
                elif x.ctx != ctx:
                    raise ContextMismatchError("matrix entry over a different prime")
                out.append(x)
            rows.append(tuple(out))
        self.ctx = ctx
        self.G = tuple(rows)

    @property
    def n(self) -> int:
        return len(self.G)

    def matrix(self) -> Matrix:
        return [list(row) for row in self.G]

    def __eq__(self, other):
        if not isinstance(other, DiffSystem):
            return NotImplemented
        return self.ctx == other.ctx and self.G == other.G

    def __repr__(self):
        return f"DiffSystem(p={self.ctx.p}, n={self.n}, G={[list(r) for r in self.G]!r})"

    def common_denominator(self):
        """``(A, D)`` with integer polynomials and ``G = A / D``."""
        den = P.ONE
        for row in self.G:
            for x in row:
                den = P.divmod_poly(P.mul(den, x.den), P.gcd(den, x.den))[0]
        num = [[P.mul(x.num, P.divmod_poly(den, x.den)[0]) for x in row] for row in self.G]
        scale = P.content_lcm(den)
        for row in num:
            for f in row:
                scale = math.lcm(scale, P.content_lcm(f))
        as_int = lambda f: tuple(int(c * scale) for c in f)  # noqa: E731
        return [[as_int(f) for f in row] for row in num], as_int(den)

    def to_json(self) -> dict:
        return {
            "prime": self.ctx.p,
            "n": self.n,
            "G": [[x.to_json() for x in row] for row in self.G],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiffSystem":
        ctx = PrimeContext(int(data["prime"]))
        key = "G" if "G" in data else "P"
        rows = [[_entry_from_json(ctx, x) for x in row] for row in data[key]]
        if "n" in data and int(data["n"]) != len(rows):
            raise ValueError(f"declared n={data['n']} but matrix has {len(rows)} rows")
        return cls(ctx, rows)


def _entry_from_json(ctx: PrimeContext, x) -> RatFunc:
    if isinstance(x, dict):
        r = RatFunc.from_json({"prime": ctx.p, **x})
        if r.ctx != ctx:
            raise ContextMismatchError("matrix entry over a different prime")
        return r
    if isinstance(x, str):
        return parse_ratfunc(x, ctx)
    return RatFunc.constant(ctx, as_fraction(x))


def matrix_from_json(ctx: PrimeContext, rows) -> Matrix:
    return [[_entry_from_json(ctx, x) for x in row] for row in rows]


def _int_matmul(a, b):
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = ()
            for t in range(n):
                if a[i][t] and b[t][j]:
                    acc = P.add(acc, P.mul(a[i][t], b[t][j]))
            row.append(acc)
        out.append(row)
    return out


class SystemIterates:
    """``G_[1..N]`` stored as ``B_i`` with ``G_[i] = B_i / (i! D**i)``."""

    def __init__(self, system: DiffSystem, den: tuple, numerators: list):
        self.system = system
        self.den = den
        self.numerators = numerators
        self._norms: dict = {}

    @property
    def order(self) -> int:
        return len(self.numerators)

    def iterate(self, i: int) -> Matrix:
        """``G_[i]`` as a normalized :class:`RatFunc` matrix (1-based)."""
        ctx = self.system.ctx
        den = P.scale(P.power(self.den, i), math.factorial(i))
        return [[RatFunc(ctx, f, den) for f in row] for row in self.numerators[i - 1]]

    @property
    def iterates(self) -> list:
        return [self.iterate(i) for i in range(1, self.order + 1)]

    def valuation(self, i: int, pt: GaussPoint = GaussPoint()):
        return self.norms_at(pt)[i - 1]

    def norms_at(self, pt: GaussPoint = GaussPoint()) -> list:
        """``[v_s(G_[1]), ..., v_s(G_[N])]`` (matrix valuation = min over entries)."""
        if pt.s not in self._norms:
            ctx = self.system.ctx
            vd = poly_gauss_valuation(self.den, pt.s, ctx)
            out = []
            for i, B in enumerate(self.numerators, start=1):
                vb = min((poly_gauss_valuation(f, pt.s, ctx) for row in B for f in row), default=INF)
                out.append(INF if vb is INF else vb - factorial_valuation(i, ctx) - i * vd)
            self._norms[pt.s] = out
        return self._norms[pt.s]

    def evaluate(self, i: int, x: Fraction):
        """``G_[i](x)`` as a matrix of rationals (``i = 0`` is the identity)."""
        n = self.system.n
        if i == 0:
            return [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        d = P.evaluate(self.den, x)
        if d == 0:
            raise PoleError(f"{format_rational(x)} is a pole of the system")
        scale = math.factorial(i) * d**i
        return [[Fraction(P.evaluate(f, x)) / scale for f in row] for row in self.numerators[i - 1]]


def iterate_system(sys: DiffSystem, N: int) -> SystemIterates:
    if N < 1:
        raise ValueError("order must be positive")
    A, D = sys.common_denominator()
    dD = P.derivative(D)
    B = A
    numerators = [B]
    for i in range(1, N):
        prod = _int_matmul(B, A)
        B = [
            [
                P.add(P.sub(P.mul(P.derivative(b), D), P.scale(P.mul(dD, b), i)), prod[r][c])
                for c, b in enumerate(row)
            ]
            for r, row in enumerate(B)
        ]
        numerators.append(B)
    return SystemIterates(sys, D, numerators)


def log_radius_sequence(its: SystemIterates, pt: GaussPoint = GaussPoint()) -> list:
    """Per-index log-radius ``max(0, -v_s(G_[i]))/i`` for ``i = 1..N``."""
    return [_neglog(v) / i for i, v in enumerate(its.norms_at(pt), start=1)]


@dataclass(frozen=True)
class RadiusEstimate:
    """Finite-order data on the generic radius ``p**-v`` (log-radius ``v``).

    ``certified_prefix_min_log`` is the max over ``i <= N`` of the per-index
    log-radii, i.e. the minimum radius seen so far.  ``tail_window_log`` is
    the same max over the last quarter of the indices.
    """

    certified_prefix_min_log: Fraction
    tail_window_log: Fraction
    trivial_bound_log: Fraction
    order_used: int
    gauss_s: Fraction = Fraction(0)

    def to_json(self) -> dict:
        return {
            "certified_prefix_min_log": format_rational(self.certified_prefix_min_log),
            "tail_window_log": format_rational(self.tail_window_log),
            "trivial_bound_log": format_rational(self.trivial_bound_log),
            "order_used": self.order_used,
            "gauss_s": format_rational(self.gauss_s),
        }

    @classmethod
    def from_json(cls, data: dict) -> "RadiusEstimate":
        return cls(
            parse_rational(data["certified_prefix_min_log"]),
            parse_rational(data["tail_window_log"]),
            parse_rational(data["trivial_bound_log"]),
            int(data["order_used"]),
            parse_rational(data.get("gauss_s", "0")),
        )


def trivial_estimate(sys: DiffSystem, pt: GaussPoint = GaussPoint()) -> Fraction:
    """Log-radius ``max(0, -v_s(G)) + 1/(p-1)``; the true generic log-radius is at most this."""
    return _neglog(matrix_valuation(sys.matrix(), pt)) + sys.ctx.rolle_bound


def generic_radius(sys: DiffSystem, pt: GaussPoint = GaussPoint(), N: int = 16, its: SystemIterates | None = None) -> RadiusEstimate:
    if its is None or its.order < N:
        its = iterate_system(sys, N)
    seq = log_radius_sequence(its, pt)[:N]
    window = max(1, -(-N // 4))
    return RadiusEstimate(
        max(seq),
        max(seq[-window:]),
        trivial_estimate(sys, pt),
        N,
        pt.s,
    )


class GaugeResult(NamedTuple):
    system: DiffSystem
    unimodular: bool


def is_unimodular(Pm: Matrix, pt: GaussPoint = GaussPoint(), inverse: Matrix | None = None) -> bool:
    """``|P| = |P^-1| = 1`` at the Gauss point ``pt``."""
    if inverse is None:
        inverse = mat_inverse(Pm)
    return matrix_valuation(Pm, pt) == 0 and matrix_valuation(inverse, pt) == 0


def gauge_transform(sys: DiffSystem, Pm: Sequence[Sequence[RatFunc]], pt: GaussPoint = GaussPoint()) -> GaugeResult:
    """System satisfied by ``P Y``: ``G^[P] = (P' + P G) P^-1``."""
    Pm = [list(row) for row in Pm]
    if len(Pm) != sys.n or any(len(r) != sys.n for r in Pm):
        raise ValueError("gauge matrix has the wrong shape")
    inv = mat_inverse(Pm)
    G = mat_mul(mat_add(mat_derivative(Pm), mat_mul(Pm, sys.matrix())), inv)
    return GaugeResult(DiffSystem(sys.ctx, G), is_unimodular(Pm, pt, inv))


def solution_at_point(sys: DiffSystem, x, N: int, its: SystemIterates | None = None) -> list:
    """Fundamental matrix ``Y_x = sum_{i<=N} G_[i](x) (T-x)**i`` as series in ``T - x``.

    Entries are :class:`PSeries` in ``u = T - x`` known modulo ``u**(N+1)``.
    """
    x = as_fraction(x)
    if its is None or its.order < N:
        its = iterate_system(sys, N)
    n = sys.n
    values = [its.evaluate(i, x) for i in range(N + 1)]
    return [
        [PSeries(sys.ctx, [values[i][r][c] for i in range(N + 1)], N + 1) for c in range(n)]
        for r in range(n)
    ]
