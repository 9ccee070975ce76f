"""Finite maps of the unit disk given by a rational function ``phi``.

Covers the disk-level data used by the good-reduction bounds: critical
log-radii of ``phi'``, the constant ``|pi_phi| = |phi'|`` on the open unit
disk, local sections (branches ``w(z)`` of ``phi(w) = phi(z)``, or of
``phi(w) = x`` for inverse branches) computed by Hensel linearization, and
Newton-polygon surjectivity witnesses.

"Good reduction" is judged at disk level only: ``phi`` has Gauss norm <= 1
and ``phi'`` has no zero or pole of log-radius > 0.  Whether ``phi`` extends
to a covering of curves with good reduction is not decided here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional, Tuple

from . import poly as P
from .diffsys import DiffSystem
from .errors import CriticalPointError, DomainError, HypothesisError, PoleError, ZeroInputError
from .newton import NewtonPolygon, Side, TailEstimate, build_polygon, tail_slope_estimate
from .series import PSeries, RatFunc, gauss_valuation
from .valuation import INF, PrimeContext, as_fraction, format_rational, ord_p, parse_rational

__all__ = [
    "CoveringReport",
    "SectionSeries",
    "SectionVerdict",
    "SurjectivityWitness",
    "analyze_covering",
    "section_series",
    "section_radius_check",
    "surjectivity_witness",
    "root_log_radii",
    "kummer_system",
]


def root_log_radii(f, ctx: PrimeContext) -> list:
    """Roots of a nonzero polynomial as ``[(log_radius, count)]``; ``INF`` is ``T = 0``."""
    np = build_polygon(f, ctx)
    out = [(INF, np.zero_multiplicity)] if np.zero_multiplicity else []
    return out + np.roots_by_log_radius()


def _roots_in_open_disk(f, ctx) -> int:
    if len(f) <= 1:
        return 0
    return sum(c for r, c in root_log_radii(f, ctx) if r > 0)


def _simple_roots_in_open_disk(f, ctx) -> int:
    # sum over roots of m - 2(m-1) + max(m-2, 0) is 1 for simple roots, else 0
    g = P.gcd(f, P.derivative(f))
    h = P.gcd(g, P.derivative(g)) if len(g) > 1 else P.ONE
    return _roots_in_open_disk(f, ctx) - 2 * _roots_in_open_disk(g, ctx) + _roots_in_open_disk(h, ctx)


def _ramified_over_infinity(phi: RatFunc) -> bool:
    if P.degree(phi.num) - P.degree(phi.den) >= 2:
        return True
    return len(P.gcd(phi.den, P.derivative(phi.den))) > 1


def _radii_json(radii):
    return [{"log_radius": format_rational(r), "count": c} for r, c in radii]


def _radii_from_json(items):
    return tuple((parse_rational(x["log_radius"], allow_inf=True), int(x["count"])) for x in items)


@dataclass(frozen=True)
class CoveringReport:
    phi: RatFunc
    degree: int
    critical_log_radii: Tuple[tuple, ...]
    derivative_pole_log_radii: Tuple[tuple, ...]
    pi_phi_log: Optional[object]
    integral: bool
    good_reduction_etale: bool
    # a simple pole of phi in the disk while infinity is a branch value:
    # the fiber over a branch value meets the disk at a non-critical point
    branch_meets_disk_noncritically: bool

    def to_json(self) -> dict:
        return {
            "phi": self.phi.to_json(),
            "degree": self.degree,
            "critical_log_radii": _radii_json(self.critical_log_radii),
            "derivative_pole_log_radii": _radii_json(self.derivative_pole_log_radii),
            "pi_phi_log": None if self.pi_phi_log is None else format_rational(self.pi_phi_log),
            "integral": self.integral,
            "good_reduction_etale": self.good_reduction_etale,
            "branch_meets_disk_noncritically": self.branch_meets_disk_noncritically,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoveringReport":
        pi = data["pi_phi_log"]
        return cls(
            RatFunc.from_json(data["phi"]),
            int(data["degree"]),
            _radii_from_json(data["critical_log_radii"]),
            _radii_from_json(data["derivative_pole_log_radii"]),
            None if pi is None else parse_rational(pi, allow_inf=True),
            bool(data["integral"]),
            bool(data["good_reduction_etale"]),
            bool(data["branch_meets_disk_noncritically"]),
        )


def analyze_covering(phi: RatFunc) -> CoveringReport:
    ctx = phi.ctx
    dphi = phi.derivative()
    if dphi.is_zero():
        raise ZeroInputError("phi is constant")
    crit = tuple(root_log_radii(dphi.num, ctx))
    poles = tuple(root_log_radii(dphi.den, ctx)) if len(dphi.den) > 1 else ()
    inside = any(r > 0 for r, _ in crit + poles)
    integral = gauss_valuation(phi) >= 0
    # no zero or pole of phi' in the open disk forces |phi'| constant there
    pi_log = None if inside else gauss_valuation(dphi)
    faber = _simple_roots_in_open_disk(phi.den, ctx) > 0 and _ramified_over_infinity(phi)
    return CoveringReport(
        phi,
        phi.degree,
        crit,
        poles,
        pi_log,
        integral,
        integral and not inside,
        faber,
    )


@dataclass(frozen=True)
class SectionSeries:
    """A branch ``w(z) = branch + sum c_n (z - center)**n`` of ``phi(w) = target(z)``.

    ``target`` is ``None`` for the section equation ``phi(w) = phi(z)``.
    """

    phi: RatFunc
    center: Fraction
    branch: Fraction
    w: PSeries
    target: Optional[RatFunc] = None
    radius_report: Optional[TailEstimate] = None

    @property
    def rhs(self) -> RatFunc:
        return self.phi if self.target is None else self.target

    def residual(self) -> PSeries:
        """``num(phi)(w) - den(phi)(w) * target(z)`` as a series in ``z - center``."""
        t = self.w.trunc
        ctx = self.phi.ctx
        h = PSeries(ctx, (Fraction(0),) + self.w.coeffs[1:], t)
        a = PSeries(ctx, P.taylor_shift(self.phi.num, self.branch), t).compose(h)
        b = PSeries(ctx, P.taylor_shift(self.phi.den, self.branch), t).compose(h)
        y = self.rhs.taylor(self.center, t)
        return a - b * y

    def check(self) -> bool:
        return self.residual().is_zero()

    def slopes(self) -> list:
        """``[(n, -ord c_n / n)]`` over nonzero coefficients with ``n >= 1``."""
        ctx = self.w.ctx
        return [(n, Fraction(-ord_p(c, ctx), n)) for n, c in enumerate(self.w.coeffs) if n and c]

    def to_json(self) -> dict:
        rr = self.radius_report
        return {
            "phi": self.phi.to_json(),
            "center": format_rational(self.center),
            "branch": format_rational(self.branch),
            "w": self.w.to_json(),
            "target": None if self.target is None else self.target.to_json(),
            "radius_report": None
            if rr is None
            else {
                "certified_max_prefix": format_rational(rr.certified_max_prefix),
                "window_estimate": None if rr.window_estimate is None else format_rational(rr.window_estimate),
                "achieving_index": rr.achieving_index,
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "SectionSeries":
        rr = data.get("radius_report")
        return cls(
            RatFunc.from_json(data["phi"]),
            parse_rational(data["center"]),
            parse_rational(data["branch"]),
            PSeries.from_json(data["w"]),
            None if data.get("target") is None else RatFunc.from_json(data["target"]),
            None
            if rr is None
            else TailEstimate(
                parse_rational(rr["certified_max_prefix"]),
                None if rr["window_estimate"] is None else parse_rational(rr["window_estimate"]),
                int(rr["achieving_index"]),
            ),
        )

    def to_tsv(self) -> str:
        lines = ["n\tord\tslope"]
        ctx = self.w.ctx
        for n, c in enumerate(self.w.coeffs):
            if n and c:
                v = ord_p(c, ctx)
                lines.append(f"{n}\t{v}\t{format_rational(Fraction(-v, n))}")
        return "\n".join(lines) + "\n"


def section_series(phi: RatFunc, z0, w0, N: int, target: RatFunc | None = None, window: int | None = None) -> SectionSeries:
    """Solve ``phi(w(z)) = target(z)`` (default ``target = phi``) near ``z0`` with ``w(z0) = w0``.

    Writing ``phi = A/B`` the equation becomes ``sum_k E_k(u) h**k = 0`` with
    ``h = w - w0``, ``u = z - z0`` and ``E_k = A_k - B_k Y(u)`` where ``A_k, B_k``
    are the Taylor coefficients of ``A, B`` at ``w0`` and ``Y`` is the target
    expanded at ``z0``.  The coefficient of ``c_n`` in degree ``n`` is
    ``E_1(0) = B(w0) phi'(w0)``, so each ``c_n`` costs one division by it.
    The result is known modulo ``u**N``.
    """
    ctx = phi.ctx
    z0, w0 = as_fraction(z0), as_fraction(w0)
    rhs = phi if target is None else target
    if N < 1:
        raise ValueError("truncation order must be positive")
    if P.evaluate(phi.den, w0) == 0:
        raise PoleError(f"branch point {format_rational(w0)} is a pole of phi")
    Y = rhs.taylor(z0, N).coeffs
    if phi(w0) != Y[0]:
        raise DomainError(
            f"phi({format_rational(w0)}) = {format_rational(phi(w0))} differs from "
            f"target({format_rational(z0)}) = {format_rational(Y[0])}"
        )
    if phi.derivative()(w0) == 0:
        raise CriticalPointError(f"critical branch point: phi'({format_rational(w0)}) = 0")
    A = P.taylor_shift(phi.num, w0)
    B = P.taylor_shift(phi.den, w0)
    K = max(len(A), len(B))
    # E[k][m] = [u^m] (A_k - B_k Y)
    E = []
    for k in range(K):
        ak = A[k] if k < len(A) else 0
        bk = B[k] if k < len(B) else 0
        E.append([(ak if m == 0 else 0) - bk * Y[m] for m in range(N)])
    lin = E[1][0] if K > 1 else 0
    if lin == 0:  # pragma: no cover - excluded by the critical-point check
        raise CriticalPointError("linear coefficient vanishes")
    c = [Fraction(0)] * N
    # H[k][m] = [u^m] h**k for k >= 1; H[0] = 1
    H = [[Fraction(1)] + [Fraction(0)] * (N - 1)] + [[Fraction(0)] * N for _ in range(K - 1)]
    for n in range(1, N):
        for k in range(2, K):
            H[k][n] = sum(c[j] * H[k - 1][n - j] for j in range(1, n) if c[j])
        acc = E[0][n] + sum(E[1][m] * c[n - m] for m in range(1, n))
        for k in range(2, K):
            Ek, Hk = E[k], H[k]
            acc += sum(Ek[m] * Hk[n - m] for m in range(0, n - k + 2) if Ek[m])
        c[n] = -acc / lin
        if K > 1:
            H[1][n] = c[n]
    w = PSeries(ctx, [w0] + c[1:], N)
    if window is None:
        window = max(2, -(-N // 4))
    report = None
    if N > window >= 2:
        try:
            report = tail_slope_estimate(w, window)
        except ZeroInputError:
            report = None
    return SectionSeries(phi, z0, w0, w, target, report)


class SectionVerdict(NamedTuple):
    within_bound: bool
    bound_log: Fraction
    max_slope: Optional[Fraction]
    achieving_index: Optional[int]
    margin: Optional[Fraction]
    window_estimate: Optional[Fraction]


def section_radius_check(s: SectionSeries, report: CoveringReport) -> SectionVerdict:
    """Check ``-ord(c_n)/n <= 1/(p-1) + ord(pi_phi)`` for every computed ``c_n``.

    That is the coefficient form of convergence on the open disk of radius
    ``p**(-1/(p-1)) |pi_phi|``.  Refuses without disk-level good reduction.
    """
    if not report.good_reduction_etale:
        raise HypothesisError("covering is not etale with good reduction on the unit disk")
    ctx = s.phi.ctx
    bound = ctx.rolle_bound + report.pi_phi_log
    slopes = s.slopes()
    if not slopes:
        return SectionVerdict(True, bound, None, None, None, None)
    n, top = max(slopes, key=lambda t: (t[1], -t[0]))
    win = s.radius_report.window_estimate if s.radius_report else None
    return SectionVerdict(top <= bound, bound, top, n, bound - top, win)


class SurjectivityWitness(NamedTuple):
    hit: bool
    polygon: NewtonPolygon
    side: Optional[Side]


def surjectivity_witness(phi: RatFunc, a) -> SurjectivityWitness:
    """Does ``a`` have a preimage in the open unit disk?

    Reads the Newton polygon of ``num(phi - a)``: a root at ``T = 0`` or a side
    of negative slope is such a preimage.
    """
    a = as_fraction(a)
    if phi.derivative().is_zero():
        raise ZeroInputError("phi is constant")
    g = P.sub(phi.num, P.scale(phi.den, a))
    np = build_polygon(g, phi.ctx)
    side = next((sd for sd in np.sides if sd.slope < 0), None)
    return SurjectivityWitness(side is not None or np.zero_multiplicity > 0, np, side)


def kummer_system(d: int, ctx: PrimeContext) -> DiffSystem:
    """Direct image of the trivial connection under ``w**d = T``: ``diag(m/(d T))``."""
    if d < 1 or gcd(d, ctx.p) != 1:
        raise DomainError("Kummer degree must be positive and prime to p")
    T = RatFunc.variable(ctx)
    zero = RatFunc.constant(ctx, 0)
    return DiffSystem(
        ctx,
        [[Fraction(m, d) / T if i == m else zero for i in range(d)] for m in range(d)],
    )
