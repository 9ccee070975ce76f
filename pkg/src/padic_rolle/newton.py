"""Newton polygons: lower convex hulls of ``(i, ord_p a_i)``.

A side of slope ``-sigma`` and horizontal length ``l`` accounts for ``l``
roots (over an algebraic closure) of absolute value ``p**-sigma``, i.e. of
log-radius ``sigma``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

from .errors import ProvisionalPolygonError, ZeroInputError
from .series import PSeries
from .valuation import PrimeContext, format_rational, ord_p, parse_rational

__all__ = [
    "Side",
    "NewtonPolygon",
    "RootWitness",
    "TailEstimate",
    "build_polygon",
    "lower_hull",
    "roots_by_log_radius",
    "has_root_in_open_unit_disk",
    "tail_slope_estimate",
]


class Side(NamedTuple):
    slope: Fraction
    length: int

    @property
    def log_radius(self) -> Fraction:
        return -self.slope


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(points: Sequence[Tuple[int, Fraction]]) -> list:
    """Monotone-chain lower hull of points with distinct abscissae.

    Collinear interior points are dropped, so consecutive hull edges have
    strictly increasing slopes.
    """
    hull: list = []
    for pt in sorted(points):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return hull


@dataclass(frozen=True)
class NewtonPolygon:
    ctx: PrimeContext
    points: Tuple[Tuple[int, Fraction], ...]
    vertices: Tuple[Tuple[int, Fraction], ...]
    sides: Tuple[Side, ...]
    # set when built from a truncated series: nothing is known past the data
    provisional: bool = False
    certified_up_to: Optional[int] = field(default=None)

    @property
    def zero_multiplicity(self) -> int:
        """Multiplicity of ``T = 0`` as a root (first index with a_i != 0)."""
        return self.vertices[0][0]

    def roots_by_log_radius(self):
        return roots_by_log_radius(self)

    def to_json(self) -> dict:
        roots = None if self.provisional else [
            {"log_radius": format_rational(r), "count": c} for r, c in self.roots_by_log_radius()
        ]
        return {
            "prime": self.ctx.p,
            "points": [[i, format_rational(v)] for i, v in self.points],
            "vertices": [[i, format_rational(v)] for i, v in self.vertices],
            "sides": [{"slope": format_rational(s.slope), "length": s.length} for s in self.sides],
            "provisional": self.provisional,
            "certified_up_to": self.certified_up_to,
            "zero_multiplicity": self.zero_multiplicity,
            "roots": roots,
        }

    @classmethod
    def from_json(cls, data: dict) -> "NewtonPolygon":
        return cls(
            PrimeContext(int(data["prime"])),
            tuple((int(i), parse_rational(v)) for i, v in data["points"]),
            tuple((int(i), parse_rational(v)) for i, v in data["vertices"]),
            tuple(Side(parse_rational(s["slope"]), int(s["length"])) for s in data["sides"]),
            bool(data.get("provisional", False)),
            data.get("certified_up_to"),
        )

    def to_tsv(self) -> str:
        """Plot data: the input points, a blank line, then the hull vertices."""
        lines = ["# points"]
        lines += [f"{i}\t{format_rational(v)}" for i, v in self.points]
        lines += ["", "# hull"]
        lines += [f"{i}\t{format_rational(v)}" for i, v in self.vertices]
        return "\n".join(lines) + "\n"


def build_polygon(f, ctx: PrimeContext | None = None) -> NewtonPolygon:
    """Newton polygon of a coefficient sequence or a :class:`PSeries`."""
    provisional = isinstance(f, PSeries)
    if provisional:
        ctx = f.ctx
        coeffs = f.coeffs
    else:
        if ctx is None:
            raise TypeError("a prime context is required for a bare polynomial")
        coeffs = f
    points = tuple((i, Fraction(ord_p(c, ctx))) for i, c in enumerate(coeffs) if c)
    if not points:
        raise ZeroInputError("Newton polygon of the zero polynomial")
    vertices = tuple(lower_hull(points))
    sides = tuple(
        Side(Fraction(b[1] - a[1]) / (b[0] - a[0]), b[0] - a[0])
        for a, b in zip(vertices, vertices[1:])
    )
    return NewtonPolygon(ctx, points, vertices, sides, provisional, f.trunc if provisional else None)


def roots_by_log_radius(np: NewtonPolygon) -> list:
    """``[(log_radius, count), ...]`` for the nonzero roots, one entry per side.

    Roots at ``T = 0`` are not listed; see :attr:`NewtonPolygon.zero_multiplicity`.
    """
    if np.provisional:
        raise ProvisionalPolygonError(
            "root counts need the full polygon; this one comes from a truncated series"
        )
    return [(-s.slope, s.length) for s in np.sides]


class RootWitness(NamedTuple):
    found: bool
    side: Optional[Side]
    at_zero: bool


def has_root_in_open_unit_disk(f, ctx: PrimeContext) -> RootWitness:
    np = build_polygon(f, ctx)
    for side in np.sides:
        if side.slope < 0:
            return RootWitness(True, side, np.zero_multiplicity > 0)
    return RootWitness(np.zero_multiplicity > 0, None, np.zero_multiplicity > 0)


class TailEstimate(NamedTuple):
    certified_max_prefix: Fraction
    window_estimate: Optional[Fraction]
    achieving_index: int


def tail_slope_estimate(f: PSeries, window: int) -> TailEstimate:
    """Estimate ``limsup (-ord a_n)/n``, the convergence log-radius of ``f``.

    The prefix maximum over ``1 <= n < trunc`` is a certified lower bound for
    the limsup; the maximum over the last ``window`` indices is a heuristic
    for the limsup itself (``None`` if those coefficients all vanish).
    """
    if not (f.trunc > window >= 2):
        raise ValueError(f"need trunc > window >= 2, got trunc={f.trunc}, window={window}")
    best = None
    arg = 0
    win = None
    start = f.trunc - window
    for n in range(1, f.trunc):
        c = f.coeffs[n]
        if not c:
            continue
        slope = Fraction(-ord_p(c, f.ctx), n)
        if best is None or slope > best:
            best, arg = slope, n
        if n >= start and (win is None or slope > win):
            win = slope
    if best is None:
        raise ZeroInputError("series has no nonzero coefficient of positive degree")
    return TailEstimate(best, win, arg)
