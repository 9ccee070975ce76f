"""Etaleness and injectivity radius of a power series on the open unit disk.

For ``f = sum a_n T**n`` with ``a_1 != 0``:

* ``f`` is etale on ``D(0, 1-)`` iff ``|a_1| > |n a_n| rho**(n-1)`` for all
  ``rho < 1`` and ``n >= 2``.  Since ``rho**(n-1) < 1`` restores strictness,
  this is the non-strict ``ord a_1 <= ord(n a_n)``, which is what we test.
* ``f`` is an open immersion on ``D(0, r-)`` iff ``|a_1| > |a_n| rho**(n-1)``
  for all ``rho < r``.  In log coordinates this holds exactly for
  ``log_r >= (ord a_1 - ord a_n)/(n-1)`` for every ``n``, so the smallest
  admissible log-radius is a finite maximum, computed in closed form.

Both conditions are read off the stored coefficients only; reports carry
``verified_up_to`` (the truncation order) to say so.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Tuple

from .errors import CriticalPointError, DomainError
from .series import PSeries
from .valuation import (
    KeyInequality,
    key_inequality_check,
    format_rational,
    ord_p,
    parse_rational,
)

__all__ = [
    "EtaleCheck",
    "ImmersionRadius",
    "RolleReport",
    "etale_check",
    "injectivity_contributions",
    "open_immersion_log_radius",
    "rolle_verify",
]


def _linear_valuation(f: PSeries):
    if f.trunc < 2:
        raise DomainError("need the linear coefficient (trunc >= 2)")
    a1 = f.coeffs[1]
    if a1 == 0:
        raise CriticalPointError("a_1 = 0: the map is critical at the center")
    return ord_p(a1, f.ctx)


class EtaleCheck(NamedTuple):
    etale: bool
    failing_index: Optional[int]
    verified_up_to: int
    # True when the integrality hypothesis upgrades the check to every order
    all_orders: bool


def etale_check(f: PSeries, assume_integral_tail: bool = False) -> EtaleCheck:
    """Test ``ord a_1 <= ord(n a_n)`` for every stored ``n >= 2``.

    With ``assume_integral_tail`` (all unknown coefficients lie in the ring
    of integers) and ``ord a_1 = 0`` the answer holds for all ``n``.
    """
    v1 = _linear_valuation(f)
    ctx = f.ctx
    for n in range(2, f.trunc):
        an = f.coeffs[n]
        if an and v1 > ord_p(n * an, ctx):
            return EtaleCheck(False, n, f.trunc, False)
    return EtaleCheck(True, None, f.trunc, assume_integral_tail and v1 <= 0)


def injectivity_contributions(f: PSeries) -> dict:
    """``{n: (ord a_1 - ord a_n)/(n - 1)}`` over stored nonzero ``a_n``, ``n >= 2``."""
    v1 = _linear_valuation(f)
    return {
        n: Fraction(v1 - ord_p(an, f.ctx), n - 1)
        for n, an in enumerate(f.coeffs)
        if n >= 2 and an
    }


class ImmersionRadius(NamedTuple):
    log_radius: Fraction
    achieving_index: Optional[int]


def open_immersion_log_radius(f: PSeries) -> ImmersionRadius:
    """Smallest log-radius ``v`` with ``f`` an open immersion on ``D(0, p**-v -)``.

    Clamped at 0 (the unit disk); ``achieving_index`` is ``None`` when every
    contribution is negative, i.e. the clamp decides.
    """
    best, arg = Fraction(0), None
    for n, c in injectivity_contributions(f).items():
        if c > best or (arg is None and c == best):
            best, arg = c, n
    return ImmersionRadius(best, arg)


@dataclass(frozen=True)
class RolleReport:
    etale: bool
    injectivity_log_radius: Fraction
    achieving_index: Optional[int]
    rolle_bound: Fraction
    bound_respected: bool
    verified_up_to: int
    failing_index: Optional[int] = None
    # key_inequality_check at every index that bounds the radius
    trail: Tuple[KeyInequality, ...] = field(default=(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "etale": self.etale,
            "injectivity_log_radius": format_rational(self.injectivity_log_radius),
            "achieving_index": self.achieving_index,
            "rolle_bound": format_rational(self.rolle_bound),
            "bound_respected": self.bound_respected,
            "verified_up_to": self.verified_up_to,
            "failing_index": self.failing_index,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RolleReport":
        return cls(
            bool(data["etale"]),
            parse_rational(data["injectivity_log_radius"]),
            data["achieving_index"],
            parse_rational(data["rolle_bound"]),
            bool(data["bound_respected"]),
            int(data["verified_up_to"]),
            data.get("failing_index"),
        )


def rolle_verify(f: PSeries) -> RolleReport:
    """Etale on the unit disk implies injective on disks of log-radius >= 1/(p-1).

    For each stored index the chain
    ``(ord a_1 - ord a_n)/(n-1) <= ord(n)/(n-1) <= 1/(p-1)`` is recorded:
    the first step is etaleness, the second is :func:`key_inequality_check`.
    """
    ctx = f.ctx
    et = etale_check(f)
    rad = open_immersion_log_radius(f)
    bound = ctx.rolle_bound
    trail = ()
    if et.etale:
        trail = tuple(key_inequality_check(n, ctx) for n in range(2, f.trunc) if f.coeffs[n])
        if not all(k.holds for k in trail):  # pragma: no cover - would refute the lemma
            raise AssertionError("key inequality failed")
    respected = (not et.etale) or rad.log_radius <= bound
    return RolleReport(
        et.etale,
        rad.log_radius,
        rad.achieving_index,
        bound,
        respected,
        f.trunc,
        et.failing_index,
        trail,
    )
