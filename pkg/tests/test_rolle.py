import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import ord_naive
from padic_rolle import poly as P
from padic_rolle.errors import CriticalPointError
from padic_rolle.newton import build_polygon
from padic_rolle.rolle import (
    RolleReport,
    etale_check,
    injectivity_contributions,
    open_immersion_log_radius,
    rolle_verify,
)
from padic_rolle.series import PSeries
from padic_rolle.valuation import PrimeContext

P2, P3, P5 = PrimeContext(2), PrimeContext(3), PrimeContext(5)


def cyclotomic_shift(p, trunc=None):
    f = list(P.sub(P.power((1, 1), p), (1,)))
    return PSeries(PrimeContext(p), f, trunc or len(f))


def test_etale_examples():
    assert etale_check(PSeries(P2, [0, 2, 1])).etale
    e = etale_check(PSeries(P2, [0, 4, 1]))
    assert not e.etale and e.failing_index == 2


def test_etale_all_orders_flag():
    assert etale_check(PSeries(P3, [0, 1, 5], 3), assume_integral_tail=True).all_orders
    assert not etale_check(PSeries(P3, [0, 3, 1], 3), assume_integral_tail=True).all_orders


def test_critical_center():
    with pytest.raises(CriticalPointError):
        rolle_verify(PSeries(P2, [0, 0, 1]))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_sharp_examples(p):
    r = rolle_verify(cyclotomic_shift(p))
    assert r.etale and r.injectivity_log_radius == Fraction(1, p - 1)
    assert r.achieving_index == p and r.bound_respected


def test_cube_at_three():
    r = rolle_verify(PSeries(P3, list(P.sub(P.power((1, 1), 3), (1,)))))
    assert r.injectivity_log_radius == Fraction(1, 2)


def test_trail_records_key_inequality():
    r = rolle_verify(cyclotomic_shift(5))
    assert [k.n for k in r.trail] == [2, 3, 4, 5]
    assert all(k.holds for k in r.trail)


def test_radius_clamped_at_zero():
    r = open_immersion_log_radius(PSeries(P3, [0, 1, 3, 9]))
    assert r.log_radius == 0 and r.achieving_index is None


def test_non_etale_reports_but_does_not_claim_bound():
    r = rolle_verify(PSeries(P2, [0, 8, 1]))
    assert not r.etale and r.injectivity_log_radius == 3
    assert r.bound_respected  # vacuous without etaleness


def _random_etale(rng, p, length):
    ctx = PrimeContext(p)
    v1 = rng.randint(0, 3)
    cs = [Fraction(rng.randint(-50, 50), rng.choice([1, 1, 7, 11])), Fraction(p**v1 * rng.choice([1, -1, 2, 5]))]
    for n in range(2, length):
        floor = max(0, v1 - ord_naive(n, p))
        cs.append(Fraction(rng.choice([0, 1, -1, 3, 4])) * p**(floor + rng.randint(0, 2)))
    cs[1] = cs[1] if ord_naive(cs[1], p) == v1 else Fraction(p**v1)
    return PSeries(ctx, cs, length)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_random_etale_series_respect_bound(p):
    rng = random.Random(100 + p)
    for _ in range(100):
        f = _random_etale(rng, p, rng.randint(3, 30))
        r = rolle_verify(f)
        assert r.etale
        assert r.injectivity_log_radius <= Fraction(1, p - 1)


def _max_root_log(f, ctx):
    radii = [r for r, _ in build_polygon(f, ctx).roots_by_log_radius()]
    return max(radii) if radii else None


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=8), st.sampled_from([2, 3, 5]))
def test_root_collision_oracle_at_center(cs, p):
    # f is injective on a disk about 0 iff (f - f(0))/T has no root there
    ctx = PrimeContext(p)
    cs[1] = cs[1] or 1
    f = P.to_poly(cs)
    if P.degree(f) < 2:
        return
    g = f[1:]
    v = open_immersion_log_radius(PSeries(ctx, f)).log_radius
    top = _max_root_log(g, ctx)
    assert v == max(Fraction(0), top)


@given(st.lists(st.integers(-30, 30), min_size=3, max_size=7), st.integers(1, 40), st.sampled_from([2, 3]))
def test_root_collision_oracle_off_center(cs, t, p):
    # any y != t0 with f(y) = f(t0) cannot have both t0 and y inside the radius
    ctx = PrimeContext(p)
    cs[1] = cs[1] or 1
    f = P.to_poly(cs)
    if P.degree(f) < 2:
        return
    t0 = Fraction(t * p)
    v = open_immersion_log_radius(PSeries(ctx, f)).log_radius
    g, rem = P.divmod_poly(P.sub(f, (P.evaluate(f, t0),)), (-t0, 1))
    assert not rem
    np = build_polygon(g, ctx)
    for r, _ in np.roots_by_log_radius():
        assert min(Fraction(ord_naive(t0, p)), r) <= v
    if np.zero_multiplicity:
        assert Fraction(ord_naive(t0, p)) <= v


def test_contributions():
    c = injectivity_contributions(PSeries(P2, [0, 2, 1, 0, 8]))
    assert c == {2: 1, 4: Fraction(-2, 3)}


def test_report_json_roundtrip():
    r = rolle_verify(cyclotomic_shift(3))
    assert RolleReport.from_json(r.to_json()) == r
