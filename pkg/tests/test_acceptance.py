"""Acceptance gate: ten exact criteria, each with a wall-clock budget.

Every criterion prints one ``PASS``/``FAIL`` line (collected in the pytest
terminal summary).  Run directly with ``python3 tests/test_acceptance.py``
for the same lines without pytest.
"""
import functools
import random
import sys
import time
import traceback
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from generators import random_system_matrix, random_unimodular  # noqa: E402
from oracles import hull_brute, ord_naive  # noqa: E402
from padic_rolle import poly as P  # noqa: E402
from padic_rolle.covering import (  # noqa: E402
    analyze_covering,
    section_radius_check,
    section_series,
    surjectivity_witness,
)
from padic_rolle.diffsys import (  # noqa: E402
    DiffSystem,
    gauge_transform,
    generic_radius,
    iterate_system,
    log_radius_sequence,
    trivial_estimate,
)
from padic_rolle.newton import build_polygon  # noqa: E402
from padic_rolle.rolle import etale_check, open_immersion_log_radius, rolle_verify  # noqa: E402
from padic_rolle.series import PSeries, RatFunc  # noqa: E402
from padic_rolle.valuation import INF, PrimeContext, key_inequality_check  # noqa: E402

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # pragma: no cover - script mode without conftest
    ACCEPTANCE_LINES = []


def criterion(number, title, budget):
    """Time the check, record one summary line and re-raise failures."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            detail = ""
            try:
                detail = fn() or ""
                elapsed = time.perf_counter() - t0
                assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
            except BaseException as exc:
                elapsed = time.perf_counter() - t0
                line = f"FAIL  AC{number:<2} {title} ({elapsed:.2f}s / {budget}s): {exc}"
                ACCEPTANCE_LINES.append(line)
                print(line)
                raise
            line = f"PASS  AC{number:<2} {title} ({elapsed:.2f}s / {budget}s){' ' + detail if detail else ''}"
            ACCEPTANCE_LINES.append(line)
            print(line)

        run.criterion = number
        return run

    return wrap


def shifted_power(ctx):
    T = RatFunc.variable(ctx)
    return (1 + T) ** ctx.p - 1


@criterion(1, "key inequality for 2 <= n <= 10^6, p in {2,3,5,7}", 10)
def test_ac1_key_inequality():
    for p in (2, 3, 5, 7):
        ctx = PrimeContext(p)
        bad = [n for n in range(2, 10**6 + 1) if not key_inequality_check(n, ctx).holds]
        assert not bad, f"p={p} fails at n={bad[:5]}"


@criterion(2, "Rolle sharpness for (1+T)^p - 1", 1)
def test_ac2_rolle_sharpness():
    for p in (2, 3, 5, 7, 11):
        ctx = PrimeContext(p)
        f = P.sub(P.power((1, 1), p), (1,))
        v = open_immersion_log_radius(PSeries(ctx, f)).log_radius
        assert v == Fraction(1, p - 1), f"p={p}: {v}"
        # oracle: the nonzero roots of ((1+T)^p - 1)/T all sit at log-radius 1/(p-1)
        np = build_polygon(f[1:], ctx)
        assert np.zero_multiplicity == 0
        assert {r for r, _ in np.roots_by_log_radius()} == {Fraction(1, p - 1)}


def _random_unit(rng, p):
    while True:
        a, b = rng.randint(-99, 99), rng.randint(1, 20)
        if a % p and b % p:
            return Fraction(a, b)


def random_etale_series(rng, ctx):
    """Random series with ``ord a_1 <= ord(n a_n)`` built in coefficient by coefficient."""
    p = ctx.p
    length = rng.randint(3, 40)
    v1 = rng.randint(-1, 3)
    cs = [_random_unit(rng, p) * Fraction(p) ** rng.randint(-2, 2), _random_unit(rng, p) * Fraction(p) ** v1]
    for n in range(2, length):
        if rng.random() < 0.3:
            cs.append(Fraction(0))
            continue
        floor = v1 - ord_naive(n, p)
        cs.append(_random_unit(rng, p) * Fraction(p) ** (floor + rng.choice([0, 0, 1, 2, 5])))
    return PSeries(ctx, cs, length)


@criterion(3, "Rolle property on 500 random etale series per p in {2,3,5}", 30)
def test_ac3_rolle_property():
    rng = random.Random(3)
    for p in (2, 3, 5):
        ctx = PrimeContext(p)
        for _ in range(500):
            f = random_etale_series(rng, ctx)
            assert etale_check(f).etale
            r = rolle_verify(f)
            assert r.injectivity_log_radius <= Fraction(1, p - 1), f"p={p}: {f}"


@criterion(4, "generic radius of exp at p=2", 5)
def test_ac4_exp_radius():
    ctx = PrimeContext(2)
    sys_ = DiffSystem(ctx, [[1]])
    its = iterate_system(sys_, 256)
    assert generic_radius(sys_, N=16, its=its).certified_prefix_min_log == Fraction(15, 16)
    previous = Fraction(0)
    for k in range(1, 9):
        N = 2**k
        v = generic_radius(sys_, N=N, its=its).certified_prefix_min_log
        assert v == Fraction(N - 1, N), f"N={N}: {v}"
        assert previous < v < ctx.rolle_bound
        previous = v


@criterion(5, "trivial estimate on 200 random pole-free systems, N = 20", 60)
def test_ac5_trivial_estimate():
    rng = random.Random(5)
    for _ in range(200):
        ctx = PrimeContext(rng.choice([2, 3, 5]))
        sys_ = DiffSystem(ctx, random_system_matrix(rng, ctx, rng.randint(1, 3)))
        bound = trivial_estimate(sys_)
        seq = log_radius_sequence(iterate_system(sys_, 20))
        assert all(v <= bound for v in seq), f"{sys_}: {seq} vs {bound}"


def _unnormalized(its, N):
    return [Fraction(0) if v is INF else max(Fraction(0), -v) for v in its.norms_at()[:N]]


@criterion(6, "gauge invariance of max(0, -v(G_[i])) per index, i <= 12", 60)
def test_ac6_gauge_invariance():
    rng = random.Random(6)
    mismatches = []
    for trial in range(100):
        ctx = PrimeContext(rng.choice([2, 3, 5]))
        n = rng.randint(1, 3)
        sys_ = DiffSystem(ctx, random_system_matrix(rng, ctx, n))
        g = gauge_transform(sys_, random_unimodular(rng, ctx, n))
        assert g.unimodular
        a = _unnormalized(iterate_system(sys_, 12), 12)
        b = _unnormalized(iterate_system(g.system, 12), 12)
        if a != b:
            mismatches.append(trial)
    assert not mismatches, f"{len(mismatches)}/100 systems differ at some index (trials {mismatches[:10]})"


@criterion(7, "inverse branch of (1+T)^p - 1 within 1/(p-1) + 1, n <= 256", 10)
def test_ac7_section_bound():
    details = []
    for p in (2, 3):
        ctx = PrimeContext(p)
        phi = shifted_power(ctx)
        s = section_series(phi, 0, 0, 257, target=RatFunc.variable(ctx))
        assert s.check()
        v = section_radius_check(s, analyze_covering(phi))
        bound = Fraction(1, p - 1) + 1
        assert v.bound_log == bound
        assert all(slope <= bound for _, slope in s.slopes())
        assert v.window_estimate is not None and bound - v.window_estimate <= Fraction(1, 16)
        details.append(f"p={p} window={v.window_estimate}")
    return "; ".join(details)


def _target_with_ord(rng, p, v):
    return _random_unit(rng, p) * Fraction(p) ** v


@criterion(8, "Faber map (T^(p+1) - p)/T is onto from the open disk", 5)
def test_ac8_faber():
    rng = random.Random(8)
    for p in (2, 3):
        ctx = PrimeContext(p)
        T = RatFunc.variable(ctx)
        phi = (T ** (p + 1) - p) / T
        report = analyze_covering(phi)
        assert all(r <= 0 for r, _ in report.critical_log_radii)
        targets = [_target_with_ord(rng, p, v) for v in (-2, -1, 0, 1, 2) for _ in range(10)]
        assert len(targets) == 50
        for a in targets:
            assert surjectivity_witness(phi, a).hit, f"p={p}, a={a}"


@criterion(9, "Newton polygon against brute-force hull on 1000 polynomials", 10)
def test_ac9_newton_oracle():
    rng = random.Random(9)
    for _ in range(1000):
        p = rng.choice([2, 3, 5, 7])
        ctx = PrimeContext(p)
        f = P.to_poly([rng.randint(-10**6, 10**6) for _ in range(rng.randint(1, 13))])
        if not f:
            continue
        np = build_polygon(f, ctx)
        pts = [(i, Fraction(ord_naive(c, p))) for i, c in enumerate(f) if c]
        assert list(np.vertices) == hull_brute(pts), f
        assert sum(c for _, c in np.roots_by_log_radius()) == P.degree(f) - np.zero_multiplicity


@criterion(10, "distance identity for (1+T)^p - 1", 5)
def test_ac10_distance_identity():
    rng = random.Random(10)
    for p in (2, 3):
        ctx = PrimeContext(p)
        phi = shifted_power(ctx)
        done = 0
        while done < 100:
            a1 = _random_unit(rng, p) * Fraction(p) ** rng.randint(1, 4)
            a2 = a1 + _random_unit(rng, p) * Fraction(p) ** rng.randint(1 // (p - 1) + 1, 6)
            d = ord_naive(a1 - a2, p)
            assert ord_naive(a2, p) >= 1 and d > Fraction(1, p - 1)
            assert ord_naive(phi(a1) - phi(a2), p) == 1 + d, (a1, a2)
            done += 1


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(
        ((k, v) for k, v in globals().items() if k.startswith("test_ac")), key=lambda kv: kv[1].criterion
    ):
        try:
            fn()
        except BaseException:
            failed += 1
            traceback.print_exc(limit=1, file=sys.stderr)
    sys.exit(1 if failed else 0)
