import math
import random
from fractions import Fraction

import pytest

from generators import random_system_matrix, random_unimodular
from oracles import binomial_series
from padic_rolle.diffsys import (
    DiffSystem,
    RadiusEstimate,
    gauge_transform,
    generic_radius,
    iterate_system,
    log_radius_sequence,
    mat_inverse,
    mat_mul,
    solution_at_point,
    trivial_estimate,
)
from padic_rolle.errors import PoleError
from padic_rolle.series import GaussPoint, PSeries, RatFunc
from padic_rolle.valuation import INF, PrimeContext

P2, P3 = PrimeContext(2), PrimeContext(3)


def rf(ctx, num, den=(1,)):
    return RatFunc(ctx, num, den)


def naive_iterates(G, N):
    """``(i+1) G_[i+1] = G_[i]' + G_[i] G`` on rational-function matrices."""
    out = [G]
    for i in range(1, N):
        prev = out[-1]
        prod = mat_mul(prev, G)
        out.append([[(prev[r][c].derivative() + prod[r][c]) / (i + 1) for c in range(len(G))] for r in range(len(G))])
    return out


def test_exp_system():
    est = generic_radius(DiffSystem(P2, [[1]]), N=16)
    assert est.certified_prefix_min_log == Fraction(15, 16)
    assert est.trivial_bound_log == 1


def test_square_root_iterates():
    sys_ = DiffSystem(P2, [[rf(P2, (1,), (0, 2))]])  # 1/(2T)
    its = iterate_system(sys_, 3)
    assert [its.iterate(i)[0][0] for i in (1, 2, 3)] == [
        rf(P2, (1,), (0, 2)),
        rf(P2, (Fraction(-1, 8),), (0, 0, 1)),
        rf(P2, (Fraction(1, 16),), (0, 0, 0, 1)),
    ]


def test_integer_recurrence_matches_naive():
    rng = random.Random(3)
    for ctx in (P2, P3):
        for n in (1, 2, 3):
            G = random_system_matrix(rng, ctx, n)
            its = iterate_system(DiffSystem(ctx, G), 6)
            for i, Gi in enumerate(naive_iterates(G, 6), start=1):
                assert its.iterate(i) == Gi


def test_solution_is_binomial_series():
    sys_ = DiffSystem(P2, [[rf(P2, (1,), (0, 2))]])
    Y = solution_at_point(sys_, 1, 10)
    assert list(Y[0][0].coeffs) == binomial_series(Fraction(1, 2), 10)


def test_solution_solves_system():
    rng = random.Random(5)
    for _ in range(10):
        G = random_system_matrix(rng, P3, 2)
        sys_ = DiffSystem(P3, G)
        x, N = Fraction(rng.randint(-3, 3)), 8
        Y = solution_at_point(sys_, x, N)
        Gx = [[g.taylor(x, N) for g in row] for row in G]
        for r in range(2):
            for c in range(2):
                lhs = Y[r][c].derivative()
                rhs = sum((Gx[r][k] * Y[k][c].truncate(N) for k in range(2)), PSeries(P3, [], N))
                assert lhs == rhs


def test_solution_at_pole():
    with pytest.raises(PoleError):
        solution_at_point(DiffSystem(P2, [[rf(P2, (1,), (0, 1))]]), 0, 3)


def test_log_radius_sequence_and_window():
    its = iterate_system(DiffSystem(P2, [[1]]), 8)
    seq = log_radius_sequence(its)
    # -ord(1/i!)/i for the exponential
    assert seq == [Fraction(i - bin(i).count("1"), i) for i in range(1, 9)]
    est = generic_radius(DiffSystem(P2, [[1]]), N=8, its=its)
    assert est.tail_window_log == max(seq[-2:])


def test_gauss_point_shift():
    # G = [1]: at s = 1 nothing changes; G = [T]: iterates grow with |T|
    a = generic_radius(DiffSystem(P2, [[1]]), GaussPoint(1), 8)
    assert a.certified_prefix_min_log == generic_radius(DiffSystem(P2, [[1]]), N=8).certified_prefix_min_log
    T = RatFunc.variable(P2)
    b = generic_radius(DiffSystem(P2, [[T]]), GaussPoint(-1), 8)
    assert b.trivial_bound_log == 2


def test_trivial_estimate_random():
    rng = random.Random(8)
    for _ in range(30):
        ctx = rng.choice([P2, P3])
        sys_ = DiffSystem(ctx, random_system_matrix(rng, ctx, rng.randint(1, 3)))
        bound = trivial_estimate(sys_)
        assert all(v <= bound for v in log_radius_sequence(iterate_system(sys_, 12)))


def _running_max(seq):
    out, m = [], Fraction(0)
    for v in seq:
        m = max(m, v)
        out.append(m)
    return out


def _unnormalized(its, N):
    return [Fraction(0) if v is INF else max(Fraction(0), -v) for v in its.norms_at()[:N]]


def test_gauge_identity():
    # G^[P]_[i] = sum_j P_[i-j] G_[j] P^-1 with P_[k] = P^(k)/k!
    rng = random.Random(21)
    for _ in range(8):
        G = random_system_matrix(rng, P3, 2)
        Pm = random_unimodular(rng, P3, 2)
        Pinv = mat_inverse(Pm)
        g = gauge_transform(DiffSystem(P3, G), Pm)
        N = 5
        A = iterate_system(DiffSystem(P3, G), N)
        B = iterate_system(g.system, N)
        derivs = [Pm]
        for _ in range(N):
            derivs.append([[x.derivative() for x in row] for row in derivs[-1]])
        for i in range(1, N + 1):
            acc = [[derivs[i][r][c] / math.factorial(i) for c in range(2)] for r in range(2)]
            for j in range(1, i + 1):
                term = mat_mul([[x / math.factorial(i - j) for x in row] for row in derivs[i - j]], A.iterate(j))
                acc = [[acc[r][c] + term[r][c] for c in range(2)] for r in range(2)]
            assert mat_mul(acc, Pinv) == B.iterate(i)


def test_gauge_preserves_running_max():
    rng = random.Random(22)
    for _ in range(40):
        ctx = rng.choice([P2, P3])
        n = rng.randint(1, 3)
        sys_ = DiffSystem(ctx, random_system_matrix(rng, ctx, n))
        g = gauge_transform(sys_, random_unimodular(rng, ctx, n))
        assert g.unimodular
        a = _unnormalized(iterate_system(sys_, 12), 12)
        b = _unnormalized(iterate_system(g.system, 12), 12)
        assert _running_max(a) == _running_max(b)
        assert generic_radius(sys_, N=12).certified_prefix_min_log == generic_radius(g.system, N=12).certified_prefix_min_log


def test_gauge_per_index_counterexample():
    # individual indices can move under a unimodular gauge; running maxima cannot
    T = RatFunc.variable(P2)
    zero, one = RatFunc.constant(P2, 0), RatFunc.constant(P2, 1)
    sys_ = DiffSystem(P2, [[zero, zero], [RatFunc.constant(P2, Fraction(1, 2)), zero]])
    g = gauge_transform(sys_, [[one, T], [zero, one]])
    assert g.unimodular
    a = _unnormalized(iterate_system(sys_, 4), 4)
    b = _unnormalized(iterate_system(g.system, 4), 4)
    assert a == [1, 0, 0, 0] and b == [1, 1, 0, 0]
    assert _running_max(a) == _running_max(b)


def test_gauge_by_tame_function():
    # P = [1/T] turns G = [1/T] into the trivial system; |1/T| = 1 on the Gauss point
    inv = RatFunc(P2, (1,), (0, 1))
    g = gauge_transform(DiffSystem(P2, [[inv]]), [[inv]])
    assert g.system == DiffSystem(P2, [[0]]) and g.unimodular


def test_non_unimodular_flag():
    g = gauge_transform(DiffSystem(P2, [[1]]), [[RatFunc.constant(P2, 2)]])
    assert not g.unimodular


def test_json_roundtrips():
    sys_ = DiffSystem(P3, [[rf(P3, (1, 2), (1, 3)), 0], [Fraction(1, 9), rf(P3, (0, 1))]])
    assert DiffSystem.from_json(sys_.to_json()) == sys_
    est = generic_radius(sys_, N=6)
    assert RadiusEstimate.from_json(est.to_json()) == est


def test_json_accepts_expressions():
    sys_ = DiffSystem.from_json({"prime": 2, "G": [["1/(2*T)"]]})
    assert sys_ == DiffSystem(P2, [[rf(P2, (1,), (0, 2))]])
