import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gl2arith.arith import (
    INF,
    LevelParams,
    ParameterError,
    digit_sum,
    dp_coeff,
    integrality_ratio,
    q_binomial_ratio,
    q_factorial,
    q_floor,
    stirling_first,
    stirling_second,
    vp,
    vp_factorial,
)

PRIMES = [2, 3, 5, 7, 11, 13]

nonzero = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


def test_vp_examples():
    assert vp(0, 3) == INF
    assert vp(Fraction(1, 15), 2) == 0
    assert vp(Fraction(9, 2), 3) == 2
    assert vp(Fraction(9, 2), 2) == -1


def test_vp_rejects_composite():
    with pytest.raises(ParameterError):
        vp(4, 4)
    with pytest.raises(ParameterError):
        LevelParams(p=1)
    with pytest.raises(ParameterError):
        LevelParams(p=3, m=-1)


def test_q_floor_examples():
    assert q_floor(7, LevelParams(2, m=1)) == 3
    assert q_floor(5, LevelParams(3, m=0)) == 5
    assert q_floor(0, LevelParams(5, m=2)) == 0


def test_vp_factorial_examples():
    assert vp_factorial(4, 2) == 3
    assert vp_factorial(0, 5) == 0
    assert vp_factorial(10, 3) == 4


def test_dp_coeff_examples():
    c = dp_coeff(5, LevelParams(2, m=1))
    assert c.value == Fraction(1, 60)
    assert (c.q, c.s, c.u) == (2, 1, Fraction(1, 15))
    assert vp(c.u, 2) == 0
    assert dp_coeff(0, LevelParams(7, m=2)).value == 1
    assert dp_coeff(3, LevelParams(3, m=0)).value == 1


def test_integrality_ratio_examples():
    P = LevelParams(2, m=1)
    assert integrality_ratio(1, 1, P) == 2
    assert integrality_ratio(2, 2, P) == 3
    for k in range(10):
        assert integrality_ratio(0, k, LevelParams(3, m=2)) == 1


def test_stirling_examples():
    # signed convention: T(T-1)(T-2) = T^3 - 3T^2 + 2T
    assert stirling_first(3, 1) == 2
    assert stirling_first(4, 2) == 11
    assert stirling_first(3, 2) == -3
    assert all(stirling_first(n, n) == 1 for n in range(12))
    assert stirling_first(2, 5) == 0


def test_stirling_inverse_pair():
    for n in range(10):
        for k in range(n + 1):
            s = sum(stirling_second(n, j) * stirling_first(j, k) for j in range(n + 1))
            assert s == (1 if n == k else 0)


@given(nonzero, nonzero, st.sampled_from(PRIMES))
def test_vp_is_a_valuation(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    if x + y != 0:
        assert vp(x + y, p) >= min(vp(x, p), vp(y, p))
        if vp(x, p) != vp(y, p):
            assert vp(x + y, p) == min(vp(x, p), vp(y, p))


def test_legendre_matches_brute_force():
    for p in (2, 3, 5):
        fact = 1
        for k in range(0, 201):
            if k:
                fact *= k
            assert vp_factorial(k, p) == vp(fact, p)


@given(st.integers(0, 10**4), st.sampled_from([2, 3, 5]))
def test_legendre_digit_sum(k, p):
    assert vp_factorial(k, p) * (p - 1) == k - digit_sum(k, p)


def test_dp_unit_certificate_grid():
    for p in (2, 3, 5):
        for m in range(4):
            P = LevelParams(p, m=m)
            for d in range(501):
                c = dp_coeff(d, P)
                assert vp(c.u, p) == 0
                assert c.value == Fraction(q_factorial(d, P), math.factorial(d))


def test_integrality_ratio_grid():
    for p in (2, 3, 5):
        for m in range(4):
            P = LevelParams(p, m=m)
            for s in range(201):
                for i in range(s + 1):
                    assert vp(integrality_ratio(i, s - i, P), p) >= 0


@settings(max_examples=300)
@given(st.integers(1, 10**4), st.sampled_from([2, 3, 5]), st.integers(0, 3))
def test_q_factorial_asymptotic(nu, p, m):
    P = LevelParams(p, m=m)
    v = vp_factorial(q_floor(nu, P), p)
    assert abs(v - nu / ((p - 1) * p ** m)) <= math.log(nu + 1, p) + 2


@given(st.integers(0, 300), st.sampled_from([2, 3, 5]), st.integers(0, 3), st.data())
def test_q_binomial_ratio_integral(nu, p, m, data):
    k = data.draw(st.integers(0, nu))
    r = q_binomial_ratio(nu, k, LevelParams(p, m=m))
    assert r.denominator == 1
