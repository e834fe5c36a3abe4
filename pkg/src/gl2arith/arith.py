"""Exact rational scalars with p-adic valuations and level-m factorials.

Scalars are :class:`fractions.Fraction` values; "p-adic integers" are
rationals whose denominator is prime to ``p``.  Nothing here ever rounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from sympy import isprime

PadicRational = Fraction
Scalar = Union[int, Fraction]

INF = math.inf


class ParameterError(ValueError):
    """Raised for invalid primes, levels or other out-of-range parameters."""


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise ParameterError(f"not a prime: {p!r}")
    return p


@dataclass(frozen=True)
class LevelParams:
    p: int
    m: int = 0
    n: int = 0

    def __post_init__(self):
        check_prime(self.p)
        if self.m < 0 or self.n < 0:
            raise ParameterError(f"level and depth must be >= 0, got m={self.m}, n={self.n}")

    def with_(self, **kw) -> "LevelParams":
        return LevelParams(**{"p": self.p, "m": self.m, "n": self.n, **kw})


def _vp_int(k: int, p: int) -> int:
    k = abs(k)
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def vp(x: Scalar, p: int) -> Union[int, float]:
    """p-adic valuation of an exact rational; ``inf`` for zero."""
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def is_p_integral(x: Scalar, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def q_floor(nu: int, params: LevelParams) -> int:
    """``floor(nu / p**m)``."""
    if nu < 0:
        raise ParameterError(f"nu must be >= 0, got {nu}")
    return nu // params.p ** params.m


@lru_cache(maxsize=None)
def _q_fact_table(p: int, m: int, upto: int) -> tuple:
    pm = p ** m
    out = [1]
    for nu in range(1, upto + 1):
        q = nu // pm
        out.append(out[-1] * q if nu % pm == 0 else out[-1])
    return tuple(out)


def q_factorial(nu: int, params: LevelParams) -> int:
    """``q_nu!`` with ``q_nu = floor(nu / p**m)``; memoized per ``(p, m)``."""
    if nu < 0:
        raise ParameterError(f"nu must be >= 0, got {nu}")
    # round the table size up so repeated calls share one table
    size = max(64, 1 << (nu.bit_length()))
    return _q_fact_table(params.p, params.m, size)[nu]


def vp_factorial(k: int, p: int) -> int:
    """Legendre's formula for ``vp(k!)``."""
    if k < 0:
        raise ParameterError(f"k must be >= 0, got {k}")
    total, pk = 0, p
    while pk <= k:
        total += k // pk
        pk *= p
    return total


def digit_sum(k: int, p: int) -> int:
    s = 0
    while k:
        k, r = divmod(k, p)
        s += r
    return s


class DPCoeff(NamedTuple):
    """``q_d!/d! == u / (s! * (p^m!)^q)`` with ``d = p^m q + s`` and ``u`` a unit."""
    value: Fraction
    q: int
    s: int
    u: Fraction


def dp_coeff(d: int, params: LevelParams) -> DPCoeff:
    if d < 0:
        raise ParameterError(f"d must be >= 0, got {d}")
    pm = params.p ** params.m
    q, s = divmod(d, pm)
    value = Fraction(q_factorial(d, params), math.factorial(d))
    u = value * math.factorial(s) * math.factorial(pm) ** q
    if vp(u, params.p) != 0:
        raise AssertionError(f"unit certificate failed for d={d}, {params}: u={u}")
    return DPCoeff(value, q, s, u)


def integrality_ratio(i: int, j: int, params: LevelParams) -> Fraction:
    """``binom(i+j, i) * (q_{i+j}! / (q_i! q_j!))**-1``; p-integral for all i, j."""
    if i < 0 or j < 0:
        raise ParameterError("i, j must be >= 0")
    qr = Fraction(q_factorial(i + j, params), q_factorial(i, params) * q_factorial(j, params))
    return math.comb(i + j, i) / qr


def q_binomial_ratio(nu: int, k: int, params: LevelParams) -> Fraction:
    """``q_nu! / (q_k! q_{nu-k}!)`` (an integer for 0 <= k <= nu)."""
    return Fraction(q_factorial(nu, params),
                    q_factorial(k, params) * q_factorial(nu - k, params))


@lru_cache(maxsize=None)
def stirling_first(nu: int, j: int) -> int:
    """Signed Stirling numbers: ``T(T-1)...(T-nu+1) = sum_j s(nu, j) T^j``."""
    if nu < 0 or j < 0:
        raise ParameterError("arguments must be >= 0")
    if j > nu:
        return 0
    if nu == 0:
        return 1
    if j == 0:
        return 0
    return stirling_first(nu - 1, j - 1) - (nu - 1) * stirling_first(nu - 1, j)


@lru_cache(maxsize=None)
def stirling_second(nu: int, j: int) -> int:
    """``T^nu = sum_j S(nu, j) T(T-1)...(T-j+1)``."""
    if j > nu or j < 0:
        return 0
    if nu == 0:
        return 1
    if j == 0:
        return 0
    return stirling_second(nu - 1, j - 1) + j * stirling_second(nu - 1, j)


def gbinom(x: Scalar, k: int) -> Fraction:
    """Generalized binomial coefficient ``x(x-1)...(x-k+1)/k!`` for rational ``x``."""
    if k < 0:
        return Fraction(0)
    num = Fraction(1)
    for i in range(k):
        num *= x - i
    return num / math.factorial(k)


def ibinom(x: int, k: int) -> int:
    """Integer binomial ``x choose k`` for any integer ``x`` (negative allowed)."""
    if k < 0:
        return 0
    if x >= 0:
        return math.comb(x, k)
    # (-t choose k) = (-1)^k (t+k-1 choose k)
    return (-1) ** k * math.comb(-x + k - 1, k)
