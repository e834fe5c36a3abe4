"""The map from U(gl2) to differential operators on the x-chart.

    e -> D,   h1 -> -x D,   h2 -> x D,   f -> -x^2 D

An element is expanded in the Kostant basis and each basis vector is sent to
the ordered product of its four factor images, which are cached.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .arith import LevelParams
from .gl2 import Index, PBWElement, indices_up_to
from .weyl import DiffOperator, binomial_of_operator, compose, is_global_section_level_m

GENERATOR_IMAGES = {
    "e": DiffOperator.monomial(0, 1),
    "h1": DiffOperator.monomial(1, 1, -1),
    "h2": DiffOperator.monomial(1, 1),
    "f": DiffOperator.monomial(2, 1, -1),
}


@lru_cache(maxsize=None)
def _factor(slot: int, k: int) -> DiffOperator:
    """Image of the k-th divided power / binomial in slot 0..3."""
    if k == 0:
        return DiffOperator.scalar(1)
    if slot == 0:
        return DiffOperator.monomial(0, k, Fraction(1, math.factorial(k)))
    if slot == 1:
        return binomial_of_operator(GENERATOR_IMAGES["h1"], k)
    if slot == 2:
        # (x D choose k) = x^k D^k / k!
        return DiffOperator.monomial(k, k, Fraction(1, math.factorial(k)))
    return (GENERATOR_IMAGES["f"] ** k).scale(Fraction(1, math.factorial(k)))


@lru_cache(maxsize=None)
def xi_kostant(nu: Index) -> DiffOperator:
    """Image of the Kostant basis vector ``K_nu``."""
    out = _factor(0, nu[0])
    for slot in (1, 2, 3):
        if nu[slot]:
            out = compose(out, _factor(slot, nu[slot]))
    return out


def xi(A: PBWElement, params: LevelParams = None) -> DiffOperator:
    """``xi(A)`` for ``A`` in any supported basis."""
    K = A.to_basis("kostant")
    out = DiffOperator()
    for nu, c in K.coeffs.items():
        out = out + xi_kostant(nu).scale(c)
    return out


def xi_basis_element(nu: Index, basis: str, params: LevelParams) -> DiffOperator:
    return xi(PBWElement.basis_element(nu, basis, params))


def xi_level_m_integrality(D: int, params: LevelParams) -> dict:
    """Check that every level-m basis vector of degree <= D maps to a global level-m operator."""
    if D < 1:
        raise ValueError("D must be >= 1")
    failures: List[Index] = []
    idx = indices_up_to(D)
    for nu in idx:
        if not is_global_section_level_m(xi_basis_element(nu, "level_m", params), params):
            failures.append(nu)
    return {"p": params.p, "m": params.m, "D": D, "checked": len(idx),
            "ok": not failures, "failures": failures}


def graded_image_vector(nu: Index, params: LevelParams) -> Tuple[int, Fraction]:
    """Principal symbol of ``xi`` of the level-m basis vector ``nu``.

    Returned as ``(k, c)`` meaning ``c * (q_d!/d!) x^k D^d`` with ``d = |nu|``.
    """
    from .arith import q_factorial

    d = sum(nu)
    k = nu[1] + nu[2] + 2 * nu[3]
    c = Fraction((-1) ** (nu[1] + nu[3]) * math.factorial(d), q_factorial(d, params))
    for v in nu:
        c *= Fraction(q_factorial(v, params), math.factorial(v))
    return k, c


def graded_symbol_monomial(nu: Index) -> Tuple[int, int]:
    """gr xi of the plain monomial ``e^a h1^b h2^c f^d``: ``(k, sign)`` for ``sign x^k D^|nu|``."""
    return nu[1] + nu[2] + 2 * nu[3], (-1) ** (nu[1] + nu[3])


def xi_table(D: int) -> Dict[Index, DiffOperator]:
    return {nu: xi_kostant(nu) for nu in indices_up_to(D)}
