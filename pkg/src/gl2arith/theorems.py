"""Degree-by-degree checks of the two comparison theorems.

Graded pieces are handled in the coordinates ``(q_d!/d!) x^k D^d`` in which
the degree-d global symbols form the lattice ``Z^(2d+1)``.  ``gr xi`` sends a
level-m basis vector to a multiple of a single coordinate vector, so its
image in degree d is a diagonal lattice with exponents ``e_k(d)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .arith import (
    INF,
    LevelParams,
    ParameterError,
    dp_coeff,
    q_binomial_ratio,
    q_factorial,
    vp,
    vp_factorial,
)
from .gl2 import Index, PBWElement, casimir, indices_up_to, pbw_multiply
from .lattice import local_contains, local_echelon, local_rank, local_smith_valuations
from .models import (
    IdealSpec,
    enumerate_charts,
    global_section_lattice,
    operator_extends,
    sandwich_c,
)
from .weyl import DiffOperator, GradedSymbol, Poly, chart_swap, compose, dp_normal_form, symbol_of
from .xi import xi, xi_basis_element, xi_kostant


def n_prime(n: int, p: int) -> int:
    """``floor(n (p-1)/(p+1))``."""
    return (n * (p - 1)) // (p + 1)


# ---------------------------------------------------------------------------
# graded generation

@dataclass
class GenerationStep:
    case: str
    d: int
    k: int
    q: int
    s: int
    q_prime: Optional[int]
    r: Optional[int]
    u: Fraction
    powers: Dict[str, int]
    residual: Tuple[int, int]
    residual_coeff: Fraction
    residual_unit: Fraction

    def factor_symbols(self, params: LevelParams) -> Dict[str, GradedSymbol]:
        pm = params.p ** params.m
        fac = Fraction(1, math.factorial(pm))
        return {
            "xD": GradedSymbol(pm, Poly.monomial(pm, fac)),
            "D": GradedSymbol(pm, Poly.monomial(0, fac)),
            "x2D": GradedSymbol(pm, Poly.monomial(2 * pm, fac)),
        }

    def recombine(self, params: LevelParams) -> GradedSymbol:
        fs = self.factor_symbols(params)
        dr, kr = self.residual
        out = GradedSymbol(0, Poly.const(self.u))
        for name, e in self.powers.items():
            if e:
                out = out * fs[name] ** e
        return out * GradedSymbol(dr, Poly.monomial(kr, self.residual_coeff))


def target_symbol(d: int, k: int, params: LevelParams) -> GradedSymbol:
    return GradedSymbol(d, Poly.monomial(k, dp_coeff(d, params).value))


def graded_generation(d: int, k: int, params: LevelParams) -> GenerationStep:
    """Factor ``(q_d!/d!) x^k D^d`` through generators of degree < 2 p^m."""
    if d < 0 or not 0 <= k <= 2 * d:
        raise ParameterError("need 0 <= k <= 2d")
    p, m = params.p, params.m
    pm = p ** m
    q, s = divmod(d, pm)
    target = dp_coeff(d, params).value
    if d < 2 * pm:
        step = GenerationStep("generator", d, k, q, s, None, None, Fraction(1),
                              {"xD": 0, "D": 0, "x2D": 0}, (d, k), target, Fraction(1))
        _certify(step, params)
        return step
    u = target * math.factorial(s) * math.factorial(pm) ** q
    qp, r = divmod(k, pm)
    if k <= d:
        lead, tag = "xD", "k<=d"
        a, rk = qp, r
        small = r <= 2 * s
        qq = qp
    elif qp % 2 == 0:
        lead, tag = "x2D", "k>d,q'even"
        qq = qp // 2
        a, rk = qq, r
        small = r <= 2 * s
    else:
        lead, tag = "x2D", "k>d,q'odd"
        qq = (qp - 1) // 2
        a, rk = qq, pm + r
        small = pm + r <= 2 * s
    if small:
        b, dr = q - qq, s
        rcoeff = Fraction(1, math.factorial(s))
        tag += ",small"
    else:
        b, dr = q - qq - 1, pm + s
        rcoeff = Fraction(1, math.factorial(s) * math.factorial(pm))
        tag += ",large"
    if a < 0 or b < 0:
        raise AssertionError(f"negative exponent in generation step for d={d}, k={k}")
    powers = {"xD": 0, "D": b, "x2D": 0}
    powers[lead] = a
    runit = rcoeff / dp_coeff(dr, params).value
    step = GenerationStep(tag, d, k, q, s, qq, r, u, powers, (dr, rk), rcoeff, runit)
    _certify(step, params)
    return step


def _certify(step: GenerationStep, params: LevelParams) -> None:
    p, m = params.p, params.m
    dr, kr = step.residual
    if step.recombine(params) != target_symbol(step.d, step.k, params):
        raise AssertionError(f"recombination mismatch at d={step.d}, k={step.k}")
    if vp(step.u, p) != 0 or vp(step.residual_unit, p) != 0:
        raise AssertionError(f"non-unit certificate at d={step.d}, k={step.k}")
    if not (dr < 2 * p ** m and 0 <= kr <= 2 * dr):
        raise AssertionError(f"residual ({dr}, {kr}) is not a generator index")


# ---------------------------------------------------------------------------
# graded image of xi

@lru_cache(maxsize=None)
def _graded_image(d: int, p: int, m: int) -> Tuple[Tuple[int, Fraction, Index], ...]:
    """``(k, c, nu)`` with ``symbol(xi(level-m basis nu)) = c (q_d!/d!) x^k D^d``, |nu| = d."""
    params = LevelParams(p, m)
    scal = dp_coeff(d, params).value
    out = []
    for nu in indices_up_to(d):
        if sum(nu) != d:
            continue
        A = xi_basis_element(nu, "level_m", params)
        S = symbol_of(A)
        if S.d != d or len(S.coeff.items()) != 1:
            raise AssertionError(f"unexpected symbol for nu={nu}: {S}")
        (k, c), = S.coeff.items()
        out.append((k, c / scal, nu))
    return tuple(out)


def graded_image_exponents(d: int, params: LevelParams) -> Dict[int, Tuple[int, Index]]:
    """``k -> (e_k(d), nu)``: smallest valuation reached in coordinate k and a witness."""
    best: Dict[int, Tuple[int, Index]] = {}
    for k, c, nu in _graded_image(d, params.p, params.m):
        v = vp(c, params.p)
        if k not in best or v < best[k][0]:
            best[k] = (v, nu)
    return best


def graded_image_echelon(d: int, params: LevelParams):
    rows = []
    for k, c, nu in _graded_image(d, params.p, params.m):
        row = [Fraction(0)] * (2 * d + 1)
        row[k] = c
        rows.append(row)
    return local_echelon(rows, params.p)


# ---------------------------------------------------------------------------
# torsion bound

@dataclass
class TorsionBound:
    m: int
    N: int
    p: int = 0
    apriori: int = 0
    generators: Dict[Tuple[int, int], Tuple[int, Index]] = field(default_factory=dict)
    degree_bound: int = 0
    ok: bool = True
    failures: List[dict] = field(default_factory=list)


def apriori_torsion_exponent(params: LevelParams) -> int:
    """``vp((p^m - 1)! * (p^m)!)``."""
    pm = params.p ** params.m
    return vp_factorial(pm - 1, params.p) + vp_factorial(pm, params.p)


def _level_symbol(nu: Index, params: LevelParams) -> GradedSymbol:
    return symbol_of(xi_basis_element(nu, "level_m", params))


def constructed_preimage(d: int, k: int, params: LevelParams, gens) -> Tuple[List[Index], Fraction]:
    """Level-m basis factors whose symbol product is ``c * (q_d!/d!) x^k D^d``; returns (factors, c)."""
    step = graded_generation(d, k, params)
    pm = params.p ** params.m
    names = {"xD": (0, 0, pm, 0), "D": (pm, 0, 0, 0), "x2D": (0, 0, 0, pm)}
    factors: List[Index] = []
    for name, e in step.powers.items():
        factors.extend([names[name]] * e)
    _, nu_res = gens[step.residual]
    factors.append(nu_res)
    sym = GradedSymbol(0, Poly.const(1))
    for nu in factors:
        sym = sym * _level_symbol(nu, params)
    tgt = target_symbol(d, k, params)
    if sym.d != d or len(sym.coeff.items()) != 1 or sym.coeff.degree != k:
        raise AssertionError(f"constructed preimage has wrong shape at d={d}, k={k}")
    return factors, sym.coeff.coeff(k) / tgt.coeff.coeff(k)


def torsion_bound(params: LevelParams, D: int) -> TorsionBound:
    """Constructive exponent N(m) for the graded map, checked on degrees <= D."""
    if D < 1:
        raise ParameterError("D must be >= 1")
    p, m = params.p, params.m
    pm = p ** m
    gens: Dict[Tuple[int, int], Tuple[int, Index]] = {}
    for dt in range(2 * pm):
        ex = graded_image_exponents(dt, params)
        for kt in range(2 * dt + 1):
            gens[(dt, kt)] = ex[kt]
    N = max(e for e, _ in gens.values())
    tb = TorsionBound(m=m, N=N, p=p, apriori=apriori_torsion_exponent(params), generators=gens,
                      degree_bound=D)
    if N > tb.apriori:
        tb.ok = False
        tb.failures.append({"reason": "N exceeds the a priori exponent", "N": N, "bound": tb.apriori})
    for d in range(D + 1):
        for k in range(2 * d + 1):
            factors, c = constructed_preimage(d, k, params, gens)
            if vp(c, p) > N:
                tb.ok = False
                tb.failures.append({"d": d, "k": k, "valuation": vp(c, p), "factors": factors})
    return tb


# ---------------------------------------------------------------------------
# Theorem 1, graded and filtered

def _comm_mul(A: Dict[Index, Fraction], B: Dict[Index, Fraction]) -> Dict[Index, Fraction]:
    out: Dict[Index, Fraction] = {}
    for a, x in A.items():
        for b, y in B.items():
            key = tuple(i + j for i, j in zip(a, b))
            out[key] = out.get(key, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _monomials(d: int) -> List[Index]:
    return [nu for nu in indices_up_to(d) if sum(nu) == d]


CENTER_SYMBOLS = {
    "h1+h2": {(0, 1, 0, 0): Fraction(1), (0, 0, 1, 0): Fraction(1)},
    # symbol of ef + fe + (h1-h2)^2/2
    "casimir": {(1, 0, 0, 1): Fraction(2), (0, 2, 0, 0): Fraction(1, 2),
                (0, 1, 1, 0): Fraction(-1), (0, 0, 2, 0): Fraction(1, 2)},
}


def _gr_xi_row(poly: Dict[Index, Fraction], d: int) -> List[Fraction]:
    row = [Fraction(0)] * (2 * d + 1)
    for nu, c in poly.items():
        k = nu[1] + nu[2] + 2 * nu[3]
        row[k] += c * (-1) ** (nu[1] + nu[3])
    return row


def graded_kernel_report(d: int) -> dict:
    """Rank of gr xi in degree d and comparison of its kernel with the central ideal."""
    monos = _monomials(d)
    rows = [_gr_xi_row({nu: Fraction(1)}, d) for nu in monos]
    rank = local_rank(rows)
    ideal = []
    for dd, name in ((1, "h1+h2"), (2, "casimir")):
        if d < dd:
            continue
        for nu in _monomials(d - dd):
            ideal.append(_comm_mul(CENTER_SYMBOLS[name], {nu: Fraction(1)}))
    ideal_in_kernel = all(not any(_gr_xi_row(g, d)) for g in ideal)
    col = {nu: i for i, nu in enumerate(monos)}
    ideal_rows = []
    for g in ideal:
        r = [Fraction(0)] * len(monos)
        for nu, c in g.items():
            r[col[nu]] = c
        ideal_rows.append(r)
    ideal_rank = local_rank(ideal_rows) if ideal_rows else 0
    return {"d": d, "rank": rank, "target_rank": 2 * d + 1, "dim": len(monos),
            "ideal_rank": ideal_rank, "ideal_in_kernel": ideal_in_kernel,
            "ok": rank == 2 * d + 1 and ideal_in_kernel and ideal_rank + rank == len(monos)}


def _operator_row(A: DiffOperator, d: int, params: Optional[LevelParams] = None) -> List[Fraction]:
    """x-chart coefficients of ``f_j`` (j <= d, deg <= 2d), optionally in level-m coordinates."""
    terms = dp_normal_form(A, params) if params is not None else A.terms
    row = []
    for j in range(d + 1):
        f = terms.get(j, Poly())
        if not f.is_zero() and (not f.is_polynomial() or f.degree > 2 * d):
            raise AssertionError("operator outside the ambient coordinate space")
        row.extend(f.coeff(i) for i in range(2 * d + 1))
    return row


def filtered_kernel_report(d: int) -> dict:
    """Rank of xi on U_{<=d} and comparison of the kernel with the central ideal."""
    idx = indices_up_to(d)
    rows = [_operator_row(xi(PBWElement.basis_element(nu)), d) for nu in idx]
    rank = local_rank(rows)
    z1 = PBWElement.generator("h1") + PBWElement.generator("h2")
    z2 = casimir()
    ideal = [pbw_multiply(z1, PBWElement.basis_element(nu)) for nu in indices_up_to(d - 1)] if d >= 1 else []
    if d >= 2:
        ideal += [pbw_multiply(z2, PBWElement.basis_element(nu)) for nu in indices_up_to(d - 2)]
    ideal_in_kernel = all(xi(g).is_zero() for g in ideal)
    col = {nu: i for i, nu in enumerate(idx)}
    ideal_rows = []
    for g in ideal:
        r = [Fraction(0)] * len(idx)
        for nu, c in g.to_plain().coeffs.items():
            r[col[nu]] = Fraction(c)
        ideal_rows.append(r)
    ideal_rank = local_rank(ideal_rows) if ideal_rows else 0
    return {"d": d, "rank": rank, "target_rank": (d + 1) ** 2, "dim": len(idx), "ideal_rank": ideal_rank,
            "ideal_in_kernel": ideal_in_kernel,
            "ok": rank == (d + 1) ** 2 and ideal_in_kernel and ideal_rank + rank == len(idx)}


def filtered_cokernel_exponent(d: int, params: LevelParams) -> int:
    """Exponent of the cokernel of ``U^(m)_{<=d} -> H^0(D^(m)_{<=d})``.

    Rows are the level-m coordinates of xi(level-m basis) on both charts; the
    global sections form a saturated sublattice, so the largest Smith
    valuation is the exponent.
    """
    rows = []
    for nu in indices_up_to(d):
        A = xi_basis_element(nu, "level_m", params)
        B = chart_swap(A)
        rows.append(_operator_row(A, d, params) + _operator_row(B, d, params))
    vals = local_smith_valuations(rows, params.p)
    if len(vals) != (d + 1) ** 2:
        raise AssertionError("unexpected rank")
    return max(vals) if vals else 0


def theorem1_graded_check(params: LevelParams, D: int, filtered: bool = False) -> dict:
    """Injectivity (modulo the central ideal) and p^N-cosurjectivity in each degree <= D."""
    if D < 1:
        raise ParameterError("D must be >= 1")
    tb = torsion_bound(params, D)
    records = []
    ok = tb.ok
    for d in range(D + 1):
        kern = graded_kernel_report(d)
        ech = graded_image_echelon(d, params)
        pN = Fraction(params.p) ** tb.N
        missing = []
        for k in range(2 * d + 1):
            v = [Fraction(0)] * (2 * d + 1)
            v[k] = pN
            if not local_contains(ech, v, params.p):
                missing.append(k)
        exps = graded_image_exponents(d, params)
        rec = {"d": d, "injective": kern["ok"], "rank": kern["rank"], "cokernel_ok": not missing,
               "cokernel_exponent": max(e for e, _ in exps.values()), "missing": missing}
        if filtered:
            fk = filtered_kernel_report(d)
            rec["filtered_injective"] = fk["ok"]
            rec["filtered_cokernel_exponent"] = filtered_cokernel_exponent(d, params)
            ok = ok and fk["ok"]
        ok = ok and kern["ok"] and not missing
        records.append(rec)
    return {"theorem": "theorem1", "p": params.p, "m": params.m, "D": D, "N": tb.N,
            "apriori": tb.apriori, "ok": ok, "records": records}


# ---------------------------------------------------------------------------
# Theorem 2

def calc_identity(nu: int, a: int, params: LevelParams, n: int) -> bool:
    """Expansion of ``(q_nu!/nu!) p^(n nu) x^nu D^nu`` around ``a`` as an operator identity."""
    p = params.p
    lhs = DiffOperator.monomial(nu, nu, dp_coeff(nu, params).value * p ** (n * nu))
    rhs = DiffOperator()
    xa = DiffOperator({0: Poly({0: -a, 1: 1})})
    for k in range(nu + 1):
        ratio = q_binomial_ratio(nu, k, params)
        if ratio.denominator != 1:
            return False
        left = (xa ** k) if k else DiffOperator.scalar(1)
        left = compose(left, DiffOperator.monomial(0, k, dp_coeff(k, params).value))
        right = DiffOperator.monomial(0, nu - k, dp_coeff(nu - k, params).value * p ** (n * (nu - k)))
        term = compose(left, right).scale(ratio * p ** (n * k) * Fraction(a) ** (nu - k))
        rhs = rhs + term
    return lhs == rhs


def factor_generators(D: int) -> List[Index]:
    out = []
    for slot in range(4):
        for k in range(1, D + 1):
            nu = [0, 0, 0, 0]
            nu[slot] = k
            out.append(tuple(nu))
    return out


def theorem2_left(params: LevelParams, D: int, full_basis: bool = True) -> dict:
    """Chart tests for xi of the level-(m,n) basis vectors of degree <= D."""
    n = params.n
    charts = enumerate_charts(params.p, n)
    todo = factor_generators(D)
    if full_basis:
        todo = todo + [nu for nu in indices_up_to(D) if sum(1 for v in nu if v) > 1]
    failures = []
    min_margin = INF
    for nu in todo:
        # level-(m,n) vector = p^(n|nu|) c_nu K_nu
        A = xi_basis_element(nu, "level_m", params)
        verdict = operator_extends(A, params, n, scale_vp=n * sum(nu), charts=charts)
        min_margin = min(min_margin, verdict.margin)
        if not verdict.ok:
            failures.append({"nu": nu, "chart": verdict.chart.to_json() if verdict.chart else None,
                             "order": verdict.j, "margin": verdict.margin})
    centers = sorted({c.transform(params.p).center for c in charts if c.kind != "interior"})
    calc_ok = all(calc_identity(v, a, params, n) for v in range(D + 1) for a in centers)
    ratios_ok = all(q_binomial_ratio(v, k, params).denominator == 1
                    for v in range(D + 1) for k in range(v + 1))
    return {"checked": len(todo), "failures": failures, "min_margin": min_margin,
            "calc_ok": calc_ok, "ratios_ok": ratios_ok,
            "ok": not failures and calc_ok and ratios_ok}


def inequality_sweep(n_max: int, d_max: int, primes=(2, 3, 5)) -> List[dict]:
    """Cases of ``n c(d) < d n'`` (empty when the inequality holds everywhere)."""
    bad = []
    for p in primes:
        for n in range(n_max + 1):
            for d in range(d_max + 1):
                if n * sandwich_c(d, p) < d * n_prime(n, p):
                    bad.append({"p": p, "n": n, "d": d})
    return bad


def theorem2_right(params: LevelParams, D: int, N: Optional[int] = None) -> dict:
    """``p^N L(n,d) inside p^(d n') Img_d`` for d <= D, plus ``n c(d) >= d n'``."""
    p, n = params.p, params.n
    npr = n_prime(n, p)
    if N is None:
        N = torsion_bound(params, max(D, 1)).N
    records = []
    ok = True
    for d in range(D + 1):
        ineq = n * sandwich_c(d, p) >= d * npr
        L = global_section_lattice(IdealSpec(n, d), params)
        ech = graded_image_echelon(d, params)
        scale = Fraction(p) ** (N - d * npr)
        inc = all(local_contains(ech, [Fraction(x) * scale for x in row], p) for row in L.hnf)
        records.append({"d": d, "n_prime": npr, "inequality": ineq, "containment": inc,
                        "e": L.optimal_exponent})
        ok = ok and ineq and inc
    return {"N": N, "n_prime": npr, "records": records, "ok": ok}


def theorem2_check(params: LevelParams, D: int, full_basis: bool = True) -> dict:
    if D < 1:
        raise ParameterError("D must be >= 1")
    left = theorem2_left(params, D, full_basis)
    right = theorem2_right(params, D)
    return {"theorem": "theorem2", "p": params.p, "n": params.n, "m": params.m, "D": D,
            "n_prime": n_prime(params.n, params.p), "left": left, "right": right,
            "ok": left["ok"] and right["ok"]}
