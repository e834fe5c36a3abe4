"""The enveloping algebra of gl2 and its level-m integral forms.

Monomials are indexed by ``nu = (nu1, nu2, nu3, nu4)`` meaning
``e^nu1 h1^nu2 h2^nu3 f^nu4``.  Internally a product is kept as a map
``(a, d) -> poly(h1, h2)`` standing for ``e^a * poly * f^d``; the only
straightening rules needed are

    f e^a   = e^a f - e^(a-1) (a H + a(a-1)),        H = h1 - h2
    g e^i   = e^i g(h1 + i, h2 - i)
    f^k g   = g(h1 + k, h2 - k) f^k

The Kostant basis is ``K_nu = e^(nu1)/nu1! (h1 choose nu2)(h2 choose nu3) f^(nu4)/nu4!``;
the level-m basis is ``c_nu K_nu`` with ``c_nu = prod q_{nu_i}!`` and the
level-(m,n) basis is ``p^(n|nu|) c_nu K_nu``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from .arith import (
    INF,
    LevelParams,
    ParameterError,
    Scalar,
    ibinom,
    q_factorial,
    stirling_first,
    stirling_second,
    vp,
    vp_factorial,
)

Index = Tuple[int, int, int, int]
HPoly = Dict[Tuple[int, int], Fraction]

BASES = ("plain", "kostant", "level_m", "level_mn")

GENERATORS = {
    "e": (1, 0, 0, 0),
    "h1": (0, 1, 0, 0),
    "h2": (0, 0, 1, 0),
    "f": (0, 0, 0, 1),
}

# [X, Y] for the four generators, as plain index -> coefficient
COMMUTATORS = {
    ("h1", "e"): {(1, 0, 0, 0): 1},
    ("h2", "e"): {(1, 0, 0, 0): -1},
    ("h1", "f"): {(0, 0, 0, 1): -1},
    ("h2", "f"): {(0, 0, 0, 1): 1},
    ("e", "f"): {(0, 1, 0, 0): 1, (0, 0, 1, 0): -1},
    ("h1", "h2"): {},
}


# ---------------------------------------------------------------------------
# polynomials in h1, h2

def _hp_add(acc: HPoly, other: HPoly, scale: Scalar = 1) -> None:
    for k, v in other.items():
        s = acc.get(k, 0) + v * scale
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def _hp_mul(A: HPoly, B: HPoly) -> HPoly:
    out: HPoly = {}
    for (i, j), u in A.items():
        for (k, l), v in B.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + u * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _shift_table(deg: int, s: int) -> Tuple[int, ...]:
    # (h + s)^deg = sum_i C(deg, i) s^(deg-i) h^i
    return tuple(math.comb(deg, i) * s ** (deg - i) for i in range(deg + 1))


def _hp_shift(A: HPoly, s: int) -> HPoly:
    """``A(h1 + s, h2 - s)``."""
    if s == 0:
        return dict(A)
    out: HPoly = {}
    for (i, j), v in A.items():
        ci = _shift_table(i, s)
        cj = _shift_table(j, -s)
        for a, x in enumerate(ci):
            if not x:
                continue
            for b, y in enumerate(cj):
                if y:
                    out[(a, b)] = out.get((a, b), 0) + v * x * y
    return {k: v for k, v in out.items() if v}


def _hp_eval(A: HPoly, s: int, t: int) -> Fraction:
    return sum((v * s ** i * t ** j for (i, j), v in A.items()), Fraction(0))


# ---------------------------------------------------------------------------
# normal forms e^a * g * f^d

NF = Dict[Tuple[int, int], HPoly]


def _nf_add_term(acc: NF, a: int, d: int, g: HPoly, scale: Scalar = 1) -> None:
    slot = acc.setdefault((a, d), {})
    _hp_add(slot, g, scale)
    if not slot:
        del acc[(a, d)]


def _f_times(X: NF) -> NF:
    out: NF = {}
    for (a, d), g in X.items():
        _nf_add_term(out, a, d + 1, _hp_shift(g, 1))
        if a:
            # - e^(a-1) (a h1 - a h2 + a(a-1)) g f^d
            lin = {(1, 0): Fraction(a), (0, 1): Fraction(-a)}
            if a > 1:
                lin[(0, 0)] = Fraction(a * (a - 1))
            _nf_add_term(out, a - 1, d, _hp_mul(lin, g), -1)
    return out


@lru_cache(maxsize=None)
def _f_pow_e_pow(d: int, a: int) -> Tuple[Tuple[int, HPoly], ...]:
    """``f^d e^a`` as terms ``(k, P_k)`` meaning ``e^(a-k) P_k f^(d-k)``."""
    if d == 0:
        return ((0, {(0, 0): Fraction(1)}),)
    prev = {(a - k, d - 1 - k): dict(P) for k, P in _f_pow_e_pow(d - 1, a)}
    cur = _f_times(prev)
    return tuple(sorted(((a - aa, P) for (aa, dd), P in cur.items()), key=lambda t: t[0]))


def _nf_mul(X: NF, Y: NF) -> NF:
    out: NF = {}
    for (a, d), g in X.items():
        for (a2, d2), g2 in Y.items():
            for k, P in _f_pow_e_pow(d, a2):
                i = a2 - k
                mid = _hp_mul(_hp_mul(_hp_shift(g, i), P), _hp_shift(g2, d - k))
                if mid:
                    _nf_add_term(out, a + i, d - k + d2, mid)
    return out


def _nf_from_plain(coeffs: Mapping[Index, Fraction]) -> NF:
    out: NF = {}
    for (a, b, c, d), v in coeffs.items():
        _nf_add_term(out, a, d, {(b, c): Fraction(v)})
    return out


def _nf_to_plain(X: NF) -> Dict[Index, Fraction]:
    return {(a, b, c, d): v for (a, d), g in X.items() for (b, c), v in g.items() if v}


# ---------------------------------------------------------------------------
# elements

def _c_nu(nu: Index, params: LevelParams) -> int:
    out = 1
    for x in nu:
        out *= q_factorial(x, params)
    return out


def _basis_scale(nu: Index, basis: str, params: Optional[LevelParams]) -> Fraction:
    """Factor ``s`` with (basis element nu) = s * K_nu."""
    if basis == "kostant":
        return Fraction(1)
    if params is None:
        raise ParameterError(f"basis {basis!r} needs LevelParams")
    s = Fraction(_c_nu(nu, params))
    if basis == "level_mn":
        s *= Fraction(params.p) ** (params.n * sum(nu))
    return s


class PBWElement:
    """Finitely supported map ``nu -> coefficient`` in one of the bases in BASES."""

    __slots__ = ("coeffs", "basis", "params")

    def __init__(self, coeffs: Mapping[Index, Scalar] = None, basis: str = "plain",
                 params: Optional[LevelParams] = None):
        if basis not in BASES:
            raise ParameterError(f"unknown basis {basis!r}")
        if basis in ("level_m", "level_mn") and params is None:
            raise ParameterError(f"basis {basis!r} needs LevelParams")
        c = {}
        for k, v in (coeffs or {}).items():
            k = tuple(int(x) for x in k)
            if len(k) != 4 or min(k) < 0:
                raise ParameterError(f"bad multi-index {k}")
            if v:
                c[k] = Fraction(v)
        self.coeffs: Dict[Index, Fraction] = c
        self.basis = basis
        self.params = params

    @classmethod
    def generator(cls, name: str) -> "PBWElement":
        return cls({GENERATORS[name]: 1})

    @classmethod
    def one(cls) -> "PBWElement":
        return cls({(0, 0, 0, 0): 1})

    @classmethod
    def basis_element(cls, nu: Index, basis: str = "plain",
                      params: Optional[LevelParams] = None) -> "PBWElement":
        return cls({tuple(nu): 1}, basis, params)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.coeffs), default=-1)

    def is_zero(self) -> bool:
        return not self.coeffs

    # -- basis changes --
    def to_plain(self) -> "PBWElement":
        if self.basis == "plain":
            return self
        out: Dict[Index, Fraction] = {}
        for nu, v in self.coeffs.items():
            v = v * _basis_scale(nu, self.basis, self.params)
            for mono, w in _kostant_to_plain(nu):
                out[mono] = out.get(mono, 0) + v * w
        return PBWElement(out)

    def to_basis(self, basis: str, params: Optional[LevelParams] = None) -> "PBWElement":
        params = params or self.params
        plain = self.to_plain()
        if basis == "plain":
            return plain
        kos: Dict[Index, Fraction] = {}
        for mono, v in plain.coeffs.items():
            for nu, w in _plain_to_kostant(mono):
                kos[nu] = kos.get(nu, 0) + v * w
        out = {nu: v / _basis_scale(nu, basis, params) for nu, v in kos.items()}
        return PBWElement(out, basis, params if basis != "kostant" else None)

    # -- arithmetic (always through the plain basis) --
    def _same(self, other: "PBWElement") -> "PBWElement":
        if other.basis == self.basis and other.params == self.params:
            return other
        return other.to_basis(self.basis, self.params)

    def __add__(self, other):
        if not isinstance(other, PBWElement):
            other = PBWElement.one().to_basis(self.basis, self.params).scale(other)
        other = self._same(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return PBWElement(c, self.basis, self.params)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PBWElement) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "PBWElement":
        return PBWElement({k: v * c for k, v in self.coeffs.items()}, self.basis, self.params)

    def __mul__(self, other):
        if not isinstance(other, PBWElement):
            return self.scale(other)
        prod_ = pbw_multiply(self.to_plain(), other.to_plain())
        return prod_.to_basis(self.basis, self.params) if self.basis != "plain" else prod_

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = PBWElement.one()
        for _ in range(e):
            out = pbw_multiply(out, self.to_plain())
        return out

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        if self.basis == other.basis and self.params == other.params:
            return self.coeffs == other.coeffs
        return self.to_plain().coeffs == other.to_plain().coeffs

    def __hash__(self):
        return hash(frozenset(self.to_plain().coeffs.items()))

    def min_valuation(self, p: int):
        return min((vp(v, p) for v in self.coeffs.values()), default=INF)

    def __repr__(self):
        terms = ", ".join(f"{k}: {v}" for k, v in sorted(self.coeffs.items()))
        return f"PBWElement({{{terms}}}, basis={self.basis!r})"


@lru_cache(maxsize=None)
def _kostant_to_plain(nu: Index) -> Tuple[Tuple[Index, Fraction], ...]:
    a, b, c, d = nu
    denom = math.factorial(a) * math.factorial(b) * math.factorial(c) * math.factorial(d)
    out = []
    for i in range(b + 1):
        si = stirling_first(b, i)
        if not si:
            continue
        for j in range(c + 1):
            sj = stirling_first(c, j)
            if sj:
                out.append(((a, i, j, d), Fraction(si * sj, denom)))
    return tuple(out)


@lru_cache(maxsize=None)
def _plain_to_kostant(mono: Index) -> Tuple[Tuple[Index, Fraction], ...]:
    a, b, c, d = mono
    fa = math.factorial(a) * math.factorial(d)
    out = []
    for i in range(b + 1):
        si = stirling_second(b, i) * math.factorial(i)
        if not si:
            continue
        for j in range(c + 1):
            sj = stirling_second(c, j) * math.factorial(j)
            if sj:
                out.append(((a, i, j, d), Fraction(fa * si * sj)))
    return tuple(out)


def pbw_multiply(A: PBWElement, B: PBWElement) -> PBWElement:
    """Product of two plain-basis elements, straightened into e-h1-h2-f order."""
    if A.basis != "plain" or B.basis != "plain":
        raise ParameterError("pbw_multiply expects plain-basis operands")
    return PBWElement(_nf_to_plain(_nf_mul(_nf_from_plain(A.coeffs), _nf_from_plain(B.coeffs))))


def bracket(A: PBWElement, B: PBWElement) -> PBWElement:
    return pbw_multiply(A, B) - pbw_multiply(B, A)


def to_level_m_basis(A: PBWElement, params: LevelParams) -> PBWElement:
    return A.to_basis("level_m", params)


def from_level_m_basis(A: PBWElement) -> PBWElement:
    if A.basis != "level_m":
        raise ParameterError("element is not in the level-m basis")
    return A.to_plain()


def to_level_mn_basis(A: PBWElement, params: LevelParams) -> PBWElement:
    return A.to_basis("level_mn", params)


def level_m_basis_element(nu: Index, params: LevelParams) -> PBWElement:
    """``c_nu K_nu`` as a plain-basis element."""
    return PBWElement.basis_element(nu, "level_m", params).to_plain()


def level_mn_basis_element(nu: Index, params: LevelParams) -> PBWElement:
    return PBWElement.basis_element(nu, "level_mn", params).to_plain()


def indices_up_to(D: int) -> List[Index]:
    """All ``nu`` with ``|nu| <= D`` in lexicographic order."""
    return [nu for nu in product(range(D + 1), repeat=4) if sum(nu) <= D]


# ---------------------------------------------------------------------------
# Kostant structure constants

@lru_cache(maxsize=None)
def _q_values(d: int, a: int, k: int) -> Tuple[Fraction, ...]:
    """Coefficients of ``Q(H)`` in ``f^(d) e^(a) = sum_k e^(a-k) Q_k(H) f^(d-k)``.

    ``Q_k`` only depends on ``H = h1 - h2``; it is returned as a univariate
    coefficient tuple in ``H``.
    """
    P = dict(_f_pow_e_pow(d, a))[k]
    scale = Fraction(math.factorial(a - k) * math.factorial(d - k),
                     math.factorial(a) * math.factorial(d))
    deg = max((i + j for i, j in P), default=0)
    # P(h1, h2) = Q(h1 - h2); read Q off the h2 = 0 slice
    uni = [Fraction(0)] * (deg + 1)
    for (i, j), v in P.items():
        if j == 0:
            uni[i] += v * scale
    return tuple(uni)


def _horner(coeffs: Tuple[Fraction, ...], x: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _binomial_expansion_2d(values: List[List[int]]) -> Dict[Tuple[int, int], int]:
    """Coefficients in the basis (h1 choose i)(h2 choose j) from values on a grid."""
    rows = [list(r) for r in values]
    for r in rows:
        n = len(r)
        for lvl in range(1, n):
            for t in range(n - 1, lvl - 1, -1):
                r[t] -= r[t - 1]
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        n = len(rows)
        for lvl in range(1, n):
            for s in range(n - 1, lvl - 1, -1):
                rows[s][col] -= rows[s - 1][col]
    return {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}


@lru_cache(maxsize=200000)
def _core(nu234: Tuple[int, int, int], mu123: Tuple[int, int, int], k: int) -> Tuple[Tuple[int, int, int], ...]:
    """Middle factor of ``K_nu K_mu`` for the k-th straightening term.

    Returns triples ``(beta, gamma, r)``; the full structure constant is
    ``r * C(nu1+mu1-k, nu1) * C(nu4-k+mu4, mu4)`` at
    ``lambda = (nu1+mu1-k, beta, gamma, nu4-k+mu4)``.
    """
    n2, n3, n4 = nu234
    m1, m2, m3 = mu123
    i, j = m1 - k, n4 - k
    Q = _q_values(n4, m1, k)
    qdeg = len(Q) - 1
    D1 = n2 + m2 + qdeg
    D2 = n3 + m3 + qdeg
    grid = []
    for s in range(D1 + 1):
        row = []
        for t in range(D2 + 1):
            q = _horner(Q, s - t)
            if q.denominator != 1:
                raise AssertionError(f"Kostant straightening not integral at {nu234}, {mu123}, {k}")
            row.append(ibinom(s + i, n2) * ibinom(t - i, n3) * q.numerator
                       * ibinom(s + j, m2) * ibinom(t - j, m3))
        grid.append(row)
    exp = _binomial_expansion_2d(grid)
    return tuple((b, g, r) for (b, g), r in sorted(exp.items()))


def kostant_product(nu: Index, mu: Index) -> Dict[Index, int]:
    """Structure constants ``K_nu K_mu = sum_lambda s_lambda K_lambda`` (integers)."""
    out: Dict[Index, int] = {}
    n1, n2, n3, n4 = nu
    m1, m2, m3, m4 = mu
    for k in range(min(n4, m1) + 1):
        l1, l4 = n1 + m1 - k, n4 - k + m4
        outer = math.comb(l1, n1) * math.comb(l4, m4)
        for b, g, r in _core((n2, n3, n4), (m1, m2, m3), k):
            out[(l1, b, g, l4)] = out.get((l1, b, g, l4), 0) + outer * r
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# closure of the level-m forms

class ClosureReport(dict):
    """``{p, m, D, pairs, min_valuation, ok, counterexample}``."""


def _w_table(p: int, m: int, upto: int) -> List[int]:
    pm = p ** m
    return [vp_factorial(x // pm, p) for x in range(upto + 1)]


def _vp_int(x: int, p: int) -> int:
    if x == 0:
        return INF
    v = 0
    x = abs(x)
    while x % p == 0:
        x //= p
        v += 1
    return v


def check_subalgebra_closure(D: int, params: LevelParams, method: str = "kostant") -> ClosureReport:
    """Certify ``vp >= 0`` for every product of two level-m basis elements of degree <= D.

    ``method="kostant"`` uses the integral structure constants of the Kostant
    basis; ``method="plain"`` multiplies in the plain PBW basis and converts
    back (slow, used as a cross-check on small D).
    """
    if D < 1:
        raise ParameterError("D must be >= 1")
    if method == "plain":
        return _closure_plain(D, params)
    if method != "kostant":
        raise ParameterError(f"unknown method {method!r}")
    return _closure_many(D, [params])[0]


def check_subalgebra_closure_grid(D: int, grid: List[LevelParams]) -> List[ClosureReport]:
    """Same as check_subalgebra_closure for several (p, m) sharing one pass."""
    return _closure_many(D, list(grid))


def _closure_many(D: int, grid: List[LevelParams]) -> List[ClosureReport]:
    W = [_w_table(P.p, P.m, 2 * D) for P in grid]
    best = [(INF, None) for _ in grid]
    triples = [t for t in product(range(D + 1), repeat=3) if sum(t) <= D]
    pairs = 0
    for nu234 in triples:
        for mu123 in triples:
            n2, n3, n4 = nu234
            m1, m2, m3 = mu123
            free_nu1 = D - sum(nu234)
            free_mu4 = D - sum(mu123)
            pairs += (free_nu1 + 1) * (free_mu4 + 1)
            for k in range(min(n4, m1) + 1):
                core = _core(nu234, mu123, k)
                for gi, P in enumerate(grid):
                    w, p = W[gi], P.p
                    # min over (beta, gamma) of vp(r) - w(beta) - w(gamma)
                    mk, arg = INF, None
                    for b, g, r in core:
                        val = _vp_int(r, p) - w[b] - w[g]
                        if val < mk:
                            mk, arg = val, (b, g)
                    if arg is None:
                        continue
                    base = w[n2] + w[n3] + w[n4] + w[m1] + w[m2] + w[m3] + mk
                    for n1 in range(free_nu1 + 1):
                        for m4 in range(free_mu4 + 1):
                            l1, l4 = n1 + m1 - k, n4 - k + m4
                            val = (base + w[n1] + w[m4] - w[l1] - w[l4]
                                   + _vp_int(math.comb(l1, n1), p)
                                   + _vp_int(math.comb(l4, m4), p))
                            if val < best[gi][0]:
                                best[gi] = (val, ((n1, n2, n3, n4), (m1, m2, m3, m4),
                                                  (l1, arg[0], arg[1], l4)))
    out = []
    for P, (val, wit) in zip(grid, best):
        rep = ClosureReport(p=P.p, m=P.m, D=D, pairs=pairs, min_valuation=val, ok=val >= 0,
                            counterexample=None)
        if val < 0:
            rep["counterexample"] = {"nu": wit[0], "mu": wit[1], "lambda": wit[2]}
        out.append(rep)
    return out


def _closure_plain(D: int, params: LevelParams) -> ClosureReport:
    idx = indices_up_to(D)
    elems = {nu: level_m_basis_element(nu, params) for nu in idx}
    best, wit = INF, None
    for nu in idx:
        for mu in idx:
            prod_ = pbw_multiply(elems[nu], elems[mu]).to_basis("level_m", params)
            for lam, v in prod_.coeffs.items():
                val = vp(v, params.p)
                if val < best:
                    best, wit = val, {"nu": nu, "mu": mu, "lambda": lam}
    return ClosureReport(p=params.p, m=params.m, D=D, pairs=len(idx) ** 2, min_valuation=best,
                         ok=best >= 0, counterexample=wit if best < 0 else None)


# ---------------------------------------------------------------------------
# c_{nu, j} and the caution remark

def cnj_coefficients(nu: int, params: LevelParams) -> List[Fraction]:
    """``[c_{nu,1}, ..., c_{nu,nu}]`` with ``p^(n nu)(T choose nu) = sum_j c_{nu,j} (p^n T)^j / j!``.

    Integrality is asserted when ``n >= 1`` (``n >= 2`` for ``p = 2``).
    """
    if nu < 0:
        raise ParameterError("nu must be >= 0")
    p, n = params.p, params.n
    out = [Fraction(stirling_first(nu, j) * math.factorial(j) * p ** (n * (nu - j)),
                    math.factorial(nu)) for j in range(1, nu + 1)]
    if cnj_hypothesis(params):
        for j, c in enumerate(out, 1):
            if vp(c, p) < 0:
                raise AssertionError(f"c_({nu},{j}) = {c} is not p-integral for {params}")
    return out


def cnj_hypothesis(params: LevelParams) -> bool:
    return params.n >= 1 and (params.p != 2 or params.n >= 2)


def binomial_of_element(X: PBWElement, nu: int) -> PBWElement:
    """``X(X-1)...(X-nu+1)/nu!`` in the plain basis."""
    X = X.to_plain()
    out = PBWElement.one()
    for i in range(nu):
        out = pbw_multiply(out, X - i)
    return out.scale(Fraction(1, math.factorial(nu)))


def caution_witness(params: LevelParams, nu: int = 2, which: str = "h1") -> Tuple[PBWElement, PBWElement]:
    """``((p^n h choose nu), p^(n nu) (h choose nu))``; these differ once n >= 1 and nu >= 2."""
    h = PBWElement.generator(which)
    pn = params.p ** params.n
    lhs = binomial_of_element(h.scale(pn), nu)
    rhs = binomial_of_element(h, nu).scale(pn ** nu)
    return lhs, rhs


# ---------------------------------------------------------------------------
# center

def casimir() -> PBWElement:
    """``ef + fe + (h1 - h2)^2 / 2``."""
    e, f = PBWElement.generator("e"), PBWElement.generator("f")
    H = PBWElement.generator("h1") - PBWElement.generator("h2")
    return pbw_multiply(e, f) + pbw_multiply(f, e) + pbw_multiply(H, H).scale(Fraction(1, 2))


def is_central(z: PBWElement) -> bool:
    return all(bracket(z, PBWElement.generator(g)).is_zero() for g in GENERATORS)


class CentralCharacter(dict):
    """``{"h1+h2": value, "casimir": value}``."""


def central_character(params: LevelParams) -> CentralCharacter:
    """Scalars that ``xi`` assigns to ``h1 + h2`` and to the Casimir."""
    from .xi import xi

    gens = {
        "h1+h2": PBWElement.generator("h1") + PBWElement.generator("h2"),
        "casimir": casimir(),
    }
    out = CentralCharacter()
    for name, z in gens.items():
        if not is_central(z):
            raise AssertionError(f"{name} is not central")
        img = xi(z, params)
        if img.order > 0 or any(not g.is_polynomial() or g.degree > 0 for g in img.terms.values()):
            raise AssertionError(f"xi({name}) is not a scalar: {img}")
        val = img.coeff(0).coeff(0)
        if vp(val, params.p) < 0:
            raise AssertionError(f"theta0({name}) = {val} is not p-integral")
        out[name] = val
    return out


def iter_level_basis(D: int, params: LevelParams, basis: str = "level_m") -> Iterator[Tuple[Index, PBWElement]]:
    for nu in indices_up_to(D):
        yield nu, PBWElement.basis_element(nu, basis, params).to_plain()
