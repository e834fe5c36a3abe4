"""Blow-up models of P^1: charts, ideal conditions, and global-section lattices.

Chart addresses use digits ``a0 in R u {inf}`` and ``a_i in R`` with
``R = {0, ..., p-1}``; ``a0 = inf`` selects the y-chart family, whose centers
are ``a1 p + a2 p^2 + ...``.  A chart coordinate ``t`` is related to the
global one by ``x - center = p^scale * t`` (``y`` for the inf family).

Degree-d symbols ``f(x) D^d`` are stored as coefficient vectors of
``x^0 .. x^(2d)``.  The y-chart form of ``f`` is ``(-1)^d y^(2d) f(1/y)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import INF, LevelParams, ParameterError, dp_coeff, q_factorial, vp
from .lattice import (
    Matrix,
    congruence_sublattice,
    hnf,
    lattice_contains,
    lattice_includes,
    min_entry_valuation,
    scaled_identity,
)
from .weyl import DiffOperator, GradedSymbol, Poly, chart_swap, taylor_shift

KINDS = ("interior", "blow-up-chart", "residual-disc")
INFINITY = "inf"


@dataclass(frozen=True)
class ChartAddress:
    kind: str
    level: int
    address: Tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown chart kind {self.kind!r}")
        want = {"interior": 0, "blow-up-chart": self.level, "residual-disc": self.level + 1}[self.kind]
        if len(self.address) != want:
            raise ParameterError(f"address {self.address} has wrong length for {self.kind} at level {self.level}")

    @property
    def family(self) -> str:
        return "y" if self.address and self.address[0] == INFINITY else "x"

    def transform(self, p: int) -> "ChartTransform":
        if self.kind == "interior":
            raise ParameterError("the interior has no local coordinate")
        digits = list(self.address)
        if digits[0] == INFINITY:
            digits[0] = 0
        center = sum(a * p ** i for i, a in enumerate(digits))
        scale = self.level - 1 if self.kind == "blow-up-chart" else self.level
        return ChartTransform(center=center, scale=scale, chart=self.family, kind=self.kind)

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level, "address": list(self.address)}


@dataclass(frozen=True)
class ChartTransform:
    """``(x or y) - center = p^scale * t``; on blow-up charts ``t * z = p``."""

    center: int
    scale: int
    chart: str = "x"
    kind: str = "residual-disc"


def _digit_strings(p: int, length: int) -> Iterable[Tuple]:
    if length == 0:
        yield ()
        return
    first = list(range(p)) + [INFINITY]
    for a0 in first:
        for rest in product(range(p), repeat=length - 1):
            yield (a0,) + rest


def enumerate_charts(p: int, n: int) -> List[ChartAddress]:
    """Interior, blow-up charts of levels 1..n, and the residual discs of X_n."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    out = [ChartAddress("interior", 0, ())]
    for nu in range(1, n + 1):
        out.extend(ChartAddress("blow-up-chart", nu, a) for a in _digit_strings(p, nu))
    out.extend(ChartAddress("residual-disc", n, b) for b in _digit_strings(p, n + 1))
    return out


def chart_counts(p: int, n: int) -> dict:
    charts = enumerate_charts(p, n)
    blow = {nu: sum(1 for c in charts if c.kind == "blow-up-chart" and c.level == nu) for nu in range(1, n + 1)}
    return {"blow_up": blow, "residual": sum(1 for c in charts if c.kind == "residual-disc")}


def chart_tree(p: int, n: int) -> dict:
    """Intersection tree of the special fiber components.

    Vertices: the strict transform of the original fiber (``interior``) and
    one exceptional component per blow-up chart; an edge joins a level-nu
    component to the level-(nu+1) components over its p points.
    """
    nodes = [{"id": 0, "kind": "interior", "level": 0, "address": []}]
    ids = {(): 0}
    edges = []
    for nu in range(1, n + 1):
        for a in _digit_strings(p, nu):
            nid = len(nodes)
            nodes.append({"id": nid, "kind": "blow-up-chart", "level": nu, "address": list(a)})
            ids[a] = nid
            edges.append([ids[a[:-1]] if nu > 1 else 0, nid])
    degree = [0] * len(nodes)
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    return {"p": p, "n": n, "nodes": nodes, "edges": edges, "degrees": degree}


def is_tree(tree: dict) -> bool:
    V = len(tree["nodes"])
    if len(tree["edges"]) != V - 1:
        return False
    parent = list(range(V))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in tree["edges"]:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


# ---------------------------------------------------------------------------
# coordinate changes

def to_chart(S: GradedSymbol, T: ChartTransform, p: int) -> GradedSymbol:
    """Rewrite ``f D^d`` in the chart coordinate: ``f(c + p^s t) p^(-s d) D_t^d``."""
    if S.chart != T.chart:
        S = S.swap_chart()
    if not S.coeff.is_polynomial():
        raise ParameterError("symbol must be polynomial on its chart")
    scale = Fraction(p) ** T.scale
    g = S.coeff.substitute_affine(T.center, scale) * (scale ** (-S.d))
    return GradedSymbol(S.d, g, "t")


def operator_to_chart(A: DiffOperator, T: ChartTransform, p: int) -> DiffOperator:
    """Same substitution for a whole operator, ``D_x = p^(-s) D_t``."""
    if A.chart != T.chart:
        A = chart_swap(A)
    scale = Fraction(p) ** T.scale
    return DiffOperator({j: f.substitute_affine(T.center, scale) * (scale ** (-j))
                         for j, f in A.terms.items()}, "t")


# ---------------------------------------------------------------------------
# ideal membership

@dataclass(frozen=True)
class IdealSpec:
    n: int
    d: int
    chart: str = "x"

    def __post_init__(self):
        if self.n < 0 or self.d < 0:
            raise ParameterError("n and d must be >= 0")
        if self.chart not in ("x", "y"):
            raise ParameterError("chart must be 'x' or 'y'")


def ideal_membership(f: Poly, a: int, spec: IdealSpec, p: int) -> bool:
    """``f in (x - a, p^n)^d`` via its Taylor coefficients at ``a``."""
    if not f.is_polynomial() or not f.is_p_integral(p):
        raise ParameterError("f must have p-integral polynomial coefficients")
    c = taylor_shift(f, a) if not f.is_zero() else []
    for k in range(spec.d):
        ck = c[k] if k < len(c) else 0
        if vp(ck, p) < spec.n * (spec.d - k):
            return False
    return True


def in_ideal_sheaf(f: Poly, d: int, n: int, p: int) -> bool:
    """Membership of ``f D^d`` in the twisted ideal sheaf on both charts."""
    g = GradedSymbol(d, f).swap_chart().coeff
    spec = IdealSpec(n, d)
    return all(ideal_membership(f, a, spec, p) and ideal_membership(g, a, spec, p)
               for a in range(p ** n))


def generator_span_oracle(f: Poly, a: int, spec: IdealSpec, p: int) -> bool:
    """Independent membership test in ``(x - a, p^n)^d`` among polynomials of degree <= deg f.

    Solves ``f = sum_i g_i p^(n(d-i)) (x-a)^i`` with ``deg g_i <= deg f - i`` as
    a Z_(p)-linear system on the generator multiples ``x^l p^(n(d-i)) (x-a)^i``.
    """
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import hermite_normal_form

    deg = max(f.degree, 0) if not f.is_zero() else 0
    n, d = spec.n, spec.d
    cols = []
    for i in range(d + 1):
        gen = Poly({0: 1})
        for _ in range(i):
            gen = gen * Poly({0: -a, 1: 1})
        gen = gen * p ** (n * (d - i))
        for l in range(0, deg - i + 1):
            v = gen.shift_degree(l)
            cols.append([int(v.coeff(k)) for k in range(deg + 1)])
    # the ideal also contains every x^l (x-a)^i for i >= d
    for i in range(d + 1, deg + 1):
        gen = Poly({0: 1})
        for _ in range(i):
            gen = gen * Poly({0: -a, 1: 1})
        for l in range(0, deg - i + 1):
            v = gen.shift_degree(l)
            cols.append([int(v.coeff(k)) for k in range(deg + 1)])
    target = [f.coeff(k) for k in range(deg + 1)]
    if not cols:
        return all(t == 0 for t in target)
    H = hermite_normal_form(Matrix(cols).T)      # columns span the lattice
    rows = [list(H.col(j)) for j in range(H.shape[1])]
    # H is upper triangular in column form; solve from the bottom
    v = [Fraction(x) for x in target]
    pivots = []
    for r in rows:
        nz = [i for i, x in enumerate(r) if x]
        pivots.append(max(nz) if nz else None)
    order = sorted(range(len(rows)), key=lambda j: -(pivots[j] if pivots[j] is not None else -1))
    for j in order:
        piv = pivots[j]
        if piv is None or not v[piv]:
            continue
        q = v[piv] / int(rows[j][piv])
        if vp(q, p) < 0:
            return False
        v = [x - q * int(y) for x, y in zip(v, rows[j])]
    return not any(v)


# ---------------------------------------------------------------------------
# global-section lattices

def _taylor_weights(d: int, a: int, k: int) -> List[int]:
    """Row ``w`` with ``<w, f> = k-th Taylor coefficient of f at a`` (deg f <= 2d)."""
    return [math.comb(j, k) * a ** (j - k) if j >= k else 0 for j in range(2 * d + 1)]


def section_conditions(n: int, d: int, p: int, reps: Optional[Sequence[int]] = None):
    """Linear congruences ``<w, f> = 0 mod p^e`` cutting out L(n,d)."""
    reps = list(range(p ** n)) if reps is None else list(reps)
    N = 2 * d + 1
    for a in reps:
        for k in range(d):
            e = n * (d - k)
            w = _taylor_weights(d, a, k)
            yield w, e
            # y-chart: g_i = (-1)^d f_(2d-i); sign is irrelevant for the congruence
            yield [w[N - 1 - j] for j in range(N)], e


@dataclass
class SectionLattice:
    p: int
    n: int
    d: int
    m: int
    hnf: Matrix
    scalar: Fraction = Fraction(1)
    optimal_exponent: float = 0

    def contains(self, f: Sequence[int]) -> bool:
        return lattice_contains(self.hnf, f)

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "d": self.d, "m": self.m, "hnf": self.hnf,
                "scalar": str(self.scalar), "optimal_exponent": self.optimal_exponent}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@lru_cache(maxsize=None)
def _section_hnf(p: int, n: int, d: int, reps: Optional[Tuple[int, ...]]) -> Tuple[Tuple[int, ...], ...]:
    N = 2 * d + 1
    H = scaled_identity(N, 1)
    if n == 0 or d == 0:
        return tuple(map(tuple, H))
    for w, e in section_conditions(n, d, p, reps):
        H = congruence_sublattice(H, w, e, p)
    return tuple(map(tuple, H))


def global_section_lattice(spec: IdealSpec, params: LevelParams,
                           reps: Optional[Sequence[int]] = None) -> SectionLattice:
    """HNF of L(n,d): integer f (deg <= 2d) with ``f D^d`` in the ideal sheaf on both charts.

    The level-m lattice has the same integer coordinates relative to
    ``(q_d!/d!) x^k D^d``; that scalar is recorded separately.
    """
    p, n, d = params.p, spec.n, spec.d
    H = [list(r) for r in _section_hnf(p, n, d, tuple(reps) if reps is not None else None)]
    return SectionLattice(p=p, n=n, d=d, m=params.m, hnf=H, scalar=dp_coeff(d, params).value,
                          optimal_exponent=min_entry_valuation(H, p))


def sandwich_c(d: int, p: int) -> int:
    """``ceil(d (p-1)/(p+1))``."""
    return -((-d * (p - 1)) // (p + 1))


def sandwich_check(spec: IdealSpec, params: LevelParams) -> dict:
    p, n, d = params.p, spec.n, spec.d
    L = global_section_lattice(spec, params)
    N = 2 * d + 1
    c = sandwich_c(d, p)
    lower_ok = lattice_includes(L.hnf, scaled_identity(N, p ** (n * d)))
    upper_ok = all(x % p ** (n * c) == 0 for row in L.hnf for x in row)
    return {"p": p, "n": n, "d": d, "m": params.m, "c": c, "lower_ok": lower_ok, "upper_ok": upper_ok,
            "optimal_exponent": L.optimal_exponent}


def symbol_vector(f: Poly, d: int) -> List[int]:
    if not f.is_polynomial() or (not f.is_zero() and f.degree > 2 * d):
        raise ParameterError("need a polynomial of degree <= 2d")
    out = []
    for k in range(2 * d + 1):
        c = f.coeff(k)
        if c.denominator != 1:
            raise ParameterError("need integer coefficients")
        out.append(int(c))
    return out


def remark_witnesses(p: int, k: int) -> List[int]:
    """Coefficients of ``p^(k(p-1)) (x^p - x)^k``, a degree-kp symbol."""
    base = Poly({p: 1, 1: -1}) ** k * p ** (k * (p - 1))
    return symbol_vector(base, k * p)


# ---------------------------------------------------------------------------
# rewrite certificate and extension tests

@dataclass
class RewriteCertificate:
    n: int
    nu: int
    d: int
    k: int
    z_exp: int
    x_extra_exp: int
    x_exp: int
    ok: bool
    detail: str = ""

    @property
    def exponents(self) -> Tuple[int, int, int]:
        return (self.z_exp, self.x_extra_exp, self.x_exp)


def rewrite_d_certificate(n: int, nu: int, d: int, k: int) -> RewriteCertificate:
    """Write ``p^(n(d-k)) (x-a)^k D_x^d`` on the level-nu blow-up chart.

    With ``x - a = p^(nu-1) t`` and ``D_t = p^(nu-1) D_x`` this is
    ``z^A t^B t^d D_t^d`` where ``t z = p``; ``A = (n-nu+1)(d-k)``,
    ``B = (n-nu)(d-k)``.
    """
    if not (0 <= k <= d and 1 <= nu <= n):
        raise ParameterError("need 0 <= k <= d and 1 <= nu <= n")
    A = (n - nu + 1) * (d - k)
    B = (n - nu) * (d - k)
    X = d
    cert = RewriteCertificate(n, nu, d, k, A, B, X, ok=False)
    if min(A, B, X) < 0:
        cert.detail = "negative exponent"
        return cert
    # recombine: z^A t^B t^d D_t^d with z = p/t is p^A t^(B + d - A) D_t^d;
    # then t = (x-a)/p^(nu-1) and D_t = p^(nu-1) D_x
    t_exp = B + X - A
    p_exp = A - (nu - 1) * t_exp + (nu - 1) * d
    cert.ok = (t_exp == k and p_exp == n * (d - k))
    if not cert.ok:
        cert.detail = f"recombined to p^{p_exp} (x-a)^{t_exp} D^{d}"
    return cert


def recombine_certificate(cert: RewriteCertificate, p: int, a: int) -> DiffOperator:
    """The operator the certificate stands for, rebuilt in the x-chart."""
    t = Poly({0: Fraction(-a, p ** (cert.nu - 1)), 1: Fraction(1, p ** (cert.nu - 1))})
    # z^A t^B t^d = p^A t^(B + d - A), and D_t^d = p^((nu-1)d) D_x^d
    coeff = (t ** (cert.x_extra_exp + cert.x_exp - cert.z_exp)) * p ** cert.z_exp
    return DiffOperator({cert.d: coeff * Fraction(p) ** ((cert.nu - 1) * cert.d)}, "x")


def _residual_transforms(p: int, n: int) -> List[ChartTransform]:
    return [c.transform(p) for c in enumerate_charts(p, n) if c.kind == "residual-disc"]


def extension_test(S: GradedSymbol, p: int, n: int) -> bool:
    """Whether ``S`` extends to every residual disc of X_n with integral coefficients."""
    if S.chart != "x":
        S = S.swap_chart()
    f = S.coeff
    if not f.is_polynomial() or not f.is_p_integral(p):
        raise ParameterError("S must be f(x) D^d with p-integral polynomial f")
    if not f.is_zero() and f.degree > 2 * S.d:
        raise ParameterError("deg f must be <= 2d")
    for T in _residual_transforms(p, n):
        if not to_chart(S, T, p).coeff.is_p_integral(p):
            return False
    return True


# ---------------------------------------------------------------------------
# operator-level chart tests for the first inclusion of the n-th model

def _int_poly(f: Poly) -> Tuple[List[int], int]:
    """``(F, L)`` with ``F = L f`` integral, ``L > 0``."""
    coeffs = f.coefficients()
    L = 1
    for c in coeffs:
        L = L * c.denominator // math.gcd(L, c.denominator)
    return [int(c * L) for c in coeffs], L


def _taylor_int(F: List[int], a: int) -> List[int]:
    """Taylor coefficients of an integer polynomial at ``a`` by repeated synthetic division."""
    F = list(F)
    out = []
    while F:
        acc = 0
        q = []
        for c in reversed(F):
            acc = acc * a + c
            q.append(acc)
        out.append(q[-1])
        q.pop()
        F = list(reversed(q))
    return out


@dataclass
class ChartVerdict:
    ok: bool
    chart: Optional[ChartAddress] = None
    j: Optional[int] = None
    margin: float = INF


class OperatorChartData:
    """Pre-processed operator for repeated chart tests."""

    def __init__(self, A: DiffOperator):
        self.x = {j: _int_poly(f) for j, f in A.terms.items() if f.is_polynomial()}
        self.A = A
        try:
            B = chart_swap(A)
            self.y = {j: _int_poly(f) for j, f in B.terms.items()}
            self.global_ok = True
        except Exception:
            self.y = None
            self.global_ok = False


def chart_margin(data: OperatorChartData, T: ChartTransform, params: LevelParams, scale_vp: int = 0) -> Tuple[float, Optional[int]]:
    """Smallest slack of the level-m integrality conditions on one chart.

    Residual discs need ``c_j j!/q_j!`` integral; blow-up charts need
    ``g_j = c_j j!/(q_j! t^j)`` in ``Z_p[t, p/t]``, i.e. the coefficient of
    ``t^(-i)`` divisible by ``p^i``.  ``scale_vp`` is a global scalar valuation.
    """
    p = params.p
    terms = data.x if T.chart == "x" else data.y
    s = T.scale
    best, where = INF, None
    for j, (F, L) in terms.items():
        base = scale_vp - vp(L, p) - s * j - vp(dp_coeff(j, params).value, p)
        for i, c in enumerate(_taylor_int(F, T.center)):
            if not c:
                continue
            val = vp(c, p) + s * i + base
            if T.kind == "blow-up-chart" and i < j:
                val -= (j - i)
            if val < best:
                best, where = val, j
    return best, where


def operator_extends(A: DiffOperator, params: LevelParams, n: int, scale_vp: int = 0,
                     charts: Optional[List[ChartAddress]] = None) -> ChartVerdict:
    """Chart-by-chart test that ``p^scale_vp * A`` is a level-m section on X_n."""
    from .weyl import is_global_section_level_m

    data = OperatorChartData(A)
    if not data.global_ok:
        return ChartVerdict(False, ChartAddress("interior", 0, ()), None, -INF)
    if not is_global_section_level_m(A.scale(Fraction(params.p) ** scale_vp), params):
        return ChartVerdict(False, ChartAddress("interior", 0, ()), None, -1)
    worst = ChartVerdict(True)
    for ch in charts if charts is not None else enumerate_charts(params.p, n):
        if ch.kind == "interior":
            continue
        m_, j = chart_margin(data, ch.transform(params.p), params, scale_vp)
        if m_ < worst.margin:
            worst = ChartVerdict(m_ >= 0, ch, j, m_)
    return worst
