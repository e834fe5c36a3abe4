import itertools
import json
import random
from fractions import Fraction

import pytest

from gl2arith.arith import LevelParams, ParameterError
from gl2arith.lattice import lattice_contains, scaled_identity
from gl2arith.models import (
    INFINITY,
    ChartAddress,
    ChartTransform,
    IdealSpec,
    chart_counts,
    chart_tree,
    enumerate_charts,
    extension_test,
    generator_span_oracle,
    global_section_lattice,
    ideal_membership,
    in_ideal_sheaf,
    is_tree,
    operator_extends,
    recombine_certificate,
    remark_witnesses,
    rewrite_d_certificate,
    sandwich_c,
    sandwich_check,
    symbol_vector,
    to_chart,
)
from gl2arith.weyl import DiffOperator, GradedSymbol, Poly

# e(n, d) for d = 1..8, computed from the HNF and cross-checked below by
# saturation against the chart route on small cases
OPTIMAL = {
    (2, 1): [1, 1, 1, 2, 2, 2, 3, 3],
    (2, 2): [2, 3, 3, 5, 6, 6, 8, 9],
    (2, 3): [3, 5, 6, 9, 11, 11, 14, 16],
    (3, 1): [1, 1, 2, 2, 3, 3, 4, 4],
    (3, 2): [2, 3, 5, 6, 8, 8, 10, 11],
    (3, 3): [3, 5, 8, 10, 13, 14, 17, 19],
}


def test_chart_counts_examples():
    assert chart_counts(2, 0) == {"blow_up": {}, "residual": 3}
    assert chart_counts(2, 1) == {"blow_up": {1: 3}, "residual": 6}
    assert chart_counts(3, 2) == {"blow_up": {1: 4, 2: 12}, "residual": 36}
    assert sum(c.kind == "interior" for c in enumerate_charts(5, 2)) == 1


def test_chart_counts_formula():
    for p in (2, 3, 5):
        for n in range(4):
            cnt = chart_counts(p, n)
            assert cnt["residual"] == (p + 1) * p ** n
            assert cnt["blow_up"] == {nu: (p + 1) * p ** (nu - 1) for nu in range(1, n + 1)}


def test_chart_tree():
    for p in (2, 3, 5):
        for n in range(4):
            T = chart_tree(p, n)
            assert is_tree(T)
            for node, deg in zip(T["nodes"], T["degrees"]):
                if node["kind"] == "interior" and n == 0:
                    assert deg == 0
                elif node["level"] == n and n > 0:
                    assert deg == 1
                else:
                    assert deg == p + 1
    assert len(chart_tree(2, 1)["nodes"]) == 4
    assert len(chart_tree(3, 0)["nodes"]) == 1
    assert sum(d == 1 for d in chart_tree(2, 2)["degrees"]) == 6


def test_chart_address_validation():
    with pytest.raises(ParameterError):
        ChartAddress("residual-disc", 1, (0,))
    with pytest.raises(ParameterError):
        ChartAddress("somewhere", 0, ())
    T = ChartAddress("residual-disc", 2, (INFINITY, 1, 2)).transform(3)
    assert T == ChartTransform(center=1 * 3 + 2 * 9, scale=2, chart="y", kind="residual-disc")
    T = ChartAddress("blow-up-chart", 2, (1, 2)).transform(3)
    assert (T.center, T.scale, T.chart) == (7, 1, "x")
    with pytest.raises(ParameterError):
        ChartAddress("interior", 0, ()).transform(3)


def test_to_chart_examples():
    p = 3
    for nu in (1, 2, 3):
        for a in (0, 4, 7):
            T = ChartTransform(center=a, scale=nu - 1, kind="blow-up-chart")
            S = GradedSymbol(1, Poly({0: -a, 1: 1}))
            assert to_chart(S, T, p) == GradedSymbol(1, Poly.monomial(1), "t")
    for n in range(4):
        T = ChartTransform(center=5, scale=n)
        assert to_chart(GradedSymbol(1, 1), T, p) == GradedSymbol(1, Fraction(1, p ** n), "t")
    assert to_chart(GradedSymbol(0, 7), ChartTransform(center=2, scale=2), p) == GradedSymbol(0, 7, "t")


def test_ideal_membership_examples():
    P1 = IdealSpec(1, 1)
    assert ideal_membership(Poly.monomial(1, 2), 0, P1, 2)
    f = Poly({3: 9, 1: -9})
    assert all(ideal_membership(f, a, IdealSpec(1, 3), 3) for a in range(3))
    assert not ideal_membership(Poly.const(1), 0, P1, 3)
    assert ideal_membership(Poly.monomial(1), 0, P1, 3)
    with pytest.raises(ParameterError):
        ideal_membership(Poly.const(Fraction(1, 3)), 0, P1, 3)


def test_ideal_depends_on_residue_only():
    rng = random.Random(2)
    for _ in range(200):
        p = rng.choice([2, 3, 5])
        n, d = rng.randint(0, 3), rng.randint(0, 4)
        f = Poly([rng.randint(-30, 30) * p ** rng.randint(0, 3) for _ in range(rng.randint(1, 8))])
        a = rng.randint(0, p ** n)
        spec = IdealSpec(n, d)
        assert ideal_membership(f, a, spec, p) == ideal_membership(f, a + p ** n * rng.randint(-5, 5), spec, p)


def test_oracle_on_random_polynomials():
    rng = random.Random(4)
    for _ in range(150):
        p = rng.choice([2, 3])
        n, d = rng.randint(1, 2), rng.randint(1, 3)
        a = rng.randrange(p ** n)
        f = Poly([rng.randint(-4, 4) * p ** rng.randint(0, 4) for _ in range(rng.randint(1, 7))])
        spec = IdealSpec(n, d)
        assert ideal_membership(f, a, spec, p) == generator_span_oracle(f, a, spec, p)


def test_lattice_examples():
    for d in range(5):
        L = global_section_lattice(IdealSpec(0, d), LevelParams(3))
        assert L.hnf == scaled_identity(2 * d + 1, 1)
        assert L.optimal_exponent == 0
    for p in (2, 3, 5):
        L = global_section_lattice(IdealSpec(1, 1), LevelParams(p))
        assert L.hnf == scaled_identity(3, p)
    L = global_section_lattice(IdealSpec(1, 3), LevelParams(3))
    assert L.contains(symbol_vector(Poly({3: 9, 1: -9}), 3))
    assert not L.contains(symbol_vector(Poly({3: 3, 1: -3}), 3))


def test_lattice_level_scalar_and_json():
    L = global_section_lattice(IdealSpec(2, 4), LevelParams(2, m=1))
    assert L.scalar == Fraction(2, 24)
    doc = json.loads(L.dumps())
    assert set(doc) >= {"p", "n", "d", "m", "hnf", "optimal_exponent"}
    assert doc["hnf"] == L.hnf
    assert global_section_lattice(IdealSpec(2, 4), LevelParams(2)).hnf == L.hnf


def test_representative_independence():
    rng = random.Random(9)
    for p in (2, 3):
        for n in (1, 2):
            for d in range(1, 6):
                pn = p ** n
                reps = [a + pn * rng.randint(-3, 3) for a in range(pn)]
                reps2 = [1 - a for a in range(pn)]
                base = global_section_lattice(IdealSpec(n, d), LevelParams(p)).hnf
                assert global_section_lattice(IdealSpec(n, d), LevelParams(p), reps).hnf == base
                assert global_section_lattice(IdealSpec(n, d), LevelParams(p), reps2).hnf == base


def test_optimal_exponent_table():
    for (p, n), row in OPTIMAL.items():
        got = [global_section_lattice(IdealSpec(n, d), LevelParams(p)).optimal_exponent for d in range(1, 9)]
        assert got == row
    for p in (2, 3, 5):
        assert global_section_lattice(IdealSpec(1, p), LevelParams(p)).optimal_exponent == p - 1


def _saturation_gap(p, n, d):
    """Vectors of p^-1 L not in L that still satisfy the conditions (should be none)."""
    L = global_section_lattice(IdealSpec(n, d), LevelParams(p)).hnf
    bad = []
    for cs in itertools.product(range(p), repeat=len(L)):
        if not any(cs):
            continue
        v = [sum(c * r[i] for c, r in zip(cs, L)) for i in range(2 * d + 1)]
        if any(x % p for x in v):
            continue
        v = [x // p for x in v]
        S = GradedSymbol(d, Poly(v))
        if in_ideal_sheaf(Poly(v), d, n, p) or extension_test(S, p, n):
            bad.append(v)
    return bad


@pytest.mark.parametrize("p,n,d", [(2, 1, 1), (2, 1, 3), (2, 2, 2), (2, 2, 4), (3, 1, 2), (3, 2, 3)])
def test_lattice_is_saturated(p, n, d):
    assert _saturation_gap(p, n, d) == []
    L = global_section_lattice(IdealSpec(n, d), LevelParams(p)).hnf
    for r in L:
        assert extension_test(GradedSymbol(d, Poly(r)), p, n)


def test_sandwich_examples():
    for n in range(4):
        rep = sandwich_check(IdealSpec(n, 1), LevelParams(3))
        assert rep["optimal_exponent"] == n and rep["lower_ok"] and rep["upper_ok"]
    assert sandwich_c(3, 3) == 2
    assert sandwich_c(8, 2) == 3
    assert sandwich_check(IdealSpec(0, 6), LevelParams(2))["optimal_exponent"] == 0


def test_remark_witnesses():
    for p in (2, 3):
        for k in range(1, 4):
            L = global_section_lattice(IdealSpec(1, k * p), LevelParams(p))
            assert L.contains(remark_witnesses(p, k))


def test_rewrite_examples():
    c = rewrite_d_certificate(1, 1, 1, 0)
    assert c.ok and c.exponents == (1, 0, 1)
    c = rewrite_d_certificate(2, 1, 2, 1)
    assert c.ok and c.exponents == (2, 1, 2)
    for n in range(1, 4):
        for d in range(5):
            c = rewrite_d_certificate(n, n, d, d)
            assert c.ok and c.exponents == (0, 0, d)
    with pytest.raises(ParameterError):
        rewrite_d_certificate(1, 2, 1, 0)


def test_rewrite_recombination_grid():
    for n in range(1, 4):
        for nu in range(1, n + 1):
            for d in range(7):
                for k in range(d + 1):
                    cert = rewrite_d_certificate(n, nu, d, k)
                    assert cert.ok and min(cert.exponents) >= 0
                    for p, a in ((2, 3), (3, 5)):
                        want = DiffOperator({d: Poly({0: -a, 1: 1}) ** k * p ** (n * (d - k))})
                        assert recombine_certificate(cert, p, a) == want


def test_extension_examples():
    for p in (2, 3):
        for n in range(1, 4):
            assert extension_test(GradedSymbol(1, Poly.monomial(1, p ** n)), p, n)
            assert not extension_test(GradedSymbol(1, 1), p, n)
    assert extension_test(GradedSymbol(3, Poly({3: 9, 1: -9})), 3, 1)
    assert not extension_test(GradedSymbol(3, Poly({3: 3, 1: -3})), 3, 1)


def test_extension_equals_ideal_membership_random():
    rng = random.Random(31)
    for _ in range(100):
        p = rng.choice([2, 3])
        n, d = rng.randint(0, 2), rng.randint(1, 5)
        f = Poly([rng.randint(-9, 9) * p ** rng.randint(0, n * d) for _ in range(2 * d + 1)])
        assert extension_test(GradedSymbol(d, f), p, n) == in_ideal_sheaf(f, d, n, p)


def test_operator_extends_examples():
    P = LevelParams(2)
    D = DiffOperator.monomial(0, 1)
    assert operator_extends(D, P, 0).ok
    assert not operator_extends(D, P, 1).ok
    assert operator_extends(D, P, 1, scale_vp=1).ok
    xD = DiffOperator.monomial(1, 1)
    # x D vanishes at the point 0 but not at 1 mod p
    assert not operator_extends(xD, P, 1).ok
