"""Acceptance gate: criteria 1-13, exact, zero tolerance.

Each criterion is a function returning ``(ok, detail)``.  Under pytest every
one becomes a test and the summary hook in conftest.py prints one line per
criterion; ``python tests/test_acceptance.py`` prints the same lines.
"""
import math
import os
import random
import subprocess
import sys
import tempfile
import time
from fractions import Fraction

import pytest

from gl2arith.arith import LevelParams, integrality_ratio, q_binomial_ratio, vp
from gl2arith.gl2 import check_subalgebra_closure_grid, cnj_coefficients, cnj_hypothesis
from gl2arith.hopf import (
    coassociativity_check,
    delta_multiplicativity_check,
    pairing_delta_report,
    transition_compatibility_check,
    transition_delta_check,
)
from gl2arith.models import (
    IdealSpec,
    extension_test,
    generator_span_oracle,
    global_section_lattice,
    ideal_membership,
    in_ideal_sheaf,
    remark_witnesses,
    sandwich_check,
)
from gl2arith.lattice import scaled_identity
from gl2arith.theorems import (
    graded_generation,
    inequality_sweep,
    target_symbol,
    theorem1_graded_check,
    theorem2_check,
    torsion_bound,
)
from gl2arith.weyl import DiffOperator, GradedSymbol, Poly, binomial_of_operator

RESULTS = {}


def c01_duality_delta():
    # literal statement: Kostant basis against (a-1)^mu1 b^mu2 c^mu3 (d-1)^mu4
    bad = []
    for p in (2, 3, 5):
        for n in (0, 1, 2):
            r = pairing_delta_report(6, LevelParams(p, n=n), coords="matrix")
            if not r["ok"]:
                bad.append((p, n, r["mismatches"], r["counterexample"]))
    if bad:
        p, n, cnt, ce = bad[0]
        return False, (f"{len(bad)}/9 grids fail in matrix coordinates, e.g. p={p} n={n}: "
                       f"{cnt} mismatches, <K{ce['nu']}, Y{ce['mu']}> = {ce['value']}")
    return True, "delta on |nu|,|mu| <= 6"


def c02_closure():
    grid = [LevelParams(p, m) for p in (2, 3) for m in (0, 1, 2)]
    reps = check_subalgebra_closure_grid(6, grid)
    worst = min(r["min_valuation"] for r in reps)
    return all(r["ok"] for r in reps), f"6 grids, min valuation {worst}"


def c03_integrality():
    for p in (2, 3, 5):
        for m in range(4):
            P = LevelParams(p, m=m)
            for s in range(201):
                for i in range(s + 1):
                    if vp(integrality_ratio(i, s - i, P), p) < 0:
                        return False, f"ratio ({i},{s - i}) at {P}"
            for nu in range(301):
                for k in range(nu + 1):
                    if q_binomial_ratio(nu, k, P).denominator != 1:
                        return False, f"binomial ratio ({nu},{k}) at {P}"
    return True, "i+j <= 200, nu <= 300"


def c04_binomial_operator():
    xD = DiffOperator.monomial(1, 1)
    for nu in range(13):
        if binomial_of_operator(xD, nu) != DiffOperator.monomial(nu, nu, Fraction(1, math.factorial(nu))):
            return False, f"nu={nu}"
    return True, "nu <= 12"


def c05_cnj():
    count = 0
    for p in (2, 3, 5):
        for n in range(1, 5):
            P = LevelParams(p, n=n)
            if not cnj_hypothesis(P):
                continue
            for nu in range(1, 51):
                for j, c in enumerate(cnj_coefficients(nu, P), 1):
                    count += 1
                    if vp(c, p) < 0:
                        return False, f"c({nu},{j}) at p={p} n={n}"
    return True, f"{count} coefficients"


def c06_ideal_oracle():
    count = 0
    for p in (2, 3):
        for n in range(3):
            for d in range(4):
                spec = IdealSpec(n, d)
                for a in range(p ** n):
                    for j in range(7):
                        for e in range(5):
                            f = Poly({j: p ** e})
                            count += 1
                            if ideal_membership(f, a, spec, p) != generator_span_oracle(f, a, spec, p):
                                return False, f"x^{j} p^{e}, a={a}, n={n}, d={d}, p={p}"
    return True, f"{count} cases"


def c07_direct_image():
    rng = random.Random(20240607)
    count = 0
    for p in (2, 3):
        for n in range(3):
            for d in range(1, 6):
                samples = [Poly.monomial(k) for k in range(2 * d + 1)]
                for _ in range(200):
                    samples.append(Poly([rng.randint(-p ** 2, p ** 2) * p ** rng.randint(0, n * d)
                                         for _ in range(2 * d + 1)]))
                for f in samples:
                    count += 1
                    if extension_test(GradedSymbol(d, f), p, n) != in_ideal_sheaf(f, d, n, p):
                        return False, f"p={p} n={n} d={d} f={f.coefficients()}"
    return True, f"{count} symbols"


def c08_sandwich():
    for p in (2, 3):
        for n in range(4):
            for d in range(1, 9):
                for m in (0, 1):
                    r = sandwich_check(IdealSpec(n, d), LevelParams(p, m))
                    if not (r["lower_ok"] and r["upper_ok"]):
                        return False, f"p={p} n={n} d={d} m={m}"
            if global_section_lattice(IdealSpec(n, 1), LevelParams(p)).hnf != scaled_identity(3, p ** n):
                return False, f"L({n},1) != p^{n} L0 at p={p}"
    L = global_section_lattice(IdealSpec(1, 3), LevelParams(3))
    if not L.contains([0, -9, 0, 9, 0, 0, 0]):
        return False, "9(x^3 - x) not in L(1,3)"
    for p in (2, 3, 5):
        e = global_section_lattice(IdealSpec(1, p), LevelParams(p)).optimal_exponent
        if e > p - 1:
            return False, f"e(1,{p}) = {e}"
    for p in (2, 3):
        for k in range(1, 4):
            if not global_section_lattice(IdealSpec(1, k * p), LevelParams(p)).contains(remark_witnesses(p, k)):
                return False, f"witness k={k} p={p}"
    return True, "p in {2,3}, n <= 3, d <= 8, m in {0,1}"


def c09_generation():
    Ns = {}
    for p in (2, 3):
        for m in (0, 1):
            P = LevelParams(p, m=m)
            pm = p ** m
            for d in range(4 * pm + 1):
                for k in range(2 * d + 1):
                    st = graded_generation(d, k, P)
                    if st.recombine(P) != target_symbol(d, k, P) or vp(st.u, p) != 0 or st.residual[0] >= 2 * pm:
                        return False, f"d={d} k={k} p={p} m={m}"
            tb = torsion_bound(P, 4 * pm)
            if not tb.ok or tb.N > tb.apriori:
                return False, f"N={tb.N} apriori={tb.apriori} at p={p} m={m}"
            Ns[(p, m)] = tb.N
    return True, "N(m): " + ", ".join(f"p={p} m={m}: {N}" for (p, m), N in sorted(Ns.items()))


def c10_theorem1():
    for p in (2, 3):
        for m in (0, 1):
            r = theorem1_graded_check(LevelParams(p, m=m), 6, filtered=True)
            if not r["ok"]:
                return False, f"p={p} m={m}: {r['records']}"
    return True, "degrees <= 6, kernel = central ideal, p^N-cosurjective"


def c11_theorem2():
    for p in (2, 3):
        for n in range(4):
            for m in (0, 1):
                r = theorem2_check(LevelParams(p, m, n), 6)
                if not r["ok"]:
                    return False, f"p={p} n={n} m={m}: left {r['left']['failures'][:1]}"
    bad = inequality_sweep(6, 12)
    if bad:
        return False, f"n c(d) < d n' at {bad[0]}"
    return True, "p in {2,3}, n <= 3, m in {0,1}, degree <= 6; sweep n <= 6, d <= 12"


def c12_hopf():
    for p in (2, 3):
        for n in range(4):
            if not all(coassociativity_check(n, p).values()) or not delta_multiplicativity_check(n, p):
                return False, f"coproduct at p={p} n={n}"
            if n >= 1 and not (all(transition_compatibility_check(n, p).values()) and transition_delta_check(n, p)):
                return False, f"transition at p={p} n={n}"
    return True, "n <= 3"


def c13_determinism():
    blobs = []
    with tempfile.TemporaryDirectory() as tmp:
        for i, jobs in enumerate(("1", "4")):
            out = os.path.join(tmp, f"run{i}")
            proc = subprocess.run([sys.executable, "-m", "gl2arith.cli", "all", "--quick",
                                   "--jobs", jobs, "--output", out], capture_output=True, text=True)
            if proc.returncode != 0:
                return False, f"exit {proc.returncode}: {proc.stderr[-300:]}"
            blobs.append({name: open(os.path.join(out, name), "rb").read() for name in sorted(os.listdir(out))})
    if blobs[0] != blobs[1]:
        diff = [k for k in blobs[0] if blobs[0].get(k) != blobs[1].get(k)]
        return False, f"reports differ: {diff}"
    return True, f"{len(blobs[0])} reports byte-identical"


CRITERIA = [
    (1, "duality delta", c01_duality_delta),
    (2, "level-m closure", c02_closure),
    (3, "integrality and binomial ratios", c03_integrality),
    (4, "binomial of x D", c04_binomial_operator),
    (5, "c_nu,j integrality", c05_cnj),
    (6, "ideal criterion vs oracle", c06_ideal_oracle),
    (7, "extension test vs ideal membership", c07_direct_image),
    (8, "sandwich inclusions", c08_sandwich),
    (9, "graded generation and N(m)", c09_generation),
    (10, "theorem 1 graded shadow", c10_theorem1),
    (11, "theorem 2 shadow", c11_theorem2),
    (12, "Hopf identities", c12_hopf),
    (13, "determinism of verify all --quick", c13_determinism),
]


def _evaluate(num, name, fn):
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then let the test fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {name}: {detail} ({time.perf_counter() - t0:.1f}s)"
    RESULTS[num] = line
    return ok, line


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn):
    ok, line = _evaluate(num, name, fn)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for num, name, fn in CRITERIA:
        ok, line = _evaluate(num, name, fn)
        print(line, flush=True)
        failed += not ok
    sys.exit(1 if failed else 0)
