"""Walk through the graded generation of (q_d!/d!) x^k D^d for one level.

Each symbol is factored as a unit times powers of the three degree-p^m
generators and one residual generator of degree < 2 p^m.

    python demos/generation_walkthrough.py [p] [m] [d_max]
"""
import sys

from gl2arith.arith import LevelParams
from gl2arith.theorems import graded_generation, target_symbol, torsion_bound


def main(p=2, m=1, d_max=6):
    P = LevelParams(p, m=m)
    for d in range(d_max + 1):
        for k in range(2 * d + 1):
            st = graded_generation(d, k, P)
            powers = " ".join(f"{name}^{e}" for name, e in st.powers.items() if e) or "-"
            exact = st.recombine(P) == target_symbol(d, k, P)
            print(f"d={d} k={k:2d}  {st.case:20s} u={str(st.u):8s} {powers:14s} "
                  f"residual={st.residual}  exact={exact}")
    tb = torsion_bound(P, d_max)
    print(f"\nN({m}) = {tb.N} at p = {p} (a priori exponent {tb.apriori})")


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
