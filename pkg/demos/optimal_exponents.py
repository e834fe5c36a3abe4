"""Tabulate the optimal exponent e(n,d) of the section lattices against the sandwich bounds.

    python demos/optimal_exponents.py [p] [n_max] [d_max]
"""
import sys

from gl2arith.arith import LevelParams
from gl2arith.models import IdealSpec, global_section_lattice, sandwich_c


def main(p=3, n_max=3, d_max=8):
    P = LevelParams(p)
    print(f"p = {p}: lower bound n*c(d) <= e(n,d) <= n*d")
    print("d      " + " ".join(f"{d:>3}" for d in range(1, d_max + 1)))
    print("c(d)   " + " ".join(f"{sandwich_c(d, p):>3}" for d in range(1, d_max + 1)))
    for n in range(1, n_max + 1):
        row = [global_section_lattice(IdealSpec(n, d), P).optimal_exponent for d in range(1, d_max + 1)]
        print(f"n = {n}  " + " ".join(f"{e:>3}" for e in row))

    # at n = 1, d = p the exponent is p - 1, one less than n * d
    L = global_section_lattice(IdealSpec(1, p), P)
    print(f"\nL(1,{p}) in Hermite normal form (columns x^0 .. x^{2 * p}):")
    for row in L.hnf:
        print("  ", row)


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
