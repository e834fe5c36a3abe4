"""Charts of the blow-up model, and which symbols extend to it.

    python demos/blowup_charts.py [p] [n]
"""
import sys

from gl2arith.models import chart_counts, chart_tree, extension_test, in_ideal_sheaf
from gl2arith.weyl import GradedSymbol, Poly


def main(p=2, n=2):
    cc = chart_counts(p, n)
    print(f"p = {p}, n = {n}: blow-up charts per level {cc['blow_up']}, residual discs {cc['residual']}")
    tree = chart_tree(p, n)
    ends = sum(1 for dg in tree["degrees"] if dg == 1)
    print(f"special fiber tree: {len(tree['nodes'])} components, {len(tree['edges'])} edges, {ends} ends")

    print("\nwhich p^e x^k D extend (d = 1):")
    for e in range(n + 1):
        row = []
        for k in range(3):
            f = Poly.monomial(k, p ** e)
            ok = extension_test(GradedSymbol(1, f), p, n)
            assert ok == in_ideal_sheaf(f, 1, n, p)
            row.append("yes" if ok else "no")
        print(f"  e={e}: " + "  ".join(f"x^{k}:{r:>3}" for k, r in enumerate(row)))

    # the degree-p witness p^(p-1)(x^p - x) survives one blow-up
    f = Poly({p: p ** (p - 1), 1: -p ** (p - 1)})
    print(f"\np^{p - 1}(x^{p} - x) D^{p} extends to X_1: {extension_test(GradedSymbol(p, f), p, 1)}")


if __name__ == "__main__":
    main(*map(int, sys.argv[1:]))
