"""Integer lattices: Hermite normal form, congruence sublattices, and p-local tools.

Rows are lattice vectors.  ``hnf`` is the row-style normal form: upper
triangular echelon shape, positive pivots, entries above a pivot reduced into
``[0, pivot)``.  It is unique, so two bases span the same lattice iff their
HNFs agree.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

from .arith import INF, vp

Matrix = List[List[int]]


def _xgcd(a: int, b: int):
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out: Matrix = []
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        # combine all rows r.. into a single row with gcd in column c
        piv = None
        for i in range(r, len(A)):
            if A[i][c] == 0:
                continue
            if piv is None:
                piv = i
                continue
            a, b = A[piv][c], A[i][c]
            g, s, t = _xgcd(a, b)
            ra, rb = A[piv], A[i]
            new_p = [s * x + t * y for x, y in zip(ra, rb)]
            new_i = [(a // g) * y - (b // g) * x for x, y in zip(ra, rb)]
            A[piv], A[i] = new_p, new_i
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
        pivots.append(c)
        r += 1
        A = A[:r] + [row for row in A[r:] if any(row)]
        if r == len(A):
            break
    A = A[:r]
    # reduce above pivots
    for i, c in enumerate(pivots):
        pv = A[i][c]
        for k in range(i):
            q = A[k][c] // pv
            if q:
                A[k] = [x - q * y for x, y in zip(A[k], A[i])]
    return A


def pivots_of(H: Matrix) -> List[int]:
    out = []
    for row in H:
        out.append(next(i for i, x in enumerate(row) if x))
    return out


def lattice_contains(H: Matrix, v: Sequence[int]) -> bool:
    """Whether the integer vector ``v`` lies in the lattice with HNF ``H``."""
    v = list(map(int, v))
    for row, c in zip(H, pivots_of(H)):
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def lattice_includes(H_big: Matrix, H_small: Matrix) -> bool:
    """``span(H_small) <= span(H_big)``."""
    return all(lattice_contains(H_big, r) for r in H_small)


def scaled_identity(dim: int, s: int) -> Matrix:
    return [[s if i == j else 0 for j in range(dim)] for i in range(dim)]


def min_entry_valuation(H: Matrix, p: int):
    """Largest e with every vector of the lattice divisible by p^e."""
    return min((vp(x, p) for row in H for x in row if x), default=INF)


def congruence_sublattice(H: Matrix, w: Sequence[int], modulus_exp: int, p: int) -> Matrix:
    """Vectors ``v`` of span(H) with ``<w, v> = 0 mod p^modulus_exp``.

    Pivot on the row whose value has the smallest valuation ``t``; clear the
    other rows' values modulo ``p^e`` with unit multipliers and multiply the
    pivot row by ``p^(e-t)``.
    """
    e = modulus_exp
    if e <= 0:
        return [list(r) for r in H]
    pe = p ** e
    rows = [list(r) for r in H]
    vals = [sum(a * b for a, b in zip(w, r)) % pe for r in rows]
    best, i0 = INF, None
    for i, v in enumerate(vals):
        if v:
            t = vp(v, p)
            if t < best:
                best, i0 = t, i
    if i0 is None:
        return rows
    t = best
    pt = p ** t
    mod = p ** (e - t)
    u0 = vals[i0] // pt
    u0inv = pow(u0, -1, mod) if mod > 1 else 0
    for i, v in enumerate(vals):
        if i == i0 or v == 0:
            continue
        r = ((v // pt) * u0inv) % mod
        if r:
            rows[i] = [x - r * y for x, y in zip(rows[i], rows[i0])]
    rows[i0] = [x * mod for x in rows[i0]]
    return hnf(rows)


# ---------------------------------------------------------------------------
# p-local linear algebra over Z_(p), entries are Fractions

def _unit_part(x: Fraction, p: int) -> Fraction:
    x = Fraction(x)
    return x / Fraction(p) ** vp(x, p)


def local_echelon(rows: Sequence[Sequence[Fraction]], p: int):
    """Echelon form over Z_(p): list of (pivot column, pivot valuation, row)."""
    A = [[Fraction(x) for x in r] for r in rows]
    A = [r for r in A if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    for c in range(ncols):
        best, bi = INF, None
        for i, r in enumerate(A):
            if r[c]:
                t = vp(r[c], p)
                if t < best:
                    best, bi = t, i
        if bi is None:
            continue
        prow = A.pop(bi)
        u = _unit_part(prow[c], p)
        prow = [x / u for x in prow]           # pivot entry is now p^best
        newA = []
        for r in A:
            if r[c]:
                q = r[c] / prow[c]               # p-integral since vp(r[c]) >= best
                r = [x - q * y for x, y in zip(r, prow)]
            if any(r):
                newA.append(r)
        A = newA
        out.append((c, best, prow))
        if not A:
            break
    return out


def local_contains(echelon, v: Sequence[Fraction], p: int) -> bool:
    """Membership of ``v`` in the Z_(p)-span of an echelon basis."""
    v = [Fraction(x) for x in v]
    for c, t, row in echelon:
        if not v[c]:
            continue
        q = v[c] / row[c]
        if vp(q, p) < 0:
            return False
        v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def local_smith_valuations(rows: Sequence[Sequence[Fraction]], p: int) -> List[int]:
    """Valuations of the Smith invariants over Z_(p) of the matrix with these rows."""
    A = [[Fraction(x) for x in r] for r in rows]
    out = []
    while True:
        A = [r for r in A if any(r)]
        if not A:
            break
        best, bi, bj = INF, None, None
        for i, r in enumerate(A):
            for j, x in enumerate(r):
                if x:
                    t = vp(x, p)
                    if t < best:
                        best, bi, bj = t, i, j
        prow = A.pop(bi)
        piv = prow[bj]
        newA = []
        for r in A:
            if r[bj]:
                q = r[bj] / piv
                r = [x - q * y for x, y in zip(r, prow)]
            newA.append(r)
        # column operations clear the rest of the pivot row without touching
        # other rows' valuations pattern, since every entry has vp >= best;
        # we just drop column bj
        A = [r[:bj] + r[bj + 1:] for r in newA]
        out.append(best)
    return out


def local_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q (any prime works for the echelon; uses exact elimination)."""
    A = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        pr = A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                q = A[i][c] / pr[c]
                A[i] = [x - q * y for x, y in zip(A[i], pr)]
        rank += 1
    return rank


def to_integer_rows(rows: Sequence[Sequence[Fraction]], p: Optional[int] = None) -> Matrix:
    """Clear denominators row by row (by units only if ``p`` is given and denominators are prime to p)."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
        if p is not None and den % p == 0:
            raise ValueError("row is not p-integral")
        out.append([int(Fraction(x) * den) for x in r])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
