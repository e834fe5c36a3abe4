"""Coordinate rings of the congruence group schemes G(n) and the duality pairing.

``O(G(0)) = Z_p[a, b, c, d, 1/det]`` with the matrix coproduct; for ``n >= 1``
the coordinates are ``a_n, b_n, c_n, d_n`` with ``a = 1 + p^n a_n``,
``b = p^n b_n``, ``c = p^n c_n``, ``d = 1 + p^n d_n``.  Localization at
``Delta_n`` is kept as a formal denominator exponent.

Polynomial identities are checked with sympy.  The pairing between the
enveloping algebra and coordinate monomials is computed with a small
dedicated engine (truncated polynomials in ``A = a-1, B = b, C = c, D = d-1``).
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import sympy

from .arith import LevelParams, ParameterError
from .gl2 import Index, PBWElement, indices_up_to

COORDS = ("second_kind", "matrix")


# ---------------------------------------------------------------------------
# Hopf algebra O(G(n))

def coordinate_symbols(n: int, tag: str = "") -> Tuple[sympy.Symbol, ...]:
    """``(a_n, b_n, c_n, d_n)``; plain ``a, b, c, d`` for n = 0. ``tag`` marks tensor factors."""
    if n < 0:
        raise ParameterError("n must be >= 0")
    suffix = f"{n}" if n else ""
    return tuple(sympy.Symbol(f"{x}{suffix}{tag}") for x in "abcd")


def delta_expr(n: int, p: int, tag: str = "") -> sympy.Expr:
    a, b, c, d = coordinate_symbols(n, tag)
    if n == 0:
        return a * d - b * c
    q = sympy.Integer(p) ** n
    return sympy.expand((1 + q * a) * (1 + q * d) - q ** 2 * b * c)


class HopfElement:
    """``numerator / Delta_n^den_exp`` with numerator a polynomial in the coordinates of G(n)."""

    __slots__ = ("num", "n", "p", "den_exp")

    def __init__(self, num, n: int, p: int, den_exp: int = 0):
        if den_exp < 0:
            raise ParameterError("denominator exponent must be >= 0")
        self.num = sympy.expand(sympy.sympify(num))
        self.n, self.p, self.den_exp = n, p, den_exp

    @classmethod
    def generator(cls, name: str, n: int, p: int) -> "HopfElement":
        return cls(coordinate_symbols(n)["abcd".index(name)], n, p)

    @classmethod
    def delta(cls, n: int, p: int) -> "HopfElement":
        return cls(delta_expr(n, p), n, p)

    def as_expr(self, tag: str = "") -> sympy.Expr:
        num = self.num
        if tag:
            num = num.subs(dict(zip(coordinate_symbols(self.n), coordinate_symbols(self.n, tag))),
                           simultaneous=True)
        return num / delta_expr(self.n, self.p, tag) ** self.den_exp

    def __mul__(self, other: "HopfElement") -> "HopfElement":
        return HopfElement(self.num * other.num, self.n, self.p, self.den_exp + other.den_exp)

    def __eq__(self, other):
        if not isinstance(other, HopfElement):
            return NotImplemented
        return (self.n, self.p) == (other.n, other.p) and sympy.expand(
            self.num * delta_expr(self.n, self.p) ** other.den_exp
            - other.num * delta_expr(self.n, self.p) ** self.den_exp) == 0

    def __repr__(self):
        return f"HopfElement({self.num} / Delta_{self.n}^{self.den_exp}, p={self.p})"


def _generator_images(n: int, p: int, left: str, right: str) -> Dict[sympy.Symbol, sympy.Expr]:
    a, b, c, d = coordinate_symbols(n, left)
    a2, b2, c2, d2 = coordinate_symbols(n, right)
    if n == 0:
        imgs = (a * a2 + b * c2, a * b2 + b * d2, c * a2 + d * c2, c * b2 + d * d2)
    else:
        q = sympy.Integer(p) ** n
        imgs = (a + a2 + q * a * a2 + q * b * c2,
                b + b2 + q * a * b2 + q * b * d2,
                c + c2 + q * c * a2 + q * d * c2,
                d + d2 + q * d * d2 + q * c * b2)
    return dict(zip(coordinate_symbols(n, ""), imgs))


def _apply_coproduct(expr: sympy.Expr, n: int, p: int, source: str, left: str, right: str) -> sympy.Expr:
    images = _generator_images(n, p, left, right)
    src = coordinate_symbols(n, source)
    sub = {s: images[g] for s, g in zip(src, coordinate_symbols(n, ""))}
    return expr.subs(sub, simultaneous=True)


def comultiplication(F: HopfElement, n: int = None) -> sympy.Expr:
    """Image of F in ``O(G(n)) (x) O(G(n))``; unprimed / primed symbols for the two factors."""
    n = F.n if n is None else n
    if n != F.n:
        raise ParameterError("element lives on a different G(n)")
    num = _apply_coproduct(F.num, n, F.p, "", "", "'")
    den = (delta_expr(n, F.p) * delta_expr(n, F.p, "'")) ** F.den_exp
    return num / den


def coassociativity_check(n: int, p: int) -> Dict[str, bool]:
    """``(Delta x id) Delta = (id x Delta) Delta`` on the four generators, as polynomial identities."""
    out = {}
    for name, g in zip("abcd", coordinate_symbols(n)):
        # first factor split: x -> (x, x'') ; then x -> (x, x')
        once = _apply_coproduct(g, n, p, "", "", "''")
        left = _apply_coproduct(once, n, p, "", "", "'")           # (Delta x id): split the first factor
        right = _apply_coproduct(g, n, p, "", "", "'")
        right = _apply_coproduct(right, n, p, "'", "'", "''")      # (id x Delta): split the second factor
        out[name] = sympy.expand(left - right) == 0
    return out


def delta_multiplicativity_check(n: int, p: int) -> bool:
    """``Delta(Delta_n) = Delta_n (x) Delta_n``."""
    lhs = _apply_coproduct(delta_expr(n, p), n, p, "", "", "'")
    return sympy.expand(lhs - delta_expr(n, p) * delta_expr(n, p, "'")) == 0


def transition_hom(F: HopfElement, n: int) -> HopfElement:
    """Pull back a function on G(n-1) to G(n)."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if F.n != n - 1:
        raise ParameterError(f"element lives on G({F.n}), expected G({n - 1})")
    sub = _transition_map(n, F.p, "")
    num = F.num.subs(sub, simultaneous=True)
    # Delta_{n-1} pulls back to Delta_n (both are the determinant)
    return HopfElement(num, n, F.p, F.den_exp)


def _transition_map(n: int, p: int, tag: str) -> Dict[sympy.Symbol, sympy.Expr]:
    old = coordinate_symbols(n - 1, tag)
    new = coordinate_symbols(n, tag)
    if n == 1:
        imgs = (1 + p * new[0], p * new[1], p * new[2], 1 + p * new[3])
    else:
        imgs = tuple(p * x for x in new)
    return dict(zip(old, imgs))


def transition_compatibility_check(n: int, p: int) -> Dict[str, bool]:
    """``Delta_n o phi = (phi x phi) o Delta_{n-1}`` on the generators of O(G(n-1))."""
    out = {}
    for name, g in zip("abcd", coordinate_symbols(n - 1)):
        lhs = _apply_coproduct(g.subs(_transition_map(n, p, ""), simultaneous=True), n, p, "", "", "'")
        rhs = _apply_coproduct(g, n - 1, p, "", "", "'")
        sub = {**_transition_map(n, p, ""), **_transition_map(n, p, "'")}
        rhs = rhs.subs(sub, simultaneous=True)
        out[name] = sympy.expand(lhs - rhs) == 0
    return out


def transition_delta_check(n: int, p: int) -> bool:
    """phi(Delta_{n-1}) = Delta_n."""
    img = delta_expr(n - 1, p).subs(_transition_map(n, p, ""), simultaneous=True)
    return sympy.expand(img - delta_expr(n, p)) == 0


# ---------------------------------------------------------------------------
# right regular action

_A, _B, _C, _D = sympy.symbols("a b c d")

# image of (a, b, c, d) under each generator, as derivations
_DERIVATIONS = {
    "e": (0, _A, 0, _C),
    "h1": (_A, 0, _C, 0),
    "h2": (0, _B, 0, _D),
    "f": (_B, 0, _D, 0),
}


def _derive(gen: str, F: sympy.Expr) -> sympy.Expr:
    imgs = _DERIVATIONS[gen]
    return sympy.expand(sum(sympy.diff(F, v) * w for v, w in zip((_A, _B, _C, _D), imgs)))


def regular_action(X: PBWElement, F) -> sympy.Expr:
    """Right regular action of ``X`` on a polynomial ``F`` in the symbols a, b, c, d."""
    F = sympy.sympify(F)
    out = sympy.Integer(0)
    names = ("e", "h1", "h2", "f")
    for nu, coef in X.to_plain().coeffs.items():
        G = F
        # e^nu1 h1^nu2 h2^nu3 f^nu4 acts as R_e^nu1 R_h1^nu2 R_h2^nu3 R_f^nu4
        for gen, times in reversed(list(zip(names, nu))):
            for _ in range(times):
                G = _derive(gen, G)
        out += sympy.Rational(coef.numerator, coef.denominator) * G
    return sympy.expand(out)


def evaluate_at_identity(F: sympy.Expr) -> sympy.Rational:
    return sympy.sympify(F).subs({_A: 1, _B: 0, _C: 0, _D: 1})


def coordinate_monomial(mu: Index, coords: str = "matrix") -> sympy.Expr:
    """The coordinate monomial dual (or claimed dual) to the Kostant element ``mu``."""
    a, b, c, d = _A, _B, _C, _D
    if coords == "matrix":
        ys = (a - 1, b, c, d - 1)
    elif coords == "second_kind":
        ys = (b / d, (a * d - b * c) / d - 1, d - 1, c / d)
    else:
        raise ParameterError(f"unknown coordinates {coords!r}")
    out = sympy.Integer(1)
    for y, k in zip(ys, mu):
        out *= y ** k
    return out


# ---------------------------------------------------------------------------
# fast pairing engine: truncated polynomials in A = a-1, B = b, C = c, D = d-1

Mono = Tuple[int, int, int, int]
TPoly = Dict[Mono, Fraction]

# generator -> images of (A, B, C, D) as TPoly
_LOCAL_DER = {
    "e": ({}, {(0, 0, 0, 0): 1, (1, 0, 0, 0): 1}, {}, {(0, 0, 1, 0): 1}),
    "h1": ({(0, 0, 0, 0): 1, (1, 0, 0, 0): 1}, {}, {(0, 0, 1, 0): 1}, {}),
    "h2": ({}, {(0, 1, 0, 0): 1}, {}, {(0, 0, 0, 0): 1, (0, 0, 0, 1): 1}),
    "f": ({(0, 1, 0, 0): 1}, {}, {(0, 0, 0, 0): 1, (0, 0, 0, 1): 1}, {}),
}


def _tp_truncate(P: TPoly, deg: int) -> TPoly:
    return {k: v for k, v in P.items() if v and sum(k) <= deg}


def _tp_mul(P: TPoly, Q: TPoly, deg: int) -> TPoly:
    out: TPoly = {}
    for k, u in P.items():
        for l, v in Q.items():
            m = (k[0] + l[0], k[1] + l[1], k[2] + l[2], k[3] + l[3])
            if sum(m) <= deg:
                out[m] = out.get(m, 0) + u * v
    return {k: v for k, v in out.items() if v}


def _tp_derive(gen: str, P: TPoly, deg: int) -> TPoly:
    out: TPoly = {}
    for var, img in enumerate(_LOCAL_DER[gen]):
        if not img:
            continue
        for mono, c in P.items():
            e = mono[var]
            if not e:
                continue
            base = list(mono)
            base[var] = e - 1
            for im, w in img.items():
                m = (base[0] + im[0], base[1] + im[1], base[2] + im[2], base[3] + im[3])
                if sum(m) <= deg:
                    out[m] = out.get(m, 0) + c * e * w
    return {k: v for k, v in out.items() if v}


def _local_monomial(mu: Index, coords: str, deg: int) -> TPoly:
    one = {(0, 0, 0, 0): Fraction(1)}
    A = {(1, 0, 0, 0): Fraction(1)}
    B = {(0, 1, 0, 0): Fraction(1)}
    C = {(0, 0, 1, 0): Fraction(1)}
    D = {(0, 0, 0, 1): Fraction(1)}
    if coords == "matrix":
        ys = (A, B, C, D)
    elif coords == "second_kind":
        inv = {(0, 0, 0, k): Fraction((-1) ** k) for k in range(deg + 1)}   # 1/(1+D)
        t1 = _tp_mul(B, inv, deg)
        t4 = _tp_mul(C, inv, deg)
        v1 = dict(A)
        for k, v in _tp_mul(_tp_mul(B, C, deg), inv, deg).items():
            v1[k] = v1.get(k, 0) - v
        ys = (t1, v1, D, t4)
    else:
        raise ParameterError(f"unknown coordinates {coords!r}")
    out = one
    for y, k in zip(ys, mu):
        for _ in range(k):
            out = _tp_mul(out, y, deg)
    return out


def _pairings_for_monomial(F: TPoly, D: int) -> Dict[Index, Fraction]:
    """<K_nu, F> for all |nu| <= D."""
    out: Dict[Index, Fraction] = {}
    G4 = _tp_truncate(F, D)
    for n4 in range(D + 1):
        if n4:
            G4 = {k: v / n4 for k, v in _tp_derive("f", G4, D - n4).items()}
        G3 = G4
        for n3 in range(D - n4 + 1):
            if n3:
                G3 = _binom_step("h2", G3, n3, D - n4 - n3)
            G2 = G3
            for n2 in range(D - n4 - n3 + 1):
                if n2:
                    G2 = _binom_step("h1", G2, n2, D - n4 - n3 - n2)
                G1 = G2
                for n1 in range(D - n4 - n3 - n2 + 1):
                    if n1:
                        G1 = {k: v / n1 for k, v in
                              _tp_derive("e", G1, D - n4 - n3 - n2 - n1).items()}
                    val = G1.get((0, 0, 0, 0), Fraction(0))
                    if val:
                        out[(n1, n2, n3, n4)] = val
    return out


def _binom_step(gen: str, G: TPoly, k: int, deg: int) -> TPoly:
    """From ``(R choose k-1) F`` to ``(R choose k) F = (R - (k-1)) (R choose k-1) F / k``."""
    RG = _tp_derive(gen, G, deg)
    out = dict(RG)
    for m, v in G.items():
        if sum(m) <= deg:
            out[m] = out.get(m, 0) - (k - 1) * v
    return {m: v / k for m, v in out.items() if v}


def _cache_path(name: str):
    root = os.environ.get("VERIFY_CACHE_DIR")
    if not root:
        return None
    return os.path.join(root, name)


@lru_cache(maxsize=None)
def pairing_table(D: int, coords: str = "second_kind") -> Dict[Tuple[Index, Index], Fraction]:
    """Nonzero ``<K_nu, Y^mu>`` for ``|nu|, |mu| <= D`` at depth n = 0."""
    if coords not in COORDS:
        raise ParameterError(f"unknown coordinates {coords!r}")
    path = _cache_path(f"pairing_{coords}_{D}.json")
    if path and os.path.exists(path):
        with open(path) as fh:
            raw = json.load(fh)
        return {(tuple(r[0]), tuple(r[1])): Fraction(r[2]) for r in raw}
    table = {}
    for mu in indices_up_to(D):
        F = _local_monomial(mu, coords, D)
        for nu, v in _pairings_for_monomial(F, D).items():
            table[(nu, mu)] = v
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as fh:
            json.dump([[list(k[0]), list(k[1]), str(v)] for k, v in sorted(table.items())], fh)
    return table


def duality_pairing(nu: Index, mu: Index, params: LevelParams, coords: str = "second_kind") -> Fraction:
    """Pairing of the (scaled) Kostant element ``nu`` with the coordinate monomial ``mu``.

    For ``n >= 1`` the element is ``p^(n|nu|) K_nu`` and the coordinates are
    divided by ``p^n``.  ``coords="matrix"`` uses ``(a-1, b, c, d-1)``;
    ``coords="second_kind"`` uses ``(b/d, det/d - 1, d - 1, c/d)``.
    """
    nu, mu = tuple(nu), tuple(mu)
    D = max(sum(nu), sum(mu))
    base = pairing_table(max(D, 1), coords).get((nu, mu), Fraction(0))
    return base * Fraction(params.p) ** (params.n * (sum(nu) - sum(mu)))


def duality_pairing_direct(nu: Index, mu: Index, params: LevelParams, coords: str = "second_kind") -> Fraction:
    """Same value computed with sympy through :func:`regular_action` (slow reference route)."""
    K = PBWElement.basis_element(nu, "kostant")
    F = coordinate_monomial(mu, coords)
    val = evaluate_at_identity(regular_action(K, F))
    val = Fraction(int(val.p), int(val.q))
    return val * Fraction(params.p) ** (params.n * (sum(nu) - sum(mu)))


def pairing_delta_report(D: int, params: LevelParams, coords: str = "second_kind") -> dict:
    """Compare the pairing with the Kronecker delta on ``|nu|, |mu| <= D``."""
    idx = indices_up_to(D)
    table = pairing_table(D, coords)
    scale = params.p ** params.n
    failures = []
    for nu in idx:
        for mu in idx:
            v = table.get((nu, mu), Fraction(0)) * Fraction(scale) ** (sum(nu) - sum(mu))
            want = 1 if nu == mu else 0
            if v != want:
                failures.append({"nu": nu, "mu": mu, "value": v})
    return {"p": params.p, "n": params.n, "D": D, "coords": coords, "pairs": len(idx) ** 2,
            "ok": not failures, "mismatches": len(failures),
            "counterexample": failures[0] if failures else None}


def matrix_partner(nu: Index) -> Index:
    """Matrix monomial whose leading term matches ``K_nu``: e <-> b, h1 <-> a-1, h2 <-> d-1, f <-> c."""
    return (nu[1], nu[0], nu[3], nu[2])


def pairing_is_unitriangular(D: int) -> bool:
    """Literal matrix-coordinate pairing: 1 against the partner monomial, and
    every other nonzero value pairs a higher-degree ``nu`` with a lower-degree ``mu``."""
    table = pairing_table(D, "matrix")
    if any(table.get((nu, matrix_partner(nu))) != 1 for nu in indices_up_to(D)):
        return False
    return all(sum(nu) > sum(mu) for (nu, mu), v in table.items()
               if v and mu != matrix_partner(nu))
