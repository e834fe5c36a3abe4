"""Polynomials and differential operators on the two affine charts of P^1.

The x-chart has coordinate ``x`` and the y-chart ``y = 1/x``; the two
derivations are related by ``d/dx = -y^2 d/dy``.  Operators are kept in the
normal form ``sum_k f_k * D^k`` with all derivatives on the right.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Union

from .arith import LevelParams, Scalar, dp_coeff, is_p_integral

CHARTS = ("x", "y", "t")  # "t": local coordinate of a model chart


class ChartError(ValueError):
    pass


class NotExtendable(ValueError):
    """The operator has a pole on the other chart."""


class Poly:
    """Sparse Laurent polynomial in one variable with exact rational coefficients.

    Negative exponents are allowed so that chart changes can be carried out
    before deciding whether a result is a genuine polynomial.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Union[Mapping[int, Scalar], Iterable[Scalar], None] = None):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, Mapping):
            c = {int(k): Fraction(v) for k, v in coeffs.items() if v != 0}
        else:
            c = {k: Fraction(v) for k, v in enumerate(coeffs) if v != 0}
        self._c: Dict[int, Fraction] = c

    @classmethod
    def _raw(cls, c: Dict[int, Fraction]) -> "Poly":
        obj = cls.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> "Poly":
        return cls({k: c})

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({0: c})

    # -- inspection --
    def items(self):
        return sorted(self._c.items())

    def coeff(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> Union[int, float]:
        return max(self._c) if self._c else -math.inf

    @property
    def low_degree(self) -> Union[int, float]:
        return min(self._c) if self._c else math.inf

    def is_polynomial(self) -> bool:
        return not self._c or min(self._c) >= 0

    def coefficients(self) -> list:
        """Dense coefficient list ``[c_0, ..., c_deg]`` (polynomials only)."""
        if not self._c:
            return []
        if not self.is_polynomial():
            raise ValueError("Laurent polynomial has no dense coefficient list")
        return [self.coeff(k) for k in range(self.degree + 1)]

    def is_p_integral(self, p: int) -> bool:
        return all(is_p_integral(v, p) for v in self._c.values())

    # -- arithmetic --
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return Poly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Fraction(other)
            if other == 0:
                return Poly()
            return Poly._raw({k: v * other for k, v in self._c.items()})
        c: Dict[int, Fraction] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return Poly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Poly.const(1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def derivative(self, times: int = 1) -> "Poly":
        c = {}
        for k, v in self._c.items():
            f = 1
            for i in range(times):
                f *= k - i
            if f:
                c[k - times] = v * f
        return Poly._raw(c)

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        return sum((v * x ** k for k, v in self._c.items()), Fraction(0))

    def invert_variable(self) -> "Poly":
        """``f(1/t)``."""
        return Poly._raw({-k: v for k, v in self._c.items()})

    def shift_degree(self, s: int) -> "Poly":
        """``t^s * f(t)``."""
        return Poly._raw({k + s: v for k, v in self._c.items()})

    def substitute_affine(self, a: Scalar, scale: Scalar) -> "Poly":
        """``f(a + scale * t)`` for a polynomial ``f``."""
        shifted = taylor_shift(self, a)
        scale = Fraction(scale)
        return Poly._raw({k: v * scale ** k for k, v in enumerate(shifted) if v})

    def __repr__(self):
        return f"Poly({dict(self.items())})"

    def format(self, var: str = "x") -> str:
        if not self._c:
            return "0"
        return " + ".join(f"{_fmt_q(v)}*{var}^{k}" for k, v in self.items())


def taylor_shift(f: Poly, a: Scalar) -> list:
    """Coefficients ``c_k`` with ``f(x) = sum_k c_k (x - a)^k``."""
    if not f.is_polynomial():
        raise ValueError("taylor_shift needs a polynomial")
    coeffs = f.coefficients()
    a = Fraction(a)
    n = len(coeffs)
    out = []
    for k in range(n):
        s = Fraction(0)
        apow = Fraction(1)
        for j in range(k, n):
            if coeffs[j]:
                s += math.comb(j, k) * coeffs[j] * apow
            apow *= a
        out.append(s)
    return out


def _fmt_q(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class DiffOperator:
    """``sum_k terms[k] * D^k`` on one chart, derivatives to the right."""

    __slots__ = ("chart", "terms")

    def __init__(self, terms: Mapping[int, Poly] = None, chart: str = "x"):
        if chart not in CHARTS:
            raise ChartError(f"unknown chart {chart!r}")
        self.chart = chart
        self.terms: Dict[int, Poly] = {
            int(k): v for k, v in (terms or {}).items() if not v.is_zero()
        }

    @classmethod
    def monomial(cls, k: int, j: int, c: Scalar = 1, chart: str = "x") -> "DiffOperator":
        """``c * t^k * D^j``."""
        return cls({j: Poly.monomial(k, c)}, chart)

    @classmethod
    def scalar(cls, c: Scalar, chart: str = "x") -> "DiffOperator":
        return cls({0: Poly.const(c)}, chart)

    @property
    def order(self) -> int:
        return max(self.terms) if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, k: int) -> Poly:
        return self.terms.get(k, Poly())

    def _check(self, other):
        if self.chart != other.chart:
            raise ChartError(f"chart mismatch: {self.chart} vs {other.chart}")

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            other = DiffOperator.scalar(other, self.chart)
        self._check(other)
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t[k] + v if k in t else v
        return DiffOperator(t, self.chart)

    __radd__ = __add__

    def __neg__(self):
        return DiffOperator({k: -v for k, v in self.terms.items()}, self.chart)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "DiffOperator":
        return DiffOperator({k: v * c for k, v in self.terms.items()}, self.chart)

    def left_multiply(self, f: Poly) -> "DiffOperator":
        return DiffOperator({k: f * v for k, v in self.terms.items()}, self.chart)

    def __mul__(self, other):
        if isinstance(other, DiffOperator):
            return compose(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = DiffOperator.scalar(1, self.chart)
        for _ in range(e):
            out = compose(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart, frozenset(self.terms.items())))

    def __repr__(self):
        return f"DiffOperator({format_operator(self)!r}, chart={self.chart!r})"


def compose(A: DiffOperator, B: DiffOperator) -> DiffOperator:
    """Normal form of ``A o B`` via ``D^k f = sum_j C(k,j) f^(j) D^(k-j)``."""
    A._check(B)
    out: Dict[int, Poly] = {}
    for k, f in A.terms.items():
        for l, g in B.terms.items():
            gj = g
            for j in range(k + 1):
                if j:
                    gj = gj.derivative()
                if gj.is_zero():
                    break
                term = f * gj * math.comb(k, j)
                key = k - j + l
                out[key] = out[key] + term if key in out else term
    return DiffOperator(out, A.chart)


def binomial_of_operator(D: DiffOperator, nu: int) -> DiffOperator:
    """``D(D-1)...(D-nu+1)/nu!`` in normal form."""
    out = DiffOperator.scalar(1, D.chart)
    for i in range(nu):
        out = compose(out, D - i)
    return out.scale(Fraction(1, math.factorial(nu)))


@lru_cache(maxsize=None)
def _swap_power(j: int) -> DiffOperator:
    """Normal form of ``(-t^2 D_t)^j`` (the image of the other chart's ``D^j``)."""
    gen = DiffOperator.monomial(2, 1, -1)
    return gen ** j


def chart_swap(A: DiffOperator, require_polynomial: bool = True) -> DiffOperator:
    """Rewrite ``A`` on the other chart using ``x = 1/y`` and ``D_x = -y^2 D_y``."""
    if A.chart == "t":
        raise ChartError("local chart operators have no partner chart")
    target = "y" if A.chart == "x" else "x"
    out = DiffOperator(chart=target)
    for j, f in A.terms.items():
        piece = _swap_power(j).left_multiply(f.invert_variable())
        out = out + DiffOperator(piece.terms, target)
    if require_polynomial and not all(v.is_polynomial() for v in out.terms.values()):
        raise NotExtendable("not extendable to other chart")
    return out


def dp_normal_form(A: DiffOperator, params: LevelParams) -> Dict[int, Poly]:
    """Coefficients of ``A`` relative to the level-m generators ``(q_j!/j!) D^j``."""
    return {j: f * (1 / dp_coeff(j, params).value) for j, f in A.terms.items()}


def _chart_level_m_integral(A: DiffOperator, params: LevelParams) -> bool:
    return all(g.is_polynomial() and g.is_p_integral(params.p)
               for g in dp_normal_form(A, params).values())


def is_global_section_level_m(A: DiffOperator, params: LevelParams) -> bool:
    """Whether ``A`` is a global section of the level-m operator sheaf on P^1."""
    if not _chart_level_m_integral(A, params):
        return False
    try:
        other = chart_swap(A)
    except NotExtendable:
        return False
    return _chart_level_m_integral(other, params)


class GradedSymbol:
    """``coeff(t) * D^{(x) d}`` in the commutative symbol algebra of one chart."""

    __slots__ = ("d", "coeff", "chart")

    def __init__(self, d: int, coeff: Union[Poly, Scalar], chart: str = "x"):
        if chart not in CHARTS:
            raise ChartError(f"unknown chart {chart!r}")
        self.d = d
        self.coeff = coeff if isinstance(coeff, Poly) else Poly.const(coeff)
        self.chart = chart

    def __mul__(self, other):
        if isinstance(other, GradedSymbol):
            if other.chart != self.chart:
                raise ChartError("chart mismatch")
            return GradedSymbol(self.d + other.d, self.coeff * other.coeff, self.chart)
        return GradedSymbol(self.d, self.coeff * other, self.chart)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return GradedSymbol(self.d * e, self.coeff ** e, self.chart)

    def __eq__(self, other):
        if not isinstance(other, GradedSymbol):
            return NotImplemented
        if self.coeff.is_zero() and other.coeff.is_zero():
            return True
        return (self.d, self.coeff, self.chart) == (other.d, other.coeff, other.chart)

    def __hash__(self):
        return hash((self.d, self.coeff, self.chart))

    def swap_chart(self) -> "GradedSymbol":
        """``f(x) D_x^d = (-1)^d y^{2d} f(1/y) D_y^d``."""
        if self.chart == "t":
            raise ChartError("local chart symbols have no partner chart")
        g = self.coeff.invert_variable().shift_degree(2 * self.d) * (-1) ** self.d
        return GradedSymbol(self.d, g, "y" if self.chart == "x" else "x")

    def __repr__(self):
        return f"GradedSymbol(d={self.d}, {self.coeff.format(self.chart)}, chart={self.chart!r})"


def h0_tensor_basis(d: int) -> list:
    """The ``2d+1`` symbols ``x^k D^{(x) d}``, ``0 <= k <= 2d``."""
    if d < 0:
        raise ValueError("d must be >= 0")
    return [GradedSymbol(d, Poly.monomial(k)) for k in range(2 * d + 1)]


def symbol_of(A: DiffOperator) -> GradedSymbol:
    if A.is_zero():
        raise ValueError("the zero operator has no principal symbol")
    return GradedSymbol(A.order, A.terms[A.order], A.chart)


# -- text grammar: term := rational '*' 'x^'k '*' 'Dx^'j ; operator := term ('+' term)* --

_TERM = re.compile(
    r"^\s*(?P<c>[+-]?\d+(?:/\d+)?)\s*\*\s*(?P<v>[xy])\s*\^\s*(?P<k>-?\d+)"
    r"\s*\*\s*D(?P<w>[xy])\s*\^\s*(?P<j>\d+)\s*$"
)


def parse_operator(text: str) -> DiffOperator:
    """Parse e.g. ``"1*x^2*Dx^1 + -1/2*x^0*Dx^0"``."""
    chart = None
    out: Dict[int, Poly] = {}
    for raw in text.split("+"):
        if not raw.strip():
            raise ValueError(f"empty term in {text!r}")
        m = _TERM.match(raw)
        if m is None:
            raise ValueError(f"cannot parse term {raw.strip()!r}")
        if m["v"] != m["w"]:
            raise ValueError(f"mixed charts in term {raw.strip()!r}")
        if chart is None:
            chart = m["v"]
        elif chart != m["v"]:
            raise ValueError("operator mixes charts")
        j = int(m["j"])
        t = Poly.monomial(int(m["k"]), Fraction(m["c"]))
        out[j] = out[j] + t if j in out else t
    return DiffOperator(out, chart or "x")


def format_operator(A: DiffOperator) -> str:
    v = A.chart
    parts = []
    for j in sorted(A.terms):
        for k, c in A.terms[j].items():
            parts.append(f"{_fmt_q(c)}*{v}^{k}*D{v}^{j}")
    return " + ".join(parts) if parts else f"0*{v}^0*D{v}^0"
