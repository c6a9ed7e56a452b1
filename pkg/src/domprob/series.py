"""Truncated formal power series with exact rational coefficients.

A :class:`Poly` is an immutable coefficient vector; index ``i`` holds the
coefficient of ``x**i``.  Trailing zeros are allowed and carried as part of
``degree_bound``, which is how the known prefix of an infinite series is
represented.  Nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Sequence


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'num/den' string")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or an integer literal."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed rational literal {text!r}") from None


def format_rational(q: Fraction) -> str:
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = (0,)):
        coeffs = tuple(to_fraction(c) for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs if coeffs else (Fraction(0),))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1

    def degree(self) -> int | None:
        """Largest index with a nonzero coefficient, or None for the zero series."""
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return None

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def trimmed(self) -> "Poly":
        deg = self.degree()
        return Poly(self.coeffs[: (0 if deg is None else deg) + 1])

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.trimmed().coeffs == other.trimmed().coeffs

    def __hash__(self):
        return hash(self.trimmed().coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __add__(self, other: "Poly") -> "Poly":
        size = max(len(self), len(other))
        return Poly(self[i] + other[i] for i in range(size))

    def __sub__(self, other: "Poly") -> "Poly":
        size = max(len(self), len(other))
        return Poly(self[i] - other[i] for i in range(size))

    def __mul__(self, other):
        if isinstance(other, Poly):
            return multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = to_fraction(c)
        return Poly(c * x for x in self.coeffs)

    def evaluate(self, x) -> Fraction:
        x = to_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def multiply(f: Poly, g: Poly, degree_cap: int | None = None) -> Poly:
    """Cauchy product; the result has ``degree_bound`` equal to the sum of the inputs'."""
    a, b = f.coeffs, g.coeffs
    size = len(a) + len(b) - 1
    if degree_cap is not None:
        size = min(size, degree_cap + 1)
    out = [Fraction(0)] * size
    for i, x in enumerate(a):
        if not x or i >= size:
            continue
        for j, y in enumerate(b[: size - i]):
            if y:
                out[i + j] += x * y
    return Poly(out)


def power(p: Poly, k: int, degree_cap: int | None = None) -> Poly:
    """``p(x)**k`` with ``p**0 == 1``; coefficients above ``degree_cap`` are dropped."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return _power(p, k, degree_cap)


@lru_cache(maxsize=4096)
def _power(p: Poly, k: int, degree_cap: int | None) -> Poly:
    if k == 0:
        return Poly.one()
    if k == 1:
        return truncate(p, degree_cap) if degree_cap is not None else p
    return multiply(_power(p, k - 1, degree_cap), p, degree_cap)


def truncate(p: Poly, t: int) -> Poly:
    """Keep the coefficients of degree 0..t."""
    return Poly(p.coeffs[: t + 1])


def coeff_dominated_by(f: Poly, g: Poly) -> bool:
    """True iff f ⊑ g, i.e. every coefficient of f is <= that of g."""
    size = max(len(f), len(g))
    return all(f[i] <= g[i] for i in range(size))


def formal_derivative(p: Poly, order: int = 1) -> Poly:
    coeffs = list(p.coeffs)
    for _ in range(order):
        if len(coeffs) <= 1:
            coeffs = [Fraction(0)]
            break
        coeffs = [n * c for n, c in enumerate(coeffs)][1:]
    return Poly(coeffs)


def taylor_coefficient(p: Poly, j: int) -> Fraction:
    """``(1/j!) (d/dx)^j p`` evaluated at 0, which must equal ``p[j]``."""
    return formal_derivative(p, j)[0] / factorial(j)


def leibniz_derivative(f: Poly, g: Poly, n: int) -> Poly:
    """n-th derivative of ``f*g`` expanded with the generalized product rule."""
    total = Poly((0,))
    for k in range(n + 1):
        term = multiply(formal_derivative(f, n - k), formal_derivative(g, k))
        total = total + term.scale(comb(n, k))
    return total


def row_product(parts: Sequence[int], p: Poly, t: int) -> Poly:
    """``prod_i truncate(p**parts[i], t)``; the empty product is 1.

    Rows of length zero contribute the constant 1.
    """
    out = Poly.one()
    for k in parts:
        if k:
            out = multiply(out, power(p, k, t))
    return out


def parse_poly(text: str) -> Poly:
    """Parse ``"1,1/2,0,1/3"`` (index = degree)."""
    text = text.strip()
    if not text:
        raise ValueError("empty series literal")
    return Poly(parse_rational(tok) for tok in text.split(","))


def format_poly(p: Poly) -> str:
    return ",".join(format_rational(c) for c in p.coeffs)
