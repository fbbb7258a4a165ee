"""Integer and rational polynomials in one variable, coefficients constant-first.

``IntPolynomial`` is the atom of the whole laboratory: best approximation
candidates, their shifted copies ``T^i * P``, and the inputs of every rank
computation.  ``RationalPolynomial`` carries the bound polynomials and the
cleared-denominator forms handed to root isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ZeroPolynomial


def _strip(coeffs: Sequence) -> tuple:
    """Drop trailing (highest-index) zeros."""
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


@dataclass(frozen=True)
class IntPolynomial:
    """Integer-coefficient polynomial, constant term first.

    The canonical sign convention used for serialized approximants (first
    nonzero coefficient positive) is applied by :meth:`canonical`, not by the
    constructor, so intermediate arithmetic can hold either sign.
    """

    coeffs: tuple

    def __init__(self, coeffs: Iterable[int]):
        object.__setattr__(self, "coeffs", _strip([int(c) for c in coeffs]))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    def height(self) -> int:
        """Maximum absolute coefficient; 0 for the zero polynomial."""
        return max((abs(c) for c in self.coeffs), default=0)

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def canonical(self) -> "IntPolynomial":
        """Sign-canonical representative: first nonzero coefficient positive."""
        for c in self.coeffs:
            if c != 0:
                return self if c > 0 else IntPolynomial([-a for a in self.coeffs])
        return self

    def primitive(self) -> "IntPolynomial":
        g = self.content()
        if g <= 1:
            return self
        return IntPolynomial([c // g for c in self.coeffs])

    def shift_degree(self, i: int) -> "IntPolynomial":
        """Multiply by T^i."""
        if self.is_zero:
            return self
        return IntPolynomial((0,) * i + self.coeffs)

    def eval_fraction(self, x: Fraction) -> Fraction:
        """Exact evaluation at a rational point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPolynomial([a[i] + (b[i] if i < len(b) else 0) for i in range(len(a))])

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + IntPolynomial([-c for c in other.coeffs])

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial([-c for c in self.coeffs])

    def scale(self, k: int) -> "IntPolynomial":
        return IntPolynomial([k * c for c in self.coeffs])

    def vector(self, ambient_degree: int) -> tuple:
        """Coefficient vector padded to length ambient_degree + 1."""
        out = list(self.coeffs) + [0] * (ambient_degree + 1 - len(self.coeffs))
        return tuple(out)

    def pretty(self, var: str = "T") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                mon = var if i == 1 else f"{var}^{i}"
                if c == 1:
                    parts.append(mon)
                elif c == -1:
                    parts.append(f"-{mon}")
                else:
                    parts.append(f"{c}*{mon}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def taylor_shift(poly: IntPolynomial, c: int) -> IntPolynomial:
    """P(T + c) by repeated synthetic division, exact."""
    coeffs = list(poly.coeffs)
    n = len(coeffs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            coeffs[j] += c * coeffs[j + 1]
    return IntPolynomial(coeffs)


@dataclass(frozen=True)
class RationalPolynomial:
    """Rational-coefficient polynomial, constant term first."""

    coeffs: tuple

    def __init__(self, coeffs: Iterable):
        object.__setattr__(self, "coeffs", _strip([Fraction(c) for c in coeffs]))

    @classmethod
    def from_int(cls, poly: IntPolynomial) -> "RationalPolynomial":
        return cls(poly.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RationalPolynomial":
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial([-c for c in self.coeffs])

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return RationalPolynomial(
            [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(m)]
        )

    def scale(self, k) -> "RationalPolynomial":
        k = Fraction(k)
        return RationalPolynomial([k * c for c in self.coeffs])

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return RationalPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m)]
        )

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        if self.is_zero or other.is_zero:
            return RationalPolynomial([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    def __pow__(self, k: int) -> "RationalPolynomial":
        out = RationalPolynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def rem(self, other: "RationalPolynomial") -> "RationalPolynomial":
        """Remainder of self divided by other (other nonzero)."""
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        r = list(self.coeffs)
        d = other.degree
        lc = other.coeffs[-1]
        while len(r) - 1 >= d and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            q = r[-1] / lc
            shift = len(r) - 1 - d
            for i, c in enumerate(other.coeffs):
                r[shift + i] -= q * c
            r.pop()
        return RationalPolynomial(r)

    def gcd(self, other: "RationalPolynomial") -> "RationalPolynomial":
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.rem(b)
        if a.is_zero:
            return a
        return a.scale(Fraction(1, 1) / a.coeffs[-1])

    def squarefree_part(self) -> "RationalPolynomial":
        if self.degree <= 0:
            return self
        g = self.gcd(self.derivative())
        if g.degree <= 0:
            return self
        # exact division self / g
        num = list(self.coeffs)
        den = g.coeffs
        out = [Fraction(0)] * (len(num) - len(den) + 1)
        for i in range(len(out) - 1, -1, -1):
            q = num[i + len(den) - 1] / den[-1]
            out[i] = q
            for j, c in enumerate(den):
                num[i + j] -= q * c
        return RationalPolynomial(out)

    def to_int_primitive(self) -> IntPolynomial:
        """Clear denominators and remove content; sign preserved."""
        if self.is_zero:
            return IntPolynomial([])
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        return IntPolynomial([c // g for c in ints])
