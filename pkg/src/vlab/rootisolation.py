"""Exact real root isolation and refinement for rational polynomials.

Sturm sequences over exact rational arithmetic: no floating-point filters
anywhere, so the returned isolating intervals and root counts are certified.
The degrees in play (bound polynomials of degree <= 10) make the classical
method comfortably fast.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Tuple

from .enclosure import RealEnclosure
from .errors import NotIsolating, ZeroPolynomial
from .polynomials import IntPolynomial, RationalPolynomial


def sturm_chain(poly: RationalPolynomial) -> List[RationalPolynomial]:
    """Sturm sequence of the squarefree part of ``poly``."""
    f = poly.squarefree_part()
    chain = [f, f.derivative()]
    while not chain[-1].is_zero and chain[-1].degree > 0:
        chain.append(-chain[-2].rem(chain[-1]))
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _sign_variations(values) -> int:
    count = 0
    prev = 0
    for v in values:
        s = (v > 0) - (v < 0)
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def count_roots_open(chain: List[RationalPolynomial], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the open interval (lo, hi)."""
    f = chain[0]
    v = _sign_variations([p(lo) for p in chain]) - _sign_variations([p(hi) for p in chain])
    # Sturm counts roots in (lo, hi]; remove hi if it is a root
    if f(hi) == 0:
        v -= 1
    return v


def cauchy_root_bound(poly: RationalPolynomial) -> Fraction:
    """All real roots lie in (-B, B)."""
    if poly.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    lc = abs(poly.coeffs[-1])
    return 1 + max((abs(c) for c in poly.coeffs[:-1]), default=Fraction(0)) / lc


def isolate_roots(poly: RationalPolynomial, lo, hi) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint rational intervals inside (lo, hi), each holding exactly one
    real root of ``poly``, jointly covering all roots in (lo, hi).

    Degenerate pairs (r, r) mark exact rational roots.
    """
    if poly.is_zero:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    chain = sturm_chain(poly)
    f = chain[0]

    out: List[Tuple[Fraction, Fraction]] = []

    def emit(a: Fraction, b: Fraction):
        # shrink until neither endpoint is a root, so the interval brackets
        # a sign change (subdivision points may themselves be roots)
        while f(a) == 0 or f(b) == 0:
            m = (a + b) / 2
            if f(m) == 0:
                out.append((m, m))
                return
            if count_roots_open(chain, a, m) == 1:
                b = m
            else:
                a = m
        out.append((a, b))

    def recurse(a: Fraction, b: Fraction, count: int):
        if count == 0:
            return
        if count == 1:
            emit(a, b)
            return
        m = (a + b) / 2
        if f(m) == 0:
            out.append((m, m))
            recurse(a, m, count_roots_open(chain, a, m))
            recurse(m, b, count_roots_open(chain, m, b))
        else:
            cl = count_roots_open(chain, a, m)
            recurse(a, m, cl)
            recurse(m, b, count - cl)

    recurse(lo, hi, count_roots_open(chain, lo, hi))
    out.sort()
    return out


def isolate_all_real_roots(poly: RationalPolynomial) -> List[Tuple[Fraction, Fraction]]:
    bound = cauchy_root_bound(poly)
    return isolate_roots(poly, -bound, bound)


def refine_root(poly: RationalPolynomial, isolating, tol) -> RealEnclosure:
    """Shrink an isolating interval to an enclosure of radius <= tol by
    bisection on exact signs."""
    a, b = Fraction(isolating[0]), Fraction(isolating[1])
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a == b:
        if poly(a) != 0:
            raise NotIsolating("degenerate interval is not a root")
        return RealEnclosure.exact(a)
    fa, fb = poly(a), poly(b)
    if fa == 0:
        return RealEnclosure.exact(a)
    if fb == 0:
        return RealEnclosure.exact(b)
    sa = 1 if fa > 0 else -1
    sb = 1 if fb > 0 else -1
    if sa == sb:
        raise NotIsolating("no sign change across the isolating interval")
    while b - a > 2 * tol:
        m = (a + b) / 2
        fm = poly(m)
        if fm == 0:
            return RealEnclosure.exact(m)
        if (1 if fm > 0 else -1) == sa:
            a = m
        else:
            b = m
    return RealEnclosure.from_endpoints(a, b)


def poly_eval_enclosure(poly, x: RealEnclosure) -> RealEnclosure:
    """Certified Horner evaluation of an integer or rational polynomial at a ball."""
    coeffs = poly.coeffs if isinstance(poly, (IntPolynomial, RationalPolynomial)) else tuple(poly)
    acc = RealEnclosure.exact(0, x.precision_bits)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc.compress()
