"""Verified search for best approximation polynomials.

Two independent routes compute the same objects:

* ``min_poly_at_height`` is the brute-force oracle: one full coefficient box
  at a single height cap, minimum taken with certified comparisons.
* ``best_approx_sequence`` is the incremental engine: an exact pass over the
  small-height box seeds the running record, then a vectorized prefilter
  scans all higher coefficient boxes and only candidates that could beat the
  running record survive to exact certification.

Both prune with *certified* bounds: the float prefilter carries a rigorous
error bound, so a pruned box provably cannot contain a record; every kept
candidate is re-evaluated in exact integer fixed-point arithmetic.
Comparisons whose enclosures overlap escalate precision (doubling, up to a
cap); for algebraic specs an exact tie/zero decision takes over at the cap,
for presumed-transcendental specs PrecisionExhausted propagates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..enclosure import RealEnclosure, dyadic_round, ln, DEFAULT_PRECISION_CAP
from ..errors import BudgetExceeded, ExactZeroDetected, InsufficientDigits, PrecisionExhausted
from ..polynomials import IntPolynomial
from ..realspec import RealSpec, real_from_spec
from .records import BestApproxRecord, SequenceData

#: incremental search defaults per degree, a desk-scale knob
DEFAULT_HEIGHT_LIMITS = {1: 10**4, 2: 500, 3: 60, 4: 25}

_EXACT_PHASE_HEIGHT = {1: 8, 2: 8, 3: 6}  # full-box exact enumeration cutoff
_BASE_BITS = 128


class _FixedPointXi:
    """Integer fixed-point view of the powers of xi.

    ``pows[i] / 2^bits`` approximates xi^i with certified error
    ``errs[i] / 2^bits``; dot products with integer coefficient vectors give
    certified enclosures of P(xi) scaled by 2^bits.
    """

    def __init__(self, xi: RealEnclosure, n: int, bits: int):
        self.bits = bits
        self.scale = 1 << bits
        self.pows: List[int] = []
        self.errs: List[int] = []
        power = RealEnclosure.exact(1, xi.precision_bits)
        for i in range(n + 1):
            mid = dyadic_round(power.mid, bits)
            err = power.rad + abs(power.mid - mid)
            self.pows.append(int(mid * self.scale))
            self.errs.append(int(-((-err.numerator * self.scale) // err.denominator)) + 1)
            power = (power * xi).compress((xi.precision_bits or bits) + 8)

    def raw(self, coeffs: Sequence[int]) -> Tuple[int, int]:
        """(S, E) with |P(xi) * 2^bits - S| <= E."""
        s = 0
        e = 0
        for c, p, pe in zip(coeffs, self.pows, self.errs):
            if c:
                s += c * p
                e += abs(c) * pe
        return s, e

    def abs_interval(self, coeffs: Sequence[int]) -> Tuple[int, int]:
        """Integer interval [lo, hi] with |P(xi)| * 2^bits inside it."""
        s, e = self.raw(coeffs)
        s = abs(s)
        return max(0, s - e), s + e

    def value_ball(self, coeffs: Sequence[int]) -> RealEnclosure:
        s, e = self.raw(coeffs)
        return RealEnclosure(Fraction(s, self.scale), Fraction(e, self.scale), self.bits)

    def float_powers(self) -> Tuple[np.ndarray, np.ndarray]:
        """(float powers, rigorous per-power float error bounds)."""
        mids = np.array([p / self.scale for p in self.pows], dtype=np.float64)
        # conversion int/2^bits -> float is within 1 ulp; add the fixed-point error
        errs = np.array(
            [e / self.scale + abs(m) * 2.3e-16 + 5e-300 for e, m in zip(self.errs, mids)],
            dtype=np.float64,
        )
        return mids, errs


@dataclass
class _SearchContext:
    """Escalating family of fixed-point views plus exact decision helpers."""

    xi_ball: RealEnclosure
    n: int
    spec: Optional[RealSpec] = None
    base_bits: int = _BASE_BITS
    cap_bits: int = DEFAULT_PRECISION_CAP

    def __post_init__(self):
        self._views: Dict[int, _FixedPointXi] = {}
        self._balls: Dict[int, RealEnclosure] = {int(self.xi_ball.precision_bits or 0): self.xi_ball}

    def _ball_at(self, bits: int) -> RealEnclosure:
        # the working ball needs radius well below 2^-bits (exact balls serve
        # any precision)
        need = bits + 64
        usable = [b for b in self._balls.values()
                  if b.rad == 0 or b.rad * (1 << need) <= max(Fraction(1), abs(b.mid))]
        if usable:
            return min(usable, key=lambda b: b.rad)
        if self.spec is None:
            raise PrecisionExhausted(
                f"xi enclosure too coarse for {bits}-bit comparisons and no spec to refine from")
        try:
            ball = real_from_spec(self.spec, need + 4)
        except InsufficientDigits as exc:
            raise PrecisionExhausted(
                f"decimal spec ran out of digits refining to {need} bits") from exc
        self._balls[need] = ball
        return ball

    def view(self, bits: int) -> _FixedPointXi:
        if bits not in self._views:
            self._views[bits] = _FixedPointXi(self._ball_at(bits), self.n, bits)
        return self._views[bits]

    def escalation_bits(self):
        bits = self.base_bits
        while True:
            yield bits
            if bits >= self.cap_bits:
                return
            bits = min(2 * bits, self.cap_bits)

    # -- exact decisions for algebraic specs ---------------------------------

    def exact_sign(self, poly: IntPolynomial) -> Optional[int]:
        """Exact sign of P(xi) when decidable, else None."""
        if self.xi_ball.is_exact:
            v = poly.eval_fraction(self.xi_ball.mid)
            return (v > 0) - (v < 0)
        form = self.spec.algebraic_form() if self.spec is not None else None
        if form is None:
            return None
        if form[0] == "rational":
            v = poly.eval_fraction(form[1])
            return (v > 0) - (v < 0)
        _, base, k = form
        residues = [0] * k
        for i, c in enumerate(poly.coeffs):
            residues[i % k] += c * base ** (i // k)
        if all(r == 0 for r in residues):
            return 0
        # provably nonzero; the ball sign resolves at finite precision
        from ..enclosure import nth_root

        bits = 128
        while True:
            root = nth_root(Fraction(base), k, bits)
            ball = RealEnclosure.exact(0, bits)
            for r in range(k - 1, -1, -1):
                ball = ball * root + residues[r]
            s = ball.sign()
            if s is not None:
                return s
            bits *= 2

    def is_exact_zero(self, poly: IntPolynomial) -> Optional[bool]:
        s = self.exact_sign(poly)
        return None if s is None else (s == 0)

    def values_exactly_equal(self, p1: IntPolynomial, p2: IntPolynomial) -> Optional[bool]:
        """Whether |P1(xi)| == |P2(xi)| exactly, when decidable."""
        for q in (p1 - p2, p1 + p2):
            z = self.is_exact_zero(q)
            if z is None:
                return None
            if z:
                return True
        return False


@dataclass(frozen=True)
class _Candidate:
    height: int
    coeffs: tuple  # canonical sign


def _canonical(coeffs: Sequence[int]) -> tuple:
    for c in coeffs:
        if c:
            return tuple(coeffs) if c > 0 else tuple(-x for x in coeffs)
    return tuple(coeffs)


def _compare_candidates(ctx: _SearchContext, a: tuple, b: tuple) -> int:
    """-1 / 0 / +1 comparing |A(xi)| against |B(xi)| with certified arithmetic."""
    for bits in ctx.escalation_bits():
        view = ctx.view(bits)
        lo_a, hi_a = view.abs_interval(a)
        lo_b, hi_b = view.abs_interval(b)
        if hi_a < lo_b:
            return -1
        if hi_b < lo_a:
            return 1
    eq = ctx.values_exactly_equal(IntPolynomial(a), IntPolynomial(b))
    if eq is True:
        return 0
    raise PrecisionExhausted(
        f"cannot separate |P(xi)| for {a} and {b} at {ctx.cap_bits} bits")


def _certify_nonzero(ctx: _SearchContext, coeffs: tuple) -> Tuple[int, int, int]:
    """(bits, lo, hi) certifying 0 < lo <= |P(xi)|*2^bits <= hi.

    Raises ExactZeroDetected when P(xi) == 0 exactly.
    """
    for bits in ctx.escalation_bits():
        lo, hi = ctx.view(bits).abs_interval(coeffs)
        if lo > 0:
            return bits, lo, hi
        z = ctx.is_exact_zero(IntPolynomial(coeffs))
        if z is True:
            raise ExactZeroDetected(
                f"P(xi) = 0 for P with coefficients {coeffs}: "
                "xi is algebraic of degree <= n", IntPolynomial(coeffs))
        if z is False:
            continue  # provably nonzero, keep escalating for a positive lower bound
    raise PrecisionExhausted(
        f"cannot certify P(xi) != 0 for coefficients {coeffs} at {ctx.cap_bits} bits")


def _min_candidate(ctx: _SearchContext, cands: List[tuple]) -> tuple:
    """Certified minimum of |P(xi)| with lexicographic tie-break.

    Large groups get a rigorous float prescreen first: a candidate whose
    float value minus its certified error bound exceeds the best float value
    plus that bound provably is not the minimum.
    """
    if len(cands) > 32:
        view = ctx.view(ctx.base_bits)
        mids, merrs = view.float_powers()
        sum_merr = float(np.sum(merrs))
        peak = float(np.max(np.abs(mids)))
        scored = []
        for c in cands:
            v = 0.0
            h = 0
            for i, ci in enumerate(c):
                if ci:
                    v += ci * mids[i]
                    h = max(h, abs(ci))
            err = h * sum_merr + (len(c) + 2) * 2.3e-16 * (len(c) * h * peak + 1.0)
            scored.append((abs(v), err, c))
        cutoff = min(av + err for av, err, _ in scored)
        cands = sorted(c for av, err, c in scored if av - err <= cutoff)
    best = cands[0]
    for c in cands[1:]:
        cmp = _compare_candidates(ctx, c, best)
        if cmp < 0 or (cmp == 0 and c < best):
            best = c
    return best


# ---------------------------------------------------------------------------
# Candidate generation
# ---------------------------------------------------------------------------


def _exact_box_candidates(n: int, height: int) -> List[_Candidate]:
    """All sign-canonical nonzero coefficient vectors with height <= height."""
    out = set()
    span = range(-height, height + 1)

    def rec(prefix: List[int], depth: int):
        if depth == n + 1:
            if any(prefix):
                out.add(_canonical(prefix))
            return
        for c in span:
            rec(prefix + [c], depth + 1)

    rec([], 0)
    return sorted(
        (_Candidate(max(map(abs, coeffs)), coeffs) for coeffs in out),
        key=lambda c: (c.height, c.coeffs),
    )


def _prefilter_candidates(ctx: _SearchContext, h_max: int, h_from: int,
                          threshold: float) -> List[_Candidate]:
    """Vectorized scan of all upper-coefficient boxes; returns every
    candidate of height in (h_from, h_max] whose value could be below
    ``threshold`` plus the forced-constant-term completions near it.

    Correctness: a pruned tuple provably has |P(xi)| above the threshold for
    every admissible constant term (float bounds carry rigorous error terms).
    """
    n = ctx.n
    view = ctx.view(ctx.base_bits)
    mids, merrs = view.float_powers()
    axes = [np.arange(-h_max, h_max + 1, dtype=np.float64) for _ in range(n)]
    grids = np.meshgrid(*axes, indexing="ij")
    s = np.zeros_like(grids[0])
    for i in range(n):
        s += grids[i] * mids[i + 1]
    habs = np.maximum.reduce([np.abs(g) for g in grids])
    # rigorous error of the float dot product for heights <= h_max
    dot_err = float(h_max) * float(np.sum(merrs[1:])) + (n + 3) * 2.3e-16 * float(
        np.max(np.abs(s)) + h_max * np.max(np.abs(mids)) + 1.0)
    r = np.rint(s)
    d = np.abs(s - r)
    thr = threshold + dot_err + 1e-12

    keep = d <= thr
    # clamp-to-(|a0*|-1) candidates only matter while the record is >= ~1/2
    clamp_inner = None
    if thr >= 0.47:
        clamp_inner = (1.0 - d <= thr) & (np.abs(r) > habs)
    # completions pushed beyond the height cap
    clamp_cap = (np.abs(r) > h_max) & (np.abs(s) - h_max <= thr)
    keep_any = keep | clamp_cap
    if clamp_inner is not None:
        keep_any |= clamp_inner
    keep_any &= habs > 0  # constants are covered by the exact phase

    idx = np.argwhere(keep_any)
    out = set()
    for flat in idx:
        upper = tuple(int(axes[i][flat[i]]) for i in range(n))
        h_u = max(abs(c) for c in upper)
        s_u, _ = view.raw((0,) + upper)
        floor = s_u >> view.bits
        for a0 in {-floor, -floor - 1}:
            cands = [a0]
            if abs(a0) > h_u:
                cands.append((abs(a0) - 1) * (1 if a0 > 0 else -1))
            if abs(a0) > h_max:
                cands.append(h_max * (1 if a0 > 0 else -1))
            for c0 in cands:
                if abs(c0) > h_max:
                    continue
                height = max(h_u, abs(c0))
                if h_from < height <= h_max:
                    out.add(_Candidate(height, _canonical((c0,) + upper)))
    return sorted(out, key=lambda c: (c.height, c.coeffs))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def naive_min_poly(xi: RealEnclosure, n: int, height: int) -> Tuple[IntPolynomial, RealEnclosure]:
    """Reference oracle: literal enumeration of the whole box with plain ball
    Horner evaluation, sharing nothing with the production engines.  Only
    viable for tiny boxes; used to validate the real paths in tests."""
    import itertools

    from ..rootisolation import poly_eval_enclosure

    best: Optional[tuple] = None
    best_ball: Optional[RealEnclosure] = None
    seen = set()
    for coeffs in itertools.product(range(-height, height + 1), repeat=n + 1):
        if not any(coeffs):
            continue
        c = _canonical(coeffs)
        if c in seen:
            continue
        seen.add(c)
        ball = abs(poly_eval_enclosure(IntPolynomial(c), xi))
        if best is None:
            best, best_ball = c, ball
            continue
        less = ball.strictly_less(best_ball)
        if less is True:
            best, best_ball = c, ball
        elif less is None:
            raise PrecisionExhausted(
                f"naive oracle cannot separate {c} from {best}; pass a finer xi")
    return IntPolynomial(best), best_ball


def min_poly_at_height(xi: RealEnclosure, n: int, height: int,
                       spec: Optional[RealSpec] = None,
                       cap_bits: int = DEFAULT_PRECISION_CAP,
                       ) -> Tuple[IntPolynomial, RealEnclosure]:
    """Brute-force minimizer of |P(xi)| over the whole coefficient box of the
    given height: the oracle the incremental search is checked against.

    Returns the canonical-sign minimizer and a certified enclosure of
    |P(xi)|.  Raises ExactZeroDetected when the minimum is exactly zero
    (xi algebraic of degree <= n) and PrecisionExhausted when candidates
    cannot be separated at the precision cap.
    """
    if height < 1 or n < 1:
        raise ValueError("need height >= 1 and n >= 1")
    ctx = _SearchContext(xi, n, spec=spec, cap_bits=cap_bits)
    small = _EXACT_PHASE_HEIGHT.get(n, 4)
    if height <= small:
        cands = [c.coeffs for c in _exact_box_candidates(n, height)]
    else:
        view = ctx.view(ctx.base_bits)
        mids, merrs = view.float_powers()
        axes = [np.arange(-height, height + 1, dtype=np.float64) for _ in range(n)]
        grids = np.meshgrid(*axes, indexing="ij")
        s = np.zeros_like(grids[0])
        for i in range(n):
            s += grids[i] * mids[i + 1]
        habs = np.maximum.reduce([np.abs(g) for g in grids])
        dot_err = float(height) * float(np.sum(merrs[1:])) + (n + 3) * 2.3e-16 * float(
            np.max(np.abs(s)) + height * np.max(np.abs(mids)) + 1.0)
        # best constant-term completion inside the box
        r = np.clip(np.rint(s), -height, height)
        d = np.abs(s - r)
        d = np.where(habs > 0, d, np.inf)  # constants handled explicitly
        m = float(np.min(d))
        thr = min(m + 2 * dot_err + 1e-12, 1.0)
        keep = d <= thr
        cands = {_canonical((1,) + (0,) * n)}  # P = 1, the constant fallback
        for flat in np.argwhere(keep):
            upper = tuple(int(axes[i][flat[i]]) for i in range(n))
            h_u = max(abs(c) for c in upper)
            s_u, _ = view.raw((0,) + upper)
            floor = s_u >> view.bits
            for a0 in (-floor, -floor - 1, -floor + 1):
                c0 = max(-height, min(height, a0))
                cands.add(_Candidate(max(h_u, abs(c0)), _canonical((c0,) + upper)).coeffs)
        cands = sorted(cands)
    best = _min_candidate(ctx, cands)
    bits, lo, hi = _certify_nonzero(ctx, best)
    ball = RealEnclosure(Fraction(lo + hi, 2 << bits), Fraction(hi - lo, 2 << bits), bits)
    return IntPolynomial(best), abs(ball)


def _record_sweep(ctx: _SearchContext, cands: List[_Candidate]) -> List[tuple]:
    """Heights ascending, keep certified strict improvements."""
    records: List[tuple] = []
    current: Optional[tuple] = None
    by_height: Dict[int, List[tuple]] = {}
    for c in cands:
        by_height.setdefault(c.height, []).append(c.coeffs)
    for h in sorted(by_height):
        group = sorted(set(by_height[h]))
        best = _min_candidate(ctx, group)
        if current is None or _compare_candidates(ctx, best, current) < 0:
            records.append(best)
            current = best
    return records


def best_approx_sequence(spec: RealSpec, n: int, h_max: Optional[int] = None,
                         precision_bits: int = 192,
                         cap_bits: int = DEFAULT_PRECISION_CAP,
                         exact_phase_budget: int = 10**7) -> SequenceData:
    """The sequence of record-setting approximants up to the height limit.

    A record is kept iff it strictly improves the minimum of |P(xi)| over
    all smaller-or-equal heights; the result agrees exactly with
    ``min_poly_at_height`` at every recorded height.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if h_max is None:
        h_max = DEFAULT_HEIGHT_LIMITS.get(n, 10)
    if h_max < 1:
        raise ValueError("h_max must be >= 1")
    xi = real_from_spec(spec, max(precision_bits, _BASE_BITS) + 64)
    ctx = _SearchContext(xi, n, spec=spec, cap_bits=cap_bits)

    h_exact = min(h_max, _EXACT_PHASE_HEIGHT.get(n, 4))
    cands = _exact_box_candidates(n, h_exact)
    records = _record_sweep(ctx, cands)

    if h_max > h_exact:
        # the running record after the exact phase prunes everything above
        current = records[-1]
        while True:
            bits, lo, hi = _certify_nonzero(ctx, current)
            thr = float(Fraction(hi, 1 << bits)) * (1 + 1e-9) + 1e-15
            if thr < 0.47 or h_exact >= h_max:
                break
            # record still >= ~1/2: widen the exact phase (large xi)
            h_exact = min(2 * h_exact, h_max)
            if (2 * h_exact + 1) ** (n + 1) > exact_phase_budget:
                raise BudgetExceeded(
                    "exact enumeration phase exceeded its candidate budget; "
                    "xi appears too large for the incremental search defaults")
            cands = _exact_box_candidates(n, h_exact)
            records = _record_sweep(ctx, cands)
            current = records[-1]
        if h_exact < h_max:
            survivors = _prefilter_candidates(ctx, h_max, h_exact, thr)
            tail_records = _record_sweep(ctx, list(cands) + survivors)
            records = tail_records

    out_records: List[BestApproxRecord] = []
    for i, coeffs in enumerate(records):
        bits, lo, hi = _certify_nonzero(ctx, coeffs)
        value = RealEnclosure(Fraction(lo + hi, 2 << bits), Fraction(hi - lo, 2 << bits),
                              precision_bits)
        poly = IntPolynomial(coeffs)
        out_records.append(BestApproxRecord(
            k=i + 1,
            poly=poly,
            height=poly.height(),
            log_abs_value=ln(value, precision_bits),
        ))
    return SequenceData(spec, n, out_records, h_max, precision_bits)
