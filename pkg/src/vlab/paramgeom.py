"""Parametric geometry of numbers over the degree-(2n-2) ambient space.

The lattice is the unimodular image of Z^(2n-1) under (a_1, ..., a_{2n-2},
a_0 + a_1 xi + ... + a_{2n-2} xi^(2n-2)); the parametric convex bodies are
boxes with semi-axes Q^(1/(2n-2)) (coefficient directions) and Q^(-1) (value
direction).  Their volume is (2 Q^(1/(2n-2)))^(2n-2) * (2/Q) = 2^(2n-1),
independent of Q, and the lattice determinant is 1, so Minkowski's second
theorem pins the successive minima product lambda_1 ... lambda_{2n-1} inside
[2^(2n-1)/(2n-1)!, 2^(2n-1)] / vol = [1/(2n-1)!, 1]; in log coordinates
|sum_j L_j(q)| <= log((2n-1)!) + (2n-1) log 2 =: C_n with room to spare.

A polynomial P of height H contributes the trajectory
L_P(q) = max(log H - q/(2n-2), log|P(xi)| + q), a two-segment piecewise
linear function with slopes -1/(2n-2) and +1.

Pool-mode minima bounds use the shifted frame xi -> xi - floor(xi): the
shift is a unimodular coefficient map that preserves |P(xi)| but changes
heights, so only the shifted-frame outputs are comparable to each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .enclosure import RealEnclosure, exp_fraction, ln, ln2_constant, ln_fraction
from .errors import BudgetExceeded, DegenerateRecords, PrecisionExhausted
from .polynomials import IntPolynomial, taylor_shift
from .polyalg import bareiss_rank
from .bestapprox.records import BestApproxRecord, SequenceData
from .bestapprox.search import _FixedPointXi



def _ball(x) -> RealEnclosure:
    return x if isinstance(x, RealEnclosure) else RealEnclosure.exact(Fraction(x))


def _ball_max(a: RealEnclosure, b: RealEnclosure) -> RealEnclosure:
    return RealEnclosure.from_endpoints(max(a.lo(), b.lo()), max(a.hi(), b.hi()),
                                        a.precision_bits or b.precision_bits)


@dataclass(frozen=True)
class PiecewiseLinearFn:
    """Continuous piecewise linear function with slopes restricted to
    {-1/(2n-2), +1}; breakpoints are (q, value) enclosure pairs."""

    breakpoints: tuple  # ((q, value), ...) with q increasing
    initial_slope: Fraction
    slopes: tuple  # slope after each breakpoint
    n: int

    def __post_init__(self):
        admissible = {Fraction(-1, 2 * self.n - 2), Fraction(1)}
        if self.initial_slope not in admissible or any(s not in admissible for s in self.slopes):
            raise ValueError(f"slopes must lie in {admissible}")
        if len(self.slopes) != len(self.breakpoints):
            raise ValueError("need one slope per breakpoint")

    def value(self, q) -> RealEnclosure:
        q = _ball(q)
        for i, (pq, pv) in enumerate(self.breakpoints):
            if q.mid <= pq.mid:
                slope = self.initial_slope if i == 0 else self.slopes[i - 1]
                return pv + (q - pq) * slope
        pq, pv = self.breakpoints[-1]
        return pv + (q - pq) * self.slopes[-1]


@dataclass(frozen=True)
class Trajectory:
    """L_P(q) = max(log_height - q/(2n-2), log_value + q)."""

    log_height: RealEnclosure
    log_value: RealEnclosure
    n: int

    @property
    def down_slope(self) -> Fraction:
        return Fraction(-1, 2 * self.n - 2)

    def value(self, q) -> RealEnclosure:
        q = _ball(q)
        return _ball_max(self.log_height + q * self.down_slope,
                         self.log_value + q)

    def min_point(self) -> RealEnclosure:
        m = 2 * self.n - 2
        return (self.log_height - self.log_value) * Fraction(m, m + 1)

    def min_value(self) -> RealEnclosure:
        m = 2 * self.n - 2
        return (self.log_height * m + self.log_value) * Fraction(1, m + 1)

    def to_piecewise(self) -> PiecewiseLinearFn:
        return PiecewiseLinearFn(
            breakpoints=((self.min_point(), self.min_value()),),
            initial_slope=self.down_slope,
            slopes=(Fraction(1),),
            n=self.n,
        )


def trajectory(poly: IntPolynomial, log_abs_value: RealEnclosure, n: int) -> Trajectory:
    """Trajectory of an integer polynomial of degree <= 2n-2 from its height
    and a certified log|P(xi)|."""
    if poly.degree > 2 * n - 2:
        raise ValueError("polynomial degree exceeds the ambient degree")
    bits = log_abs_value.precision_bits or 96
    return Trajectory(ln_fraction(Fraction(poly.height()), bits), log_abs_value, n)


def trajectory_from_logs(log_height: RealEnclosure, log_value: RealEnclosure,
                         n: int) -> Trajectory:
    return Trajectory(log_height, log_value, n)


@dataclass(frozen=True)
class GraphPoint:
    """Meeting data of consecutive trajectories: the crossing q_k, the
    minimum point s_k of the earlier trajectory, and the normalized value
    omega_k = L(q_k)/q_k.  omega < 0 characterizes the hypothetical regime
    the bounds are fought in; genuine desk-scale data usually has omega >= 0,
    so the sign is reported, never asserted."""

    k: int
    q: RealEnclosure
    s: RealEnclosure
    omega: RealEnclosure

    @property
    def omega_negative(self) -> Optional[bool]:
        sign = self.omega.sign()
        return None if sign is None else sign < 0


def meeting_point(rec_prev: BestApproxRecord, rec: BestApproxRecord, n: int,
                  bits: int = 96) -> GraphPoint:
    """Solve L_{P_{k-1}}(q_k) = L_{P_k}(q_k) for consecutive records."""
    if n < 2:
        raise ValueError("meeting points need n >= 2 (the ambient slope degenerates)")
    if rec.height <= rec_prev.height:
        raise DegenerateRecords("heights must strictly increase")
    if not (rec.log_abs_value.strictly_less(rec_prev.log_abs_value) is True):
        raise DegenerateRecords("values must strictly decrease")
    m = 2 * n - 2
    log_h_cur = ln_fraction(Fraction(rec.height), bits)
    log_h_prev = ln_fraction(Fraction(rec_prev.height), bits)
    log_v_prev = rec_prev.log_abs_value
    q_k = (log_h_cur - log_v_prev) * Fraction(m, m + 1)
    s_k = (log_h_prev - log_v_prev) * Fraction(m, m + 1)
    level = log_v_prev + q_k
    omega = (level / q_k).compress(bits)
    return GraphPoint(rec.k, q_k.compress(bits), s_k.compress(bits), omega)


def omega_identity_check(mu: RealEnclosure, omega: RealEnclosure, n: int) -> RealEnclosure:
    """Residual omega - (2n-2-mu)/((2n-2)(1+mu)); vanishes identically on
    genuine meeting data."""
    m = 2 * n - 2
    predicted = (m - mu) / ((1 + mu) * m)
    return omega - predicted


# ---------------------------------------------------------------------------
# Successive minima
# ---------------------------------------------------------------------------


def minkowski_constant(n: int, bits: int = 96) -> RealEnclosure:
    """C_n = log((2n-1)!) + (2n-1) log 2."""
    d = 2 * n - 1
    return (ln_fraction(Fraction(math.factorial(d)), bits)
            + ln2_constant(bits) * d).compress(bits)


def minkowski_margin(values: Sequence[RealEnclosure], n: int) -> RealEnclosure:
    """|sum of the 2n-1 minima| minus C_n; negative means inside the envelope."""
    if len(values) != 2 * n - 1:
        raise ValueError(f"need exactly {2 * n - 1} values")
    total = values[0]
    for v in values[1:]:
        total = total + v
    return abs(total) - minkowski_constant(n, total.precision_bits or 96)


def _greedy_independent(scored: List[Tuple[RealEnclosure, tuple]], dim: int,
                        ambient_degree: int) -> List[RealEnclosure]:
    """Greedy selection of independent coefficient vectors by increasing
    trajectory value; returns the selected values (possibly fewer than dim)."""
    scored = sorted(scored, key=lambda t: (t[0].mid, t[1]))
    chosen_vecs: List[list] = []
    out: List[RealEnclosure] = []
    for value, coeffs in scored:
        vec = list(coeffs) + [0] * (ambient_degree + 1 - len(coeffs))
        if bareiss_rank(chosen_vecs + [vec]) > len(chosen_vecs):
            chosen_vecs.append(vec)
            out.append(value)
            if len(out) == dim:
                break
    return out


def successive_minima_exact(xi: RealEnclosure, n: int, q,
                            candidate_budget: int = 10**7,
                            box_budget: int = 3 * 10**8,
                            bits: int = 160) -> List[RealEnclosure]:
    """The exact minima L_1(q) <= ... <= L_{2n-1}(q) over all nonzero integer
    polynomials of degree <= 2n-2.

    Enumeration is certified complete: every polynomial outside the scanned
    height/value window provably has L_P(q) above the reported last minimum.
    ``candidate_budget`` caps the polynomials actually evaluated,
    ``box_budget`` the vectorized prefilter mass; BudgetExceeded otherwise.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("q must be >= 0")
    m = 2 * n - 2
    dim = 2 * n - 1
    view = _FixedPointXi(xi, m, bits)
    ln_height_cache: dict = {}
    kink_cache: dict = {}

    def height_branch(height: int) -> RealEnclosure:
        if height not in ln_height_cache:
            ln_height_cache[height] = (ln_fraction(Fraction(height), bits)
                                       - q * Fraction(1, m)).compress(96)
        return ln_height_cache[height]

    def kink_value(height: int) -> Fraction:
        # |P(xi)| below this provably puts L_P on the height branch
        if height not in kink_cache:
            kink_cache[height] = exp_fraction(height_branch(height).lo() - q, 48).lo()
        return kink_cache[height]

    def l_ball(coeffs: tuple) -> RealEnclosure:
        height = max(abs(c) for c in coeffs)
        vball = abs(view.value_ball(coeffs))
        if vball.lo() <= 0:
            raise PrecisionExhausted(
                f"cannot certify P(xi) != 0 for {coeffs}; raise the working precision")
        hb = height_branch(height)
        if vball.hi() < kink_value(height):
            return hb  # the value branch provably stays below; no log needed
        return _ball_max(hb, ln(vball, bits) + q).compress(96)

    # seed from a small exact box (it contains the monomial flag, so the
    # greedy always completes)
    seed_h = 4 if m <= 2 else (2 if m <= 4 else 1)
    import itertools

    pool: List[Tuple[RealEnclosure, tuple]] = []
    seen_seed = set()
    for coeffs in itertools.product(range(-seed_h, seed_h + 1), repeat=m + 1):
        if not any(coeffs):
            continue
        c = coeffs if next(x for x in coeffs if x) > 0 else tuple(-x for x in coeffs)
        if c not in seen_seed:
            seen_seed.add(c)
            pool.append((l_ball(c), c))
    values = _greedy_independent(pool, dim, m)
    assert len(values) == dim

    def required_height(u_bound: Fraction) -> int:
        return int(exp_fraction(q * Fraction(1, m) + u_bound, 48).hi().__ceil__())

    # geometric enumeration ladder: the bound u only tightens, so earlier
    # (more generous) windows keep every polynomial later windows would
    evaluated = len(pool)
    covered = seed_h
    h = 8
    while True:
        u_bound = values[-1].hi()
        h_req = required_height(u_bound)
        if covered >= h_req:
            return values
        h = min(max(2 * h, 16), max(h_req, 16))
        if (2 * h + 1) ** m > box_budget:
            raise BudgetExceeded(
                f"minima enumeration needs a coefficient box of {(2*h+1)**m:.2e} "
                f"cells at q={float(q)}, above the box budget {box_budget:.0e}")
        # earlier stages already scanned heights <= covered with wider
        # windows, so each stage only needs its new shell
        scored = _enumerate_window(view, n, q, h,
                                   exp_fraction(u_bound - q, 48).hi(),
                                   l_ball, candidate_budget - evaluated,
                                   h_from=covered)
        evaluated += len(scored)
        pool += scored
        values = _greedy_independent(pool, dim, m)
        covered = h


def _enumerate_window(view: _FixedPointXi, n: int, q: Fraction, h_cut: int,
                      v_cut: Fraction, l_ball, remaining_budget: int,
                      h_from: int = 0) -> List[Tuple[RealEnclosure, tuple]]:
    """All candidates of degree <= 2n-2, upper-coefficient height in
    (h_from, h_cut], |P(xi)| <= ~v_cut, plus small constants; returns scored
    (L-value, coeffs) pairs."""
    m = 2 * n - 2
    mids, merrs = view.float_powers()
    v_cut_f = float(v_cut)
    out: List[Tuple[RealEnclosure, tuple]] = []
    seen = set()

    def consider(coeffs: tuple):
        if not any(coeffs) or max(abs(c) for c in coeffs) > h_cut:
            return
        c = coeffs if next(x for x in coeffs if x) > 0 else tuple(-x for x in coeffs)
        if c in seen:
            return
        seen.add(c)
        if len(out) >= remaining_budget:
            raise BudgetExceeded("minima enumeration exceeded the candidate budget")
        out.append((l_ball(c), c))

    # constants qualify whenever their value branch stays under the cut
    for a0 in range(1, min(h_cut, int(v_cut_f) + 1) + 1):
        consider((a0,) + (0,) * m)

    axes = [np.arange(-h_cut, h_cut + 1, dtype=np.float64) for _ in range(m)]
    # chunk over the leading axis to bound memory
    chunk = max(1, int(2 * 10**7 // max(1, (2 * h_cut + 1) ** (m - 1))))
    lead = axes[0]
    dot_err = float(h_cut) * float(np.sum(merrs[1:])) + (m + 3) * 2.3e-16 * (
        float(h_cut) * float(np.max(np.abs(mids))) * m + 1.0)
    width = v_cut_f + dot_err + 1e-12
    n_offsets = int(width) + 1
    for start in range(0, len(lead), chunk):
        sub = [lead[start:start + chunk]] + axes[1:]
        grids = np.meshgrid(*sub, indexing="ij")
        s = np.zeros_like(grids[0])
        for i in range(m):
            s += grids[i] * mids[i + 1]
        r = np.rint(s)
        d = np.abs(s - r)
        habs = np.maximum.reduce([np.abs(g) for g in grids])
        keep = (d <= width) & (habs > 0)
        if h_from:
            # earlier stages covered polys of total height <= h_from: a tuple
            # is new iff its own height or its forced constant term (within
            # the window slack) lands in the new shell
            keep &= (habs > h_from) | (np.abs(r) > h_from - n_offsets - 1)
        # enforce the candidate budget before scoring anything
        kept = int(np.count_nonzero(keep))
        if len(out) + kept * (2 * n_offsets + 1) > remaining_budget:
            raise BudgetExceeded("minima enumeration exceeded the candidate budget")
        for flat in np.argwhere(keep):
            upper = tuple(int(sub[i][flat[i]]) for i in range(m))
            base = int(r[tuple(flat)])
            for off in range(-n_offsets, n_offsets + 1):
                a0 = -base + off
                if abs(a0) <= h_cut:
                    consider((a0,) + upper)
    return out


# ---------------------------------------------------------------------------
# Shifted frame and pool-mode bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedFrame:
    """Records mapped by T -> T + shift so that xi - shift lies in (0, 1).

    |P'(xi')| = |P(xi)| is reused from the stored enclosures; heights are
    recomputed (they are not shift-invariant), so pool outputs live in this
    frame only."""

    shift: int
    xi: RealEnclosure
    polys: tuple
    heights: tuple
    log_values: tuple
    n: int


def shifted_frame(seq: SequenceData, xi: RealEnclosure) -> ShiftedFrame:
    c = math.floor(xi.mid)
    if not (xi.lo() >= c and xi.hi() < c + 1):
        raise PrecisionExhausted("xi enclosure straddles an integer; refine it first")
    polys = tuple(taylor_shift(r.poly, c) for r in seq.records)
    return ShiftedFrame(
        shift=c,
        xi=xi - c,
        polys=polys,
        heights=tuple(p.height() for p in polys),
        log_values=tuple(r.log_abs_value for r in seq.records),
        n=seq.n,
    )


def successive_minima_pool(frame: ShiftedFrame, q, bits: int = 96
                           ) -> Tuple[List[RealEnclosure], bool]:
    """Upper bounds for the shifted-frame minima from the pool
    {T^i * P'_k : 0 <= i <= n-2}; greedy independent selection.

    Returns (values, incomplete): each value dominates the corresponding
    exact minimum; ``incomplete`` is set when the pool lacks 2n-1
    independent members."""
    q = Fraction(q)
    n = frame.n
    m = 2 * n - 2
    dim = 2 * n - 1
    log_xi = ln(frame.xi, bits) if frame.xi.lo() > 0 else None
    scored: List[Tuple[RealEnclosure, tuple]] = []
    for poly, height, log_v in zip(frame.polys, frame.heights, frame.log_values):
        lh = ln_fraction(Fraction(height), bits)
        for i in range(max(1, n - 1)):
            shifted = poly.shift_degree(i)
            if shifted.degree > m:
                continue
            if i == 0:
                lv = log_v
            else:
                if log_xi is None:
                    raise PrecisionExhausted("shifted xi touches zero; cannot take logs")
                lv = log_v + log_xi * i
            value = _ball_max(lh - q * Fraction(1, m), lv + q).compress(96)
            scored.append((value, shifted.coeffs))
    values = _greedy_independent(scored, dim, m)
    return values, len(values) < dim


# ---------------------------------------------------------------------------
# Graph export
# ---------------------------------------------------------------------------


def default_q_grid(q_max: Fraction, q0: Fraction = Fraction(1),
                   ratio: Fraction = Fraction(5, 4)) -> List[Fraction]:
    """Geometric grid q0, q0*r, ... up to q_max."""
    out = []
    q = q0
    while q <= q_max:
        out.append(q)
        q = q * ratio
    return out


def combined_graph_csv(qs: Sequence[Fraction], minima: Sequence[Sequence[RealEnclosure]],
                       n: int) -> str:
    dim = 2 * n - 1
    header = "q," + ",".join(f"L_{j}" for j in range(1, dim + 1)) + ",sum,margin"
    lines = [header]
    for q, values in zip(qs, minima):
        total = values[0]
        for v in values[1:]:
            total = total + v
        margin = minkowski_margin(values, n)
        cells = [f"{float(q):.6f}"] + [f"{float(v.mid):.9f}" for v in values]
        cells += [f"{float(total.mid):.9f}", f"{float(margin.mid):.9f}"]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def trajectory_csv(qs: Sequence[Fraction], traj: Trajectory) -> str:
    lines = ["q,L_P"]
    for q in qs:
        lines.append(f"{float(q):.6f},{float(traj.value(q).mid):.9f}")
    return "\n".join(lines) + "\n"


def graph_svg(qs: Sequence[Fraction], minima: Sequence[Sequence[RealEnclosure]],
              n: int, width: int = 640, height: int = 420) -> str:
    """Minimal static rendering of the successive minima functions."""
    dim = 2 * n - 1
    xs = [float(q) for q in qs]
    series = [[float(minima[i][j].mid) for i in range(len(qs))] for j in range(dim)]
    all_y = [y for s in series for y in s]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_y), max(all_y)
    x_span = (x_hi - x_lo) or 1.0
    y_span = (y_hi - y_lo) or 1.0
    pad = 40

    def sx(x):
        return pad + (x - x_lo) / x_span * (width - 2 * pad)

    def sy(y):
        return height - pad - (y - y_lo) / y_span * (height - 2 * pad)

    colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
              "#8c564b", "#e377c2"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>']
    if y_lo < 0 < y_hi:
        parts.append(f'<line x1="{pad}" y1="{sy(0):.1f}" x2="{width - pad}" '
                     f'y2="{sy(0):.1f}" stroke="#cccccc"/>')
    for j, s in enumerate(series):
        pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(xs, s))
        color = colors[j % len(colors)]
        parts.append(f'<polyline fill="none" stroke="{color}" points="{pts}"/>')
        parts.append(f'<text x="{width - pad + 4}" y="{sy(s[-1]):.1f}" '
                     f'font-size="10" fill="{color}">L_{j + 1}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
