"""Exact rank, goodness, ell windows, V-set spans, irreducibility."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vlab.bestapprox import best_approx_sequence
from vlab.bestapprox.records import BestApproxRecord, SequenceData
from vlab.enclosure import RealEnclosure
from vlab.errors import DegreeOverflow, DependentBase, IndexOutOfRange
from vlab.polyalg import (
    bareiss_rank,
    ell_of_k,
    enrich_independence,
    is_good,
    is_irreducible_deg_n,
    rank_of_polys,
    span_dim_union,
    v_set,
)
from vlab.polynomials import IntPolynomial
from vlab.realspec import parse_xi


def P(*coeffs):
    return IntPolynomial(coeffs)


def fixture_seq(polys, n):
    """SequenceData with synthetic heights/values, for rank-only tests."""
    from fractions import Fraction

    records = []
    for i, poly in enumerate(polys):
        records.append(BestApproxRecord(
            k=i + 1, poly=poly, height=i + 1,
            log_abs_value=RealEnclosure.exact(Fraction(-i, 1), 64)))
    return SequenceData(parse_xi("dec:0.5"), n, records, len(polys), 64)


class TestRank:
    def test_trivial_pairs(self):
        assert rank_of_polys([P(-1, 1), P(-3, 2)], 1) == 2
        assert rank_of_polys([P(-1, 1), P(-3, 2), P(-4, 3)], 1) == 2
        assert rank_of_polys([P(-2, 0, 1), P(-3, 1, 1), P(-5, 1, 2)], 2) == 2

    def test_degree_overflow(self):
        with pytest.raises(DegreeOverflow):
            rank_of_polys([P(0, 0, 1)], 1)

    @given(st.lists(st.lists(st.integers(-50, 50), min_size=3, max_size=3),
                    min_size=1, max_size=5))
    @settings(max_examples=100)
    def test_matches_sympy_rank(self, rows):
        import sympy

        assert bareiss_rank(rows) == sympy.Matrix(rows).rank()

    @given(rows=st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4),
                         min_size=2, max_size=4),
           scale=st.integers(min_value=1, max_value=7))
    @settings(max_examples=60)
    def test_invariant_under_scaling_and_permutation(self, rows, scale):
        r = bareiss_rank(rows)
        assert bareiss_rank([[scale * x for x in rows[0]]] + rows[1:]) == r
        assert bareiss_rank(list(reversed(rows))) == r


class TestGoodness:
    def test_constructed_dependent_triple(self):
        # P3 = P1 + P2: not good
        p1, p2 = P(1, 0, 1), P(0, 1, 1)
        seq = fixture_seq([p1, p2, p1 + p2], 2)
        assert is_good(seq, 2) is False

    def test_degree_one_never_good(self):
        seq = fixture_seq([P(1, 1), P(-1, 2), P(-3, 4)], 1)
        assert is_good(seq, 2) is False  # three vectors in a 2-dim space

    def test_oracle_sequence_good_k(self):
        seq = best_approx_sequence(parse_xi("cbrt:2"), 2, 100)
        enrich_independence(seq)
        goods = [r.k for r in seq.records if r.good]
        assert goods, "expected at least one good index"
        k = goods[0]
        triple = [seq.record(k - 1).poly, seq.record(k).poly, seq.record(k + 1).poly]
        assert rank_of_polys(triple, 2) == 3

    def test_index_out_of_range(self):
        seq = fixture_seq([P(1, 1), P(-1, 2)], 1)
        with pytest.raises(IndexOutOfRange):
            is_good(seq, 2)


class TestEll:
    def test_rank2_run_then_independent(self):
        p1, p2 = P(1, 0, 1), P(0, 1, 1)
        dep = p1 + p2.scale(2)
        indep = P(5, -3, 1)  # (a, b, a+b) pattern broken: 5 - 3 != 1
        seq = fixture_seq([p1, p2, dep, indep], 3)
        ell, truncated = ell_of_k(seq, 2)
        assert (ell, truncated) == (4, False)

    def test_good_k_gives_kplus1(self):
        p1, p2, p3 = P(1, 0, 1), P(0, 1, 1), P(2, 1, 0)
        seq = fixture_seq([p1, p2, p3], 2)
        assert is_good(seq, 2) is True
        assert ell_of_k(seq, 2) == (3, False)

    def test_truncated_run(self):
        p1, p2 = P(1, 0, 1), P(0, 1, 1)
        seq = fixture_seq([p1, p2, p1 + p2, p1 - p2], 2)
        ell, truncated = ell_of_k(seq, 2)
        assert truncated is True
        assert ell == 5  # last index + 1

    def test_dependent_base_rejected(self):
        seq = fixture_seq([P(1, 0, 1), P(2, 0, 2), P(0, 1, 1)], 2)
        with pytest.raises(DependentBase):
            ell_of_k(seq, 2)

    def test_good_iff_ell_kplus1_on_oracle(self):
        seq = best_approx_sequence(parse_xi("cbrt:2"), 2, 200)
        enrich_independence(seq)
        for k in range(2, len(seq.records)):
            good = seq.record(k).good
            ell, truncated = ell_of_k(seq, k)
            if not truncated:
                assert good == (ell == k + 1)
            else:
                assert not good


class TestVSets:
    def test_singleton_for_n2(self):
        vs = v_set(P(-2, 0, 1), 2)
        assert [p.coeffs for p in vs.elements] == [(-2, 0, 1)]

    def test_two_independent_quadratics(self):
        a, b = v_set(P(-2, 0, 1), 2), v_set(P(-3, 1, 1), 2)
        assert span_dim_union([a, b]) == 2  # = 2n-2

    def test_two_distinct_cubics_span_4(self):
        # n=3: irreducible cubics P, Q with V-sets {P, TP}, {Q, TQ}
        p, q = P(-2, 0, 0, 1), P(-3, 1, 0, 1)
        assert is_irreducible_deg_n(p, 3) and is_irreducible_deg_n(q, 3)
        assert span_dim_union([v_set(p, 3), v_set(q, 3)]) == 4  # = 2n-2

    def test_three_independent_cubics_span_all(self):
        # three linearly independent irreducible cubics span dim 2n-1 = 5
        p, q, r = P(-2, 0, 0, 1), P(-3, 1, 0, 1), P(-5, 0, 1, 1)
        assert rank_of_polys([p, q, r], 3) == 3
        for c in (p, q, r):
            assert is_irreducible_deg_n(c, 3)
        assert span_dim_union([v_set(p, 3), v_set(q, 3), v_set(r, 3)]) == 5

    def test_heights_uniform(self):
        vs = v_set(P(-3, 1, 1), 3)
        heights = {p.height() for p in vs.elements}
        assert heights == {3}


class TestIrreducibility:
    @pytest.mark.parametrize("coeffs,n,expected", [
        ((-2, 0, 1), 2, True),    # T^2 - 2
        ((-1, 0, 1), 2, False),   # (T-1)(T+1)
        ((4, 2), 2, False),       # degree 1 != 2, content 2
        ((4, 2), 1, True),        # 2(T+2): content removed, degree 1
        ((-2, 0, 0, 1), 3, True),
        ((1, 2, 1), 2, False),    # (T+1)^2
        ((-12, -2, 17, -8, 1), 4, False),  # has the rational root 3
        ((-2, 0, 0, 0, 1), 4, True),       # T^4 - 2, Eisenstein at 2
        ((0, -1, 4, -4, 1), 4, False),     # T(T-1)(T^2-3T+1)
    ])
    def test_cases(self, coeffs, n, expected):
        assert is_irreducible_deg_n(P(*coeffs), n) is expected

    def test_lemma_spans_on_oracle_sequence(self):
        # consecutive irreducible records span the expected dimensions
        seq = best_approx_sequence(parse_xi("cbrt:2"), 2, 200)
        enrich_independence(seq)
        n = seq.n
        for k in range(2, len(seq.records) + 1):
            a, b = seq.record(k - 1).poly, seq.record(k).poly
            if is_irreducible_deg_n(a, n) and is_irreducible_deg_n(b, n):
                assert span_dim_union([v_set(a, n), v_set(b, n)]) == 2 * n - 2
        for k in range(2, len(seq.records)):
            if not seq.record(k).good:
                continue
            triple = [seq.record(j).poly for j in (k - 1, k, k + 1)]
            if all(is_irreducible_deg_n(p, n) for p in triple):
                assert span_dim_union([v_set(p, n) for p in triple]) == 2 * n - 1
