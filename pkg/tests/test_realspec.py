"""Real-number specs: parsing, enclosures, algebraic reduction."""

from fractions import Fraction

import pytest

from vlab.errors import InsufficientDigits, UnsupportedSpec
from vlab.realspec import RealSpec, parse_xi, real_from_spec


class TestParse:
    @pytest.mark.parametrize("text,expected", [
        ("sqrt:2", ("root", 2, 2)),
        ("cbrt:5", ("root", 5, 3)),
        ("root:7:4", ("root", 7, 4)),
        ("rat:22/7", ("rational", Fraction(22, 7))),
        ("const:e", ("constant", "e")),
    ])
    def test_grammar(self, text, expected):
        spec = parse_xi(text)
        if expected[0] == "root":
            assert (spec.kind, spec.base, spec.index) == expected
        elif expected[0] == "rational":
            assert (spec.kind, spec.rational) == expected
        else:
            assert (spec.kind, spec.name) == expected

    def test_decimal(self):
        spec = parse_xi("dec:2.718281828459045")
        assert spec.kind == "decimal"
        assert spec.digits == "2.718281828459045"

    def test_cf(self):
        spec = parse_xi("cf:1,2,2,2,2")
        # [1;2,2,2,2] = 41/29, a convergent of sqrt(2)
        assert spec.cf_value() == Fraction(41, 29)

    @pytest.mark.parametrize("bad", ["sqrt", "nope:1", "rat:5", "root:2", "cf:"])
    def test_rejects_malformed(self, bad):
        with pytest.raises((UnsupportedSpec, ValueError)):
            parse_xi(bad)

    def test_roundtrip_json(self):
        for text in ["sqrt:2", "dec:3.14", "rat:1/3", "const:pi", "cf:2,1,1"]:
            spec = parse_xi(text)
            assert RealSpec.from_json(spec.to_json()) == spec

    def test_describe_roundtrip(self):
        for text in ["sqrt:2", "cbrt:2", "root:7:5", "dec:3.14", "rat:1/3",
                     "const:pi", "cf:2,1,1"]:
            spec = parse_xi(text)
            assert parse_xi(spec.describe()) == spec


class TestRealFromSpec:
    def test_rational_exact(self):
        ball = real_from_spec(RealSpec.from_rational(Fraction(1, 3)), 64)
        assert ball.is_exact and ball.mid == Fraction(1, 3)

    def test_sqrt2(self):
        ball = real_from_spec(parse_xi("sqrt:2"), 64)
        sq = ball * ball
        assert sq.lo() <= 2 <= sq.hi()
        assert ball.rad <= Fraction(2) ** (-63) * 2

    def test_decimal_radius(self):
        ball = real_from_spec(parse_xi("dec:2.718281828459045"), 40)
        assert ball.rad == Fraction(1, 10**15)
        assert ball.contains(Fraction(2718281828459045, 10**15))

    def test_decimal_insufficient(self):
        with pytest.raises(InsufficientDigits):
            real_from_spec(parse_xi("dec:2.71"), 64)

    def test_min_precision(self):
        with pytest.raises(ValueError):
            real_from_spec(parse_xi("sqrt:2"), 8)

    def test_unknown_constant(self):
        with pytest.raises(UnsupportedSpec):
            RealSpec.from_constant("gamma")

    def test_determinism(self):
        a = real_from_spec(parse_xi("const:pi"), 128)
        b = real_from_spec(parse_xi("const:pi"), 128)
        assert a == b


class TestAlgebraicForm:
    def test_rational_kinds(self):
        assert parse_xi("rat:3/4").algebraic_form() == ("rational", Fraction(3, 4))
        assert parse_xi("cf:1,2").algebraic_form() == ("rational", Fraction(3, 2))

    def test_root_reduction_perfect_power(self):
        # 4^(1/2) = 2 is rational
        assert parse_xi("root:4:2").algebraic_form() == ("rational", Fraction(2))
        # 64^(1/4) = 8^(1/2)
        assert parse_xi("root:64:4").algebraic_form() == ("root", 8, 2)
        # 64^(1/6) = 2
        assert parse_xi("root:64:6").algebraic_form() == ("rational", Fraction(2))

    def test_root_already_reduced(self):
        assert parse_xi("sqrt:2").algebraic_form() == ("root", 2, 2)
        assert parse_xi("cbrt:2").algebraic_form() == ("root", 2, 3)

    def test_transcendental_presumed(self):
        assert parse_xi("const:e").algebraic_form() is None
        assert parse_xi("dec:2.71828").algebraic_form() is None
