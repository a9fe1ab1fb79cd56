from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cofrontal.poly import (
    NotDivisibleError,
    PolyMatrix,
    Polynomial,
    PolynomialParseError,
    UnknownVariableError,
    determinant,
    divide_exact,
    evaluate,
    gcd_many,
    jet_truncate,
    parse_polynomial,
    partial,
    render,
    substitute,
)
from oracles import finite_difference, leibniz_det, sympy_gcd, to_sympy
from strategies import polynomials


def P(text, n=2):
    return parse_polynomial(text, nvars=n)


class TestParse:
    def test_terms(self):
        p = parse_polynomial("x1^2 + 3/2*x2", ["x1", "x2"])
        assert p.terms == {(2, 0): Fraction(1), (0, 1): Fraction(3, 2)}

    def test_zero(self):
        assert parse_polynomial("0", ["x1"]).is_zero()

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            parse_polynomial("x3", ["x1", "x2"])

    def test_zero_denominator(self):
        with pytest.raises(PolynomialParseError):
            P("1/0*x1")

    @pytest.mark.parametrize("text", ["", "x1 +", "x1^", "2**x1", "x1 x2"])
    def test_syntax_errors_report_position(self, text):
        with pytest.raises(PolynomialParseError) as info:
            P(text)
        assert info.value.position >= 0

    def test_whitespace_and_signs(self):
        assert P("  - x1*x2 +2 - 1/2 * x1 ^ 3") == P("-x1*x2+2-1/2*x1^3")

    def test_repeated_variable_multiplies(self):
        assert P("x1*x1^2") == P("x1^3")

    def test_named_variables(self):
        p = parse_polynomial("t^2 - u", ["t", "u"])
        assert render(p, ["t", "u"]) == "t^2 - u"

    def test_render_canonical_order(self):
        assert render(P("x2 + x1^2 + 1 + x1*x2")) == "x1^2 + x1*x2 + x2 + 1"
        assert render(P("-3/2*x1")) == "-3/2*x1"
        assert render(Polynomial.zero(2)) == "0"

    @settings(max_examples=100, deadline=None)
    @given(polynomials(3, 4, 6))
    def test_parse_render_roundtrip(self, p):
        assert parse_polynomial(render(p), nvars=3) == p


class TestEvaluate:
    def test_examples(self):
        assert evaluate(P("x1^2 + x2"), (2, 3)) == 7
        assert evaluate(Polynomial.zero(2), (Fraction(5, 7), 1)) == 0
        assert evaluate(P("x1*x2"), (Fraction(1, 2), 4)) == 2

    def test_result_is_exact(self):
        assert isinstance(evaluate(P("x1 + x2"), (1, 2)), Fraction)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evaluate(P("x1"), (1,))


class TestSubstitute:
    def test_examples(self):
        x1, x2 = P("x1"), P("x2")
        assert substitute(P("x2^2"), [x1, -x2]) == P("x2^2")
        assert substitute(P("x1"), [x2, x1]) == P("x2")
        assert substitute(P("x2^3 + x1*x2"), [x1, -x2]) == P("-x2^3 - x1*x2")

    def test_matches_evaluation(self):
        p = P("x2^3 + x1*x2 - 2/3*x1^2")
        images = [P("x1 + x2^2"), P("3*x2 - x1*x2")]
        q = substitute(p, images)
        for pt in [(1, 2), (Fraction(-1, 3), 5), (0, Fraction(7, 2)), (2, -2), (Fraction(1, 5), 1)]:
            inner = tuple(evaluate(c, pt) for c in images)
            assert evaluate(q, pt) == evaluate(p, inner)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            substitute(P("x1 + x2"), [P("x1")])

    @settings(max_examples=40, deadline=None)
    @given(polynomials(), polynomials(), polynomials(), polynomials())
    def test_distributes(self, p, q, a, b):
        imgs = [a, b]
        assert substitute(p + q, imgs) == substitute(p, imgs) + substitute(q, imgs)
        assert substitute(p * q, imgs) == substitute(p, imgs) * substitute(q, imgs)


class TestRing:
    @settings(max_examples=60, deadline=None)
    @given(polynomials(), polynomials(), polynomials())
    def test_axioms(self, p, q, r):
        assert (p + q) * r == p * r + q * r
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)
        assert p - p == Polynomial.zero(2)

    @settings(max_examples=40, deadline=None)
    @given(polynomials(), polynomials())
    def test_against_sympy(self, p, q):
        syms = sympy.symbols("x1 x2")
        assert sympy.expand(to_sympy(p * q, syms) - to_sympy(p, syms) * to_sympy(q, syms)) == 0

    def test_power_and_scalar(self):
        assert P("x1 + x2") ** 2 == P("x1^2 + 2*x1*x2 + x2^2")
        assert P("x1") * Fraction(1, 2) == P("1/2*x1")
        assert P("x1") ** 0 == Polynomial.constant(1, 2)

    def test_mismatched_variable_counts(self):
        with pytest.raises(ValueError):
            P("x1", 1) + P("x1", 2)

    def test_hash_consistent(self):
        assert hash(P("x1 + x2")) == hash(P("x2 + x1"))


class TestPartial:
    def test_examples(self):
        assert partial(P("x1*x2"), 0) == P("x2")
        assert partial(Polynomial.constant(5, 2), 0).is_zero()
        assert partial(P("x2^3 + x1*x2"), 1) == P("3*x2^2 + x1")

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            partial(P("x1"), 2)

    def test_finite_difference(self):
        p = P("x2^3 + x1*x2 - 1/3*x1^2*x2")
        d = partial(p, 1)
        f = lambda pt: float(evaluate(p, [Fraction(v) for v in pt]))
        for pt in [(0.5, -1.25), (2.0, 0.75), (-1.5, 1.5)]:
            assert abs(finite_difference(f, pt, 1) - float(evaluate(d, pt))) < 1e-5

    @settings(max_examples=60, deadline=None)
    @given(polynomials(3, 4))
    def test_partials_commute(self, p):
        assert partial(partial(p, 0), 2) == partial(partial(p, 2), 0)


class TestDeterminant:
    def test_examples(self):
        one, zero = Polynomial.constant(1, 2), Polynomial.zero(2)
        assert determinant(PolyMatrix.from_rows([[one, zero], [zero, one]])) == one
        assert determinant(PolyMatrix.from_rows([[one, zero], [zero, P("2*x2")]])) == P("2*x2")
        M = PolyMatrix.from_rows([[one, zero], [P("x2"), P("3*x2^2 + x1")]])
        assert determinant(M) == P("3*x2^2 + x1")

    def test_non_square(self):
        with pytest.raises(ValueError):
            determinant(PolyMatrix.from_rows([[P("x1"), P("x2")]]))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(polynomials(2, 2, 3), min_size=9, max_size=9))
    def test_methods_agree_and_alternate(self, entries):
        rows = [entries[0:3], entries[3:6], entries[6:9]]
        d = determinant(PolyMatrix.from_rows(rows))
        assert d == determinant(PolyMatrix.from_rows(rows), method="leibniz")
        assert d == leibniz_det(rows)
        swapped = [rows[1], rows[0], rows[2]]
        assert determinant(PolyMatrix.from_rows(swapped)) == -d


class TestGcd:
    def test_examples(self):
        assert gcd_many([P("2*x2"), P("4*x2^2")]) == P("x2")
        assert gcd_many([P("x1"), P("x2")]) == Polynomial.constant(1, 2)
        assert gcd_many([Polynomial.zero(2), Polynomial.zero(2)]).is_zero()

    def test_empty(self):
        with pytest.raises(ValueError):
            gcd_many([])

    def test_normalization(self):
        g = gcd_many([P("-6*x1*x2 - 3*x2^2"), P("4*x1^2 + 2*x1*x2")])
        assert g == P("2*x1 + x2")

    @settings(max_examples=40, deadline=None)
    @given(polynomials(2, 2, 3), polynomials(2, 2, 3), polynomials(2, 2, 3))
    def test_common_factor_divides(self, a, b, c):
        ps = [a * c, b * c]
        g = gcd_many(ps)
        for p in ps:
            if not g.is_zero():
                assert divide_exact(p, g) * g == p
        if not c.is_zero() and not (a.is_zero() and b.is_zero()):
            assert divide_exact(g, gcd_many([c])) * gcd_many([c]) == g

    @settings(max_examples=30, deadline=None)
    @given(polynomials(3, 3, 4), polynomials(3, 3, 4), polynomials(3, 2, 3))
    def test_matches_sympy_up_to_scalar(self, a, b, c):
        ps = [a * c, b * c]
        g = gcd_many(ps)
        ref, syms = sympy_gcd(ps, 3)
        if g.is_zero():
            assert ref == 0
        else:
            ratio = sympy.cancel(to_sympy(g, syms) / ref)
            assert ratio.is_number and ratio != 0

    def test_not_divisible(self):
        with pytest.raises(NotDivisibleError):
            divide_exact(P("x1 + 1"), P("x2"))


class TestJet:
    def test_examples(self):
        assert jet_truncate(P("x2^3 + x1*x2"), 2) == P("x1*x2")
        assert jet_truncate(P("x1"), 0).is_zero()
        p = P("x1^2 - x2 + 3")
        assert jet_truncate(p, 5) == p

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            jet_truncate(P("x1"), -1)

