from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trinomial_workbench.parsing import (PolynomialSyntaxError, UnknownVariable, format_polynomial,
                                         parse_polynomial, parse_var)
from trinomial_workbench.poly import (S, T, Polynomial, RationalFunction, RelationSet,
                                      VariableMismatch, apply_derivation, evaluate_numeric,
                                      lex_key, normal_form, scale_variables, substitute)
from trinomial_workbench.variety import relations

from suite import CUBIC, DANIELEWSKI, QUADRIC, type1

VARS = [T(1, 1), T(1, 2), T(2, 1), S(1)]
x, y, z, s1 = (Polynomial.var(v) for v in VARS)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monomials = st.tuples(*[st.integers(0, 2)] * len(VARS))


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials, coeffs), max_size=max_terms))
    p = Polynomial()
    for exps, c in terms:
        m = tuple((v, e) for v, e in zip(VARS, exps) if e)
        p = p + Polynomial.monomial(m, c)
    return p


@st.composite
def images(draw):
    return {v: draw(polys(3)) for v in VARS}


@st.composite
def linear_images(draw):
    return {v: Polynomial.const(draw(coeffs)) + x * draw(coeffs) + z * draw(coeffs) for v in VARS}


class TestArithmetic:
    def test_cancellation_drops_terms(self):
        assert (x - x).is_zero()
        assert len(x + y - y) == 1

    def test_power_and_degree(self):
        p = (x + y) ** 3
        assert p.total_degree() == 3
        assert p.coefficient(((T(1, 1), 2), (T(1, 2), 1))) == 3

    def test_negative_power(self):
        with pytest.raises(ValueError):
            x ** -1

    def test_lex_order_prefers_first_block(self):
        p = z ** 5 + x
        assert p.leading_monomial() == ((T(1, 1), 1),)
        assert sorted(p.terms, key=lex_key)[0] == ((T(1, 1), 1),)

    def test_diff(self):
        assert (x ** 3 * y).diff(T(1, 1)) == 3 * x ** 2 * y
        assert (x * y).diff(T(2, 1)).is_zero()

    @given(polys(), polys())
    @settings(max_examples=200)
    def test_ring_axioms(self, p, q):
        assert p * q == q * p
        assert (p + q) - q == p
        assert p * (q + 1) == p * q + p

    @given(polys(), polys(), images())
    @settings(max_examples=500)
    def test_leibniz(self, p, q, img):
        lhs = apply_derivation(img, p * q)
        rhs = apply_derivation(img, p) * q + p * apply_derivation(img, q)
        assert lhs == rhs

    @given(polys(), linear_images())
    @settings(max_examples=100, deadline=None)
    def test_substitution_is_a_ring_map(self, p, img):
        q = p + x
        assert substitute(p * q, img) == substitute(p, img) * substitute(q, img)

    def test_substitute_leaves_unassigned(self):
        assert substitute(x + y, {T(1, 1): z}) == z + y

    def test_rational_function_cancels_common_monomial(self):
        f = RationalFunction(x ** 2 * y, x * z).cancel_monomial()
        assert f.num == x * y and f.den == z

    def test_rational_function_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(x, Polynomial())

    def test_scale_variables_clears_negative_powers(self):
        cleared, shift = scale_variables(x * y - 1, {T(1, 1): 1, T(1, 2): -1})
        assert shift == 0 and cleared == x * y - 1
        cleared, shift = scale_variables(y + 1, {T(1, 2): -2})
        assert shift == 2

    def test_evaluate_numeric(self):
        p = x * y - z ** 2 + Fraction(1, 2)
        val = evaluate_numeric(p, {T(1, 1): 2, T(1, 2): 3, T(2, 1): 1j})
        assert val == pytest.approx(7.5)


class TestNormalForm:
    rels = relations(replace(DANIELEWSKI, m=1)).relations

    def test_reduces_leading_monomial(self):
        # x*y = z^2 + 1
        assert normal_form(x * y, self.rels) == z ** 2 + 1

    def test_relation_reduces_to_zero(self):
        for g in self.rels:
            assert normal_form(g, self.rels).is_zero()

    def test_standard_monomials_fixed(self):
        assert normal_form(x ** 3 + z ** 7, self.rels) == x ** 3 + z ** 7

    def test_variable_mismatch(self):
        with pytest.raises(VariableMismatch):
            normal_form(Polynomial.var(T(7, 1)), self.rels)

    def test_leading_must_be_lex_leading(self):
        with pytest.raises(ValueError):
            RelationSet([x * y - z], VARS, [((T(2, 1), 1),)])

    @given(polys(), polys(), st.fractions(-3, 3, max_denominator=3))
    @settings(max_examples=500)
    def test_idempotent_and_linear(self, p, q, c):
        r = self.rels
        assert normal_form(normal_form(p, r), r) == normal_form(p, r)
        assert normal_form(p + q * c, r) == normal_form(p, r) + normal_form(q, r) * c

    @pytest.mark.parametrize("data", [DANIELEWSKI, QUADRIC, CUBIC, type1((2, 1), (3,), (1, 2))],
                             ids=["danielewski", "quadric", "cubic", "type1-three-blocks"])
    @given(seed=st.integers(0, 10 ** 6))
    @settings(max_examples=100, deadline=None)
    def test_ideal_members_vanish(self, data, seed):
        import random

        rng = random.Random(seed)
        alg = relations(data)
        vs = list(alg.variables)
        for g in alg.relations:
            m = tuple(sorted((v, rng.randint(1, 3)) for v in rng.sample(vs, rng.randint(0, 2))))
            p = Polynomial.monomial(m, rng.randint(-3, 3) or 1) + rng.randint(-2, 2)
            assert normal_form(p * g, alg.relations).is_zero()

    def test_pairwise_coprime_leading_monomials(self):
        assert relations(QUADRIC).relations.is_confluent()


class TestParsing:
    def test_round_trip_example(self):
        p = parse_polynomial("T[1][1]*T[1][2] - T[2][1]^2 - 1")
        assert str(p) == "T[1][1]*T[1][2] - T[2][1]^2 - 1"

    def test_rational_coefficients_and_parentheses(self):
        p = parse_polynomial("3/2*(T[1][1] + S[1])^2")
        assert p.coefficient(((T(1, 1), 1), (S(1), 1))) == 3

    def test_leading_sign(self):
        assert parse_polynomial("-T[1][1]") == -x
        assert parse_polynomial("+2") == Polynomial.const(2)

    def test_syntax_error_position(self):
        with pytest.raises(PolynomialSyntaxError) as info:
            parse_polynomial("T[1][1] + * 2")
        assert info.value.pos == 10

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariable) as info:
            parse_polynomial("T[9][9] + 1", VARS)
        assert info.value.var == T(9, 9)

    def test_parse_var(self):
        assert parse_var("S[1]") == S(1)
        with pytest.raises(PolynomialSyntaxError):
            parse_var("2*S[1]")

    @given(polys(6))
    @settings(max_examples=500)
    def test_print_parse_round_trip(self, p):
        assert parse_polynomial(format_polynomial(p)) == p
