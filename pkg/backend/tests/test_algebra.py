"""
Tests for exact scalars and free-algebra elements.
"""

from fractions import Fraction

import pytest

from algebra import Element, Generator, commutator, render_element
from errors import NotInvertible, UnassignedParameter
from scalars import ONE, ZERO, Scalar

X1 = Generator("X", (1,))
P1 = Generator("P", (1,))
A = Generator("A")
B = Generator("B")


@pytest.mark.unit
class TestScalar:
    def test_rational_arithmetic_is_exact(self):
        third = Scalar.rational(1, 3)
        assert third + third + third == ONE
        assert (third * 3).is_one()
        assert Scalar.rational(2, 4) == Scalar.rational(1, 2)

    def test_zero_is_canonical(self):
        assert Scalar.rational(0) == ZERO
        assert (Scalar.rational(5) - 5).is_zero()
        assert not ZERO

    def test_laurent_exponents_add(self):
        tau = Scalar.param("tau")
        assert tau * Scalar.param("tau", -1) == ONE
        assert tau**3 / tau == Scalar.param("tau", 2)
        assert Scalar.param("tau", 0) == ONE

    def test_imaginary_unit_squares_to_minus_one(self):
        i = Scalar.imaginary()
        assert i * i == Scalar.rational(-1)
        assert not i.is_real()
        assert (i * i).is_real()

    def test_monomial_inverse(self):
        value = Scalar.rational(3, 4) * Scalar.param("h", 2)
        assert (value * value.inverse()).is_one()

    def test_sum_is_not_invertible(self):
        with pytest.raises(NotInvertible):
            (Scalar.param("h") + 1).inverse()

    def test_division_by_zero(self):
        with pytest.raises(NotInvertible):
            Scalar.rational(1) / 0

    def test_substitute_parameters(self):
        value = Scalar.param("tau", -1) * 3 + Scalar.param("h")
        result = value.substitute({"tau": Fraction(1, 2)})
        assert result == Scalar.rational(6) + Scalar.param("h")
        assert result.parameters() == {"h"}

    def test_to_complex(self):
        value = Scalar.gaussian(1, 2) * Scalar.param("h")
        assert value.to_complex({"h": 2.0}) == complex(2, 4)

    def test_to_complex_requires_every_parameter(self):
        with pytest.raises(UnassignedParameter):
            Scalar.param("tau").to_complex({})

    def test_rendering(self):
        assert str(Scalar.rational(-1, 2)) == "-1/2"
        assert str(Scalar.param("tau", -1)) == "tau^-1"
        assert str(ZERO) == "0"


@pytest.mark.unit
class TestGenerator:
    def test_generators_are_interned(self):
        assert Generator("X", [1]) is X1
        assert Generator("F", (), ("y", "x")) is Generator("F", (), ("x", "y"))

    def test_generators_are_immutable(self):
        with pytest.raises(AttributeError):
            X1.name = "Y"

    def test_rendering(self):
        assert str(Generator("g", (1, 2))) == "g[1,2]"
        assert str(Generator("H")) == "H"
        assert str(Generator("A", (1,)).with_partial("x")) == "A[1]_{x}"


@pytest.mark.unit
class TestElement:
    def test_zero_terms_are_dropped(self):
        a = Element.gen(A)
        assert (a - a).is_zero()
        assert Element({(A,): 0}).is_zero()

    def test_words_do_not_commute(self):
        assert Element.word(A, B) != Element.word(B, A)

    def test_commutator(self):
        a, b = Element.gen(A), Element.gen(B)
        assert commutator(a, b) == Element.word(A, B) - Element.word(B, A)
        assert commutator(a, a).is_zero()

    def test_scalar_multiplication(self):
        e = Element.gen(A) * Fraction(1, 2) + Element.scalar(Scalar.param("h"))
        assert e.coefficient((A,)) == Scalar.rational(1, 2)
        assert e.scalar_part() == Scalar.param("h")
        assert e.parameters() == {"h"}

    def test_power(self):
        assert Element.gen(A) ** 3 == Element.word(A, A, A)
        assert Element.gen(A) ** 0 == Element.one()
        with pytest.raises(ValueError):
            Element.gen(A) ** -1

    def test_division_by_scalar(self):
        e = Element.gen(A) / Scalar.param("tau")
        assert e.coefficient((A,)) == Scalar.param("tau", -1)

    def test_substitute_is_a_homomorphism(self):
        e = Element.word(A, B) + Element.gen(B)
        result = e.substitute({A: Element.gen(X1) + 1})
        assert result == Element.word(X1, B) + Element.gen(B) * 2

    def test_generators_and_degree(self):
        e = Element.word(A, B, A) + 1
        assert e.generators() == {A, B}
        assert e.degree() == 3

    def test_rendering_puts_longer_words_first(self):
        e = Element.gen(X1) + Element.word(X1, P1) - 1
        assert render_element(e) == "X[1]*P[1] + X[1] - 1"

    def test_rendering_of_fractions_and_zero(self):
        assert render_element(Element.zero()) == "0"
        assert render_element(Element.word(P1, P1) * Fraction(-1, 2)) == (
            "-1/2*P[1]*P[1]"
        )
