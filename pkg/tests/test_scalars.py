from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from weighted_heegaard.scalars import (
    LAM,
    ONE,
    P,
    Q,
    ZERO,
    ScalarElement,
    evaluate,
    parse_scalar,
    scalar,
)

p_sym, q_sym, l_sym = sympy.symbols("p q lam")

exponents = st.tuples(*[st.integers(-3, 3)] * 3)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
scalars = st.dictionaries(exponents, coeffs, max_size=5).map(ScalarElement)
units = st.builds(
    lambda e, c: ScalarElement.monomial(*e, coeff=c), exponents, coeffs
)


def to_sympy(x: ScalarElement):
    return sum(
        (sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c))
        * p_sym**ep * q_sym**eq * l_sym**el
        for (ep, eq, el), c in x.terms.items()
    )


def test_examples():
    assert str((1 - P) * (1 + P)) == "1 - p^2"
    assert str((LAM**2 * P).star()) == "p·λ^-2"
    assert (1 - P).serialize() == "1 - 1·p^1"
    assert str(ZERO) == "0"
    assert str(Fraction(1, 2) * Q) == "1/2·q"


def test_zero_coefficients_are_dropped():
    x = ScalarElement({(1, 0, 0): 0, (0, 0, 0): 3})
    assert x == 3
    assert len(x) == 1
    assert not (P - P)


def test_constant_inspection():
    assert scalar(4).is_constant()
    assert scalar(4).constant_term() == 4
    assert not (1 + P).is_constant()
    assert (P * Q * LAM).variables() == {"p", "q", "λ"}


@given(scalars, scalars)
def test_addition_and_multiplication_match_sympy(x, y):
    assert sympy.expand(to_sympy(x + y) - to_sympy(x) - to_sympy(y)) == 0
    assert sympy.expand(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + ZERO == x and x * ONE == x
    assert x - x == ZERO


@given(scalars, scalars)
def test_star_is_an_involutive_ring_map(x, y):
    assert x.star().star() == x
    assert (x * y).star() == x.star() * y.star()
    assert (x + y).star() == x.star() + y.star()


@given(units)
def test_units_invert(u):
    assert u * u.inverse() == ONE
    assert (u**-2) * u**2 == ONE


def test_non_units_do_not_invert():
    with pytest.raises(ZeroDivisionError):
        (1 + P).inverse()
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


@given(scalars)
def test_serialize_roundtrip(x):
    assert parse_scalar(x.serialize()) == x


@given(scalars, st.floats(0.05, 0.95), st.floats(0.05, 0.95), st.floats(0, 1))
def test_evaluate_is_a_homomorphism(x, p, q, theta):
    y = x * (1 - P * LAM)
    lhs = y.evaluate(p, q, theta)
    rhs = x.evaluate(p, q, theta) * (1 - p * complex(sympy.exp(2 * sympy.pi * sympy.I * theta)))
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


def test_evaluate_domain():
    assert evaluate(1 - P, 0.5, 0.3) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        P.evaluate(1.0, 0.3)
    with pytest.raises(ValueError):
        Q.evaluate(0.5, 0.0)


def test_rejects_non_rational_coefficients():
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(TypeError):
        ScalarElement({(0, 0, 0): True})


def test_scale_exponents():
    assert (P**2 * Q).scale_exponents("p", -1) == P**-2 * Q


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_scalar("1 + x^2")


def test_spec_style_examples():
    assert (1 - P) + P == ONE
    assert P + P == 2 * P
    assert P**-1 * P == ONE
    assert LAM * LAM**-1 == ONE
    assert (LAM**2 * P * Q**-1).star() == LAM**-2 * P * Q**-1
    assert scalar(Fraction(3, 2)).star() == Fraction(3, 2)
    assert evaluate(P**-1, 0.5, 0.3) == pytest.approx(2.0)
    assert evaluate(1 - Q, 0.5, 0.3) == pytest.approx(0.7)
    assert evaluate(LAM, 0.5, 0.3, theta=0.25) == pytest.approx(1j)
