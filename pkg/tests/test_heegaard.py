import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import DIM, WORDS, element_matrix, shift_rep, word_matrix, weight_pairs
from weighted_heegaard.heegaard import (
    AlgebraElement,
    Monomial,
    ONE_ELT,
    ZERO_ELT,
    a_power,
    b_power,
    degree,
    generator,
    is_coinvariant,
    mul,
    normalize,
    parse_word,
    prod,
    star,
)
from weighted_heegaard.scalars import LAM, ONE, P, Q

a, a_s, b, b_s, A, B = (generator(x) for x in ("a", "a*", "b", "b*", "A", "B"))
REPS = {which: shift_rep(which) for which in ("a", "b")}


def agrees_with_operators(word, x):
    """Compare a raw word with an element on the columns the truncation cannot disturb."""
    safe = DIM - len(word) - 1
    # large Laurent coefficients cancel in floating point; scale the tolerance
    size = sum(abs(c.evaluate(0.37, 0.61, 0.1234567)) for _, c in x.items())
    for mats in REPS.values():
        lhs = word_matrix(word, mats)[:, :safe]
        rhs = element_matrix(x, mats)[:, :safe]
        if not np.allclose(lhs, rhs, atol=1e-12 * max(1.0, size)):
            return False
    return True


# -- examples -----------------------------------------------------------------


def test_normal_form_examples():
    assert str(normalize(["a*", "a"])) == "1 - p·A"
    assert normalize(["A", "B"]) == ZERO_ELT
    assert str(normalize(["b", "a"])) == "λ^-1·a b"
    assert normalize("b a") == normalize(["b", "a"])
    expected = prod([ONE_ELT - A.scale(P), ONE_ELT - A.scale(P**2), a])
    assert normalize(["a*", "a*", "a", "a", "a"]) == expected


def test_head_and_letter_commutation():
    # Aa = p aA, i.e. A·a is the basis word "A a" and a·A = p^-1 A a
    assert str(A * a) == "A a"
    assert a * A == (A * a).scale(P**-1)
    assert A * a == (a * A).scale(P)
    assert a_s * A == (A * a_s).scale(P)
    assert b * B == (B * b).scale(Q**-1)
    assert a * B == B * a
    assert b * A == A * b


def test_mul_examples():
    assert mul(a, a_s) == ONE_ELT - A
    m = 3
    expected = prod(ONE_ELT - A.scale(P ** (1 - i)) for i in range(1, m + 1))
    assert mul(a_power(m), a_power(-m)) == expected


def test_star_examples():
    assert star(A) == A and star(B) == B
    assert star(a * b_s) == normalize("b a*")
    assert normalize("b a*") == normalize("a* b").scale(LAM)


def test_degree_examples():
    assert degree(a, 2, 3) == 2
    assert degree(a_power(3) * b_power(-2), 2, 3) == 0
    assert degree(a + b, 2, 3) is None
    assert is_coinvariant(A, 2, 3)
    assert is_coinvariant(a_power(3) * b_power(-2), 2, 3)
    assert not is_coinvariant(a, 1, 1)
    with pytest.raises(ValueError):
        degree(ZERO_ELT, 1, 1)
    with pytest.raises(ValueError):
        degree(a, 2, 4)


def test_parse_word():
    assert parse_word("a*^2 b A") == ["a*", "a*", "b", "A"]
    assert parse_word("") == []
    with pytest.raises(ValueError, match="position 2"):
        parse_word("a c")


def test_monomial_validation():
    with pytest.raises(ValueError):
        Monomial.make("A", 0)
    with pytest.raises(ValueError):
        Monomial.make("1", 2)
    with pytest.raises(ValueError):
        Monomial.make("C", 1)
    assert str(Monomial.make("A", 2, -3, 1)) == "A^2 a*^3 b"


def test_json_roundtrip():
    x = normalize("a* a b* a") + normalize("B b").scale(LAM * Q)
    assert AlgebraElement.from_json(x.to_json()) == x


# -- independent operator oracle ---------------------------------------------------


@given(WORDS)
def test_normal_form_agrees_with_operator_realisations(word):
    assert agrees_with_operators(word, normalize(word))


@pytest.mark.parametrize("which", ["a", "b"])
def test_oracle_satisfies_defining_relations(which):
    # sanity of the oracle itself
    mats = REPS[which]
    lam = np.exp(2j * np.pi * 0.1234567)
    am, bm = mats["a"], mats["b"]
    k = DIM - 2
    assert np.allclose((am @ bm)[:, :k], lam * (bm @ am)[:, :k])
    assert np.allclose((am @ mats["b*"])[:, :k], np.conj(lam) * (mats["b*"] @ am)[:, :k])
    assert np.allclose((mats["A"] @ mats["B"])[:, :k], 0)


# -- algebraic properties ---------------------------------------------------------------


@given(WORDS)
def test_normalize_is_idempotent(word):
    x = normalize(word)
    again = AlgebraElement({})
    for m, c in x.items():
        # re-expand every basis word letter by letter
        letters = [m.head] * m.power if m.head != "1" else []
        letters += ["a" if m.a_exp > 0 else "a*"] * abs(m.a_exp)
        letters += ["b" if m.b_exp > 0 else "b*"] * abs(m.b_exp)
        again = again + normalize(letters).scale(c)
    assert again == x


@given(WORDS, WORDS)
def test_multiplicativity(w1, w2):
    assert normalize(w1 + w2) == normalize(w1) * normalize(w2)


@given(WORDS, WORDS, WORDS)
def test_associativity(w1, w2, w3):
    x, y, z = normalize(w1), normalize(w2), normalize(w3)
    assert (x * y) * z == x * (y * z)


@given(WORDS, WORDS)
def test_star_is_an_anti_homomorphism(w1, w2):
    x, y = normalize(w1), normalize(w2)
    assert (x * y).star() == y.star() * x.star()
    assert x.star().star() == x


@given(WORDS, WORDS, weight_pairs())
def test_degree_is_additive(w1, w2, kl):
    x, y = normalize(w1), normalize(w2)
    xy = x * y
    if x and y and xy:
        dx, dy = degree(x, *kl), degree(y, *kl)
        if dx is not None and dy is not None:
            assert degree(xy, *kl) == dx + dy


@given(WORDS, WORDS)
def test_words_with_both_heads_vanish(w1, w2):
    assert normalize(w1 + ["A"] + w2 + ["B"]) == ZERO_ELT
    assert normalize(["B"] + w1 + ["A"]) == ZERO_ELT


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_phase_formula(m1, n1):
    # b^{#ν} a^{#μ} = λ^{-νμ} a^{#μ} b^{#ν} on single monomials
    x = b_power(n1) * a_power(m1)
    y = a_power(m1) * b_power(n1)
    assert x == y.scale(LAM ** (-n1 * m1))


def test_power_identities_closed_forms():
    # both branches for a and b, 1 <= m, n <= 6, against the operator oracle too
    from weighted_heegaard.spheres import power_identity

    for letter in ("a", "b"):
        for star_first in (True, False):
            for m in range(1, 7):
                for n in range(1, 7):
                    lhs, rhs = power_identity(letter, star_first, m, n)
                    assert lhs == rhs, (letter, star_first, m, n)
                    first, second = (letter + "*", letter) if star_first else (letter, letter + "*")
                    word = [first] * m + [second] * n
                    assert agrees_with_operators(word, rhs)


def test_scalar_multiplication_forms():
    x = normalize("a b")
    assert 2 * x == x.scale(2) == x * 2
    assert (x * P).coefficient(Monomial("1", 0, 1, 1)) == P
    assert x.scale(0) == ZERO_ELT
    assert (ONE_ELT * ONE) == ONE_ELT
