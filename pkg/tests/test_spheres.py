import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import element_matrix, shift_rep, weight_pairs
from weighted_heegaard.heegaard import ONE_ELT, b_power, generator
from weighted_heegaard.scalars import ONE, P, Q
from weighted_heegaard.spheres import (
    NotMember,
    WeightPair,
    apply_sigma,
    basis_element,
    coinvariant_membership,
    from_decomposition,
    gwa_data,
    gwa_verify,
    make_generators,
    power_identity,
    verify_sphere_relations,
)

A, B = generator("A"), generator("B")
WEIGHTS = [(1, 1), (1, 2), (2, 1), (2, 3), (3, 2), (5, 2)]
ALL_WEIGHTS = WEIGHTS + [(k, -l) for k, l in WEIGHTS]


def test_weight_validation():
    with pytest.raises(ValueError, match="coprime"):
        WeightPair(2, 4)
    with pytest.raises(ValueError):
        WeightPair(0, 1)
    with pytest.raises(ValueError):
        WeightPair(1, 0)
    with pytest.raises(TypeError):
        WeightPair(1.0, 1)
    w = WeightPair(2, -3)
    assert (w.sign, w.abs_l, w.as_list()) == (-1, 3, [2, -3])


def test_generator_examples():
    assert str(make_generators(WeightPair(1, 1)).C) == "a b*"
    assert str(make_generators(WeightPair(1, -1)).C) == "a* b*"
    assert str(make_generators(WeightPair(2, 3)).C) == "a^3 b*^2"


@pytest.mark.parametrize("kl", ALL_WEIGHTS, ids=str)
def test_sphere_relations(kl):
    checks = verify_sphere_relations(WeightPair(*kl))
    assert len(checks) == 12
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


@pytest.mark.parametrize("kl", ALL_WEIGHTS, ids=str)
def test_gwa_axioms(kl):
    checks = gwa_verify(WeightPair(*kl))
    assert all(c.passed for c in checks), [c for c in checks if not c.passed]


def test_relation_examples():
    g = make_generators(WeightPair(1, 1))
    assert g.Cs * g.C == ONE_ELT - A.scale(P) - B
    g = make_generators(WeightPair(2, 3))
    assert g.A * g.C == (g.C * g.A).scale(P**3)
    g = make_generators(WeightPair(2, -3))
    prod_a = ONE_ELT
    for i in range(1, 4):
        prod_a = prod_a * (ONE_ELT - A.scale(P**i))
    prod_b = ONE_ELT
    for j in range(1, 3):
        prod_b = prod_b * (ONE_ELT - B.scale(Q**j))
    assert g.C * g.Cs == prod_a + prod_b - ONE_ELT


def test_gwa_examples():
    data = gwa_data(WeightPair(1, 2))
    g = make_generators(WeightPair(1, 2))
    assert data.x_minus == g.C and data.x_plus == g.Cs
    # ã = ∏_{i=1}^{2} (1 - p^{i-2} A) · (1 - q B)
    at = (ONE_ELT - A.scale(P**-1)) * (ONE_ELT - A) * (ONE_ELT - B.scale(Q))
    assert data.a_tilde == at == g.C * g.Cs
    assert apply_sigma(apply_sigma(A, data), data) == A.scale(P**4)
    assert apply_sigma(B, gwa_data(WeightPair(2, -3))) == B.scale(Q**2)
    with pytest.raises(ValueError):
        apply_sigma(generator("a"), data)


def test_membership_examples():
    w = WeightPair(1, 1)
    g = make_generators(w)
    dec = coinvariant_membership(g.Cs * g.C, w)
    assert dec == {("1", 0, 0): ONE, ("A", 1, 0): -P, ("B", 1, 0): -ONE}
    assert coinvariant_membership(ONE_ELT, w) == {("1", 0, 0): ONE}
    w = WeightPair(2, 3)
    x = A * make_generators(w).C ** 2
    assert list(coinvariant_membership(x, w)) == [("A", 1, 2)]
    with pytest.raises(NotMember):
        coinvariant_membership(generator("a"), w)


@st.composite
def basis_keys(draw):
    head = draw(st.sampled_from(["1", "A", "B"]))
    r = 0 if head == "1" else draw(st.integers(1, 3))
    return head, r, draw(st.integers(-3, 3))


@given(weight_pairs(max_k=3, max_l=3), basis_keys(), basis_keys())
def test_basis_products_reexpand(kl, key1, key2):
    w = WeightPair(*kl)
    x = basis_element(w, *key1) * basis_element(w, *key2)
    dec = coinvariant_membership(x, w)
    assert from_decomposition(dec, w) == x


@pytest.mark.parametrize("kl", [(1, 1), (2, 3), (2, -3), (3, -1)], ids=str)
def test_relations_hold_in_operator_oracle(kl):
    # the generators as operators built independently of the engine
    w = WeightPair(*kl)
    g = make_generators(w)
    for which in ("a", "b"):
        mats = shift_rep(which)
        C = element_matrix(g.C, mats)
        Cs = element_matrix(g.Cs, mats)
        assert np.allclose(C.conj().T[:30, :30], Cs[:30, :30])
        lhs = (Cs @ C)[:, :30]
        rhs = element_matrix(g.Cs * g.C, mats)[:, :30]
        assert np.allclose(lhs, rhs, atol=1e-10)


def test_power_identity_arguments():
    with pytest.raises(ValueError):
        power_identity("c", True, 1, 1)
    lhs, rhs = power_identity("b", False, 2, 1)
    assert lhs == b_power(2) * b_power(-1) == rhs


def test_basis_element_validation():
    w = WeightPair(1, 1)
    with pytest.raises(ValueError):
        basis_element(w, "1", 1, 0)
    with pytest.raises(ValueError):
        basis_element(w, "A", 0, 0)
    assert basis_element(w, "1", 0, -1) == make_generators(w).Cs
