import numpy as np
import pytest
from hypothesis import given, strategies as st

from weighted_heegaard.reps import (
    RepSpec,
    fredholm_identities,
    fredholm_module,
    point_rep,
    relation_residual,
    rep_generator,
    rep_generators,
    stacked_generators,
    summability_partial,
    tau_numeric,
    toeplitz_compactness,
)
from weighted_heegaard.spheres import WeightPair

W11, W23, W2m3 = WeightPair(1, 1), WeightPair(2, 3), WeightPair(2, -3)


def all_specs(w, N, p=0.5, q=0.3):
    for series, bound in (("series1", w.abs_l), ("series2", w.k), ("circle", 1)):
        for i in range(bound):
            yield RepSpec(w, series, i, N, p, q)


def test_spec_validation():
    with pytest.raises(ValueError):
        RepSpec(W23, "series1", 3)
    with pytest.raises(ValueError):
        RepSpec(W23, "series2", 2)
    with pytest.raises(ValueError):
        RepSpec(W23, "nope", 0)
    with pytest.raises(ValueError):
        RepSpec(W23, "series1", 0, N=0)
    with pytest.raises(ValueError):
        RepSpec(W23, "series1", 0, p=1.5)
    assert RepSpec(W23, "circle", 0, N=5).dim == 11


def test_generator_examples():
    spec = RepSpec(W11, "series1", 0, N=6, p=0.5)
    assert np.allclose(np.diag(rep_generator(spec, "A")), 0.5 ** np.arange(6))
    assert not rep_generator(spec, "B").any()
    C = rep_generator(RepSpec(WeightPair(2, 1), "series2", 0, N=6, q=0.3), "C")
    for n in range(1, 6):
        weight = np.sqrt((1 - 0.3 ** (1 + (n - 1) * 2)) * (1 - 0.3 ** (2 + (n - 1) * 2)))
        assert C[n - 1, n] == pytest.approx(weight)
    assert np.count_nonzero(C) == 5
    gens = rep_generators(RepSpec(W11, "circle", 0, N=3))
    assert not gens["A"].any() and not gens["B"].any()
    assert np.array_equal(gens["C*"] @ gens["C"] + np.diag([0, 0, 0, 0, 0, 0, 1]), np.eye(7))


def test_negative_series1_steps_down():
    C = rep_generator(RepSpec(W2m3, "series1", 1, N=8), "C")
    assert np.allclose(np.tril(C), 0)


@pytest.mark.parametrize("w", [W11, W23, W2m3], ids=str)
def test_relation_residuals(w):
    for spec in all_specs(w, 100):
        res = relation_residual(spec)
        assert max(v["residual"] for v in res.values()) <= 1e-10, spec


def test_residual_example_and_edges():
    res = relation_residual(RepSpec(W23, "series1", 1, N=100))
    assert max(v["residual"] for v in res.values()) <= 1e-10
    # the cut-off shift does break C*C at the last column; that is reported, not asserted
    assert res["C*C (sum form)"]["edge"] > 0.5


def test_point_representation():
    gens = point_rep(W23, np.exp(1.3j))
    res = relation_residual(RepSpec(W23, "circle", 0, N=1), gens)
    assert all(v["residual"] == 0 for v in res.values())
    with pytest.raises(ValueError):
        point_rep(W23, 0.5)


def test_truncation_consistency():
    small = RepSpec(W23, "series1", 2, N=10)
    large = RepSpec(W23, "series1", 2, N=200)
    for g in ("A", "B", "C"):
        assert np.allclose(rep_generator(small, g)[:9, :9], rep_generator(large, g)[:9, :9])
    r1, r2 = relation_residual(small), relation_residual(large)
    for name in r1:
        assert abs(r1[name]["residual"] - r2[name]["residual"]) <= 1e-12


def test_stacked_splice():
    gens = stacked_generators(W11, 0, 0, 4, 0.5, 0.3)
    A, B = np.diag(gens["A"]).real, np.diag(gens["B"]).real
    # m = 0..4 on the p side, m = -1..-4 on the q side
    assert np.allclose(A[4:], 0.5 ** np.arange(5)) and not A[:4].any()
    assert np.allclose(B[:4][::-1], 0.3 ** np.arange(4)) and not B[4:].any()


@pytest.mark.parametrize("w", [W11, W23, W2m3, WeightPair(3, -1)], ids=str)
@pytest.mark.parametrize("N", [1, 7, 30])
def test_fredholm_identities_are_exact(w, N):
    fd = fredholm_module(w, 0, 0, N)
    assert all(fredholm_identities(fd).values())
    assert fd.F.dtype.kind == "i"


def test_fredholm_rejects_bad_indices():
    with pytest.raises(ValueError):
        fredholm_module(W23, 3, 0, 5)


def test_tau_examples():
    partial, tail = tau_numeric(W11, 0, 0, "A", 1, 0, 200, p=0.5)
    assert abs(partial - 2.0) <= tail + 1e-12
    assert tau_numeric(W11, 0, 0, "1", 0, 1, 50) == (0.0, 0.0)
    assert tau_numeric(W23, 0, 0, "A", 2, -1, 50)[0] == 0.0
    partial, tail = tau_numeric(WeightPair(2, 1), 0, 0, "B", 1, 0, 200, q=0.3)
    assert abs(partial - 1 / 0.91) <= tail + 1e-12
    with pytest.raises(ValueError):
        tau_numeric(W11, 0, 0, "C", 1, 0, 5)


@given(st.integers(1, 3), st.integers(0, 2), st.sampled_from(["A", "B"]), st.integers(5, 60))
def test_tau_partial_sums_increase_to_the_closed_form(power, s, head, N):
    w = W23
    s = s % w.abs_l
    partial, tail = tau_numeric(w, s, 1, head, power, 0, N)
    bigger, _ = tau_numeric(w, s, 1, head, power, 0, N + 5)
    assert bigger >= partial - 1e-15
    if head == "A":
        exact = 0.5 ** (power * s) / (1 - 0.5 ** (power * 3))
    else:
        exact = 0.3 ** power / (1 - 0.3 ** (power * 2))
    assert -1e-15 <= exact - partial <= tail + 1e-12


def test_negative_case_b_trace_sign():
    # γ = diag(I, -I) puts the series-2 block in the odd part: the trace is negative
    partial, _ = tau_numeric(W2m3, 0, 0, "B", 1, 0, 100)
    assert partial == pytest.approx(-1 / (1 - 0.3**2))


@pytest.mark.parametrize("w", [W11, W23, W2m3], ids=str)
@pytest.mark.parametrize("x", ["A", "B", "C"])
def test_summability(w, x):
    r = summability_partial(w, 0, w.k - 1, x, 60)
    assert r["monotone"] and r["bounded"] and r["termwise_ok"]


def test_summability_examples():
    r = summability_partial(W11, 0, 0, "A", 80)
    assert r["partial_sums"][-1] == pytest.approx(2.0)
    r = summability_partial(W11, 0, 0, "C", 80, p=0.5, q=0.5)
    assert r["bounded"]
    assert r["bound"] == pytest.approx(2 * 0.5 / 0.5 + 1 + 2 * 0.5 / 0.5)
    r = summability_partial(WeightPair(2, 1), 0, 1, "B", 80)
    assert r["partial_sums"][-1] == pytest.approx(0.3 / (1 - 0.09))


def test_toeplitz_example():
    r = toeplitz_compactness(RepSpec(W11, "series1", 0, N=60, p=0.5))
    assert r["shift"] == "U" and r["passed"]
    n = np.arange(60)
    expected = 1 - np.sqrt(1 - 0.5 ** (n + 1.0))
    assert np.allclose(r["norms"][:-1], expected[:-1], atol=1e-15)
    assert r["predicted_index"] <= 28
    assert toeplitz_compactness(RepSpec(W23, "series2", 1, N=60))["shift"] == "U*"
    assert toeplitz_compactness(RepSpec(W2m3, "series1", 0, N=60))["shift"] == "U*"


@pytest.mark.parametrize("w", [W11, W23, W2m3], ids=str)
def test_toeplitz_decay(w):
    for spec in all_specs(w, 80):
        assert toeplitz_compactness(spec)["passed"], spec


def test_toeplitz_window_too_small():
    assert not toeplitz_compactness(RepSpec(W11, "series1", 0, N=10))["passed"]
