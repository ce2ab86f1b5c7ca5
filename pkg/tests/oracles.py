"""Independent oracles for the test-suite.

The operator realisations below are built straight from the defining
relations of the 3-sphere algebra with numpy; they never touch the
rewriting engine.  Two families are used:

* ``a`` a weighted shift ``a e_n = (1 - p^{n+1})^{1/2} e_{n+1}`` and ``b`` the
  diagonal unitary ``b e_n = c λ^{-n} e_n`` (so ``B = 0``);
* the mirror: ``b`` the weighted shift in ``q`` and ``a e_n = c λ^n e_n``
  (so ``A = 0``).

Together they separate the ``A``-headed and ``B``-headed parts of an element.
"""

import cmath
import math

import numpy as np
from hypothesis import strategies as st

P_VAL, Q_VAL, THETA = 0.37, 0.61, 0.1234567
DIM = 40


def shift_rep(which: str, dim: int = DIM, p=P_VAL, q=Q_VAL, theta=THETA, c=cmath.exp(0.7j)):
    lam = cmath.exp(2j * math.pi * theta)
    n = np.arange(dim)
    if which == "a":
        shift = np.zeros((dim, dim), dtype=complex)
        shift[n[:-1] + 1, n[:-1]] = np.sqrt(1 - p ** (n[:-1] + 1.0))
        a = shift
        b = np.diag(c * lam ** (-n.astype(float)))
    else:
        shift = np.zeros((dim, dim), dtype=complex)
        shift[n[:-1] + 1, n[:-1]] = np.sqrt(1 - q ** (n[:-1] + 1.0))
        b = shift
        a = np.diag(c * lam ** n.astype(float))
    one = np.eye(dim, dtype=complex)
    mats = {"a": a, "a*": a.conj().T, "b": b, "b*": b.conj().T}
    mats["A"] = one - a @ a.conj().T
    mats["B"] = one - b @ b.conj().T
    return mats


def word_matrix(word, mats, dim=DIM):
    out = np.eye(dim, dtype=complex)
    for letter in word:
        out = out @ mats[letter]
    return out


def monomial_matrix(m, mats, dim=DIM):
    out = np.eye(dim, dtype=complex)
    if m.head != "1":
        out = out @ np.linalg.matrix_power(mats[m.head], m.power)
    for name, e in (("a", m.a_exp), ("b", m.b_exp)):
        letter = name if e > 0 else name + "*"
        out = out @ np.linalg.matrix_power(mats[letter], abs(e))
    return out


def element_matrix(x, mats, dim=DIM, p=P_VAL, q=Q_VAL, theta=THETA):
    out = np.zeros((dim, dim), dtype=complex)
    for m, c in x.items():
        out += c.evaluate(p, q, theta) * monomial_matrix(m, mats, dim)
    return out


LETTER = st.sampled_from(["a", "a*", "b", "b*", "A", "B"])
WORDS = st.lists(LETTER, min_size=0, max_size=6)


@st.composite
def weight_pairs(draw, max_k=5, max_l=5, sign=None):
    k = draw(st.integers(1, max_k))
    l = draw(st.integers(1, max_l).filter(lambda v: math.gcd(k, v) == 1))
    s = sign if sign is not None else draw(st.sampled_from([1, -1]))
    return k, s * l
