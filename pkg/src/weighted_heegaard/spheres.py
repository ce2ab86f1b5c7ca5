"""Quantum weighted Heegaard spheres: generators, relations, GWA structure.

For coprime weights ``k > 0``, ``l != 0`` the fixed points of the coaction
``a -> a ⊗ u^k``, ``b -> b ⊗ u^l`` are generated by ``A``, ``B`` and

    C = a^l b*^k        (l > 0)
    C = a*^{|l|} b*^k   (l < 0)

Sphere elements are kept as elements of the ambient 3-sphere algebra, so the
same rewriting engine checks every identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from types import SimpleNamespace
from typing import Any, Callable

from .heegaard import (
    AlgebraElement,
    EngineError,
    Monomial,
    ONE_ELT,
    a_power,
    b_power,
    generator,
    is_coinvariant,
)
from .scalars import ONE, P, Q, ScalarElement

__all__ = [
    "WeightPair",
    "SphereGenerators",
    "Check",
    "Relation",
    "GWAData",
    "NotMember",
    "make_generators",
    "sphere_relations",
    "verify_sphere_relations",
    "gwa_data",
    "gwa_verify",
    "apply_sigma",
    "basis_element",
    "coinvariant_membership",
    "from_decomposition",
    "power_identity",
]


@dataclass(frozen=True)
class WeightPair:
    k: int
    l: int

    def __post_init__(self):
        if not isinstance(self.k, int) or not isinstance(self.l, int):
            raise TypeError("weights must be integers")
        if self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.l == 0:
            raise ValueError("l must be nonzero")
        if gcd(self.k, abs(self.l)) != 1:
            raise ValueError(f"weights ({self.k}, {self.l}) are not coprime")

    @property
    def sign(self) -> int:
        return 1 if self.l > 0 else -1

    @property
    def abs_l(self) -> int:
        return abs(self.l)

    def as_list(self) -> list[int]:
        return [self.k, self.l]

    def __str__(self):
        return f"({self.k},{self.l})"


@dataclass(frozen=True)
class Check:
    """Outcome of one exact or numeric identity check."""

    name: str
    passed: bool
    witness: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.passed else "fail"}
        if self.witness:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class SphereGenerators:
    A: AlgebraElement
    B: AlgebraElement
    C: AlgebraElement

    @property
    def Cs(self) -> AlgebraElement:
        return self.C.star()


@lru_cache(maxsize=None)
def make_generators(w: WeightPair) -> SphereGenerators:
    A, B = generator("A"), generator("B")
    C = a_power(w.l) * b_power(-w.k)
    gens = SphereGenerators(A, B, C)
    for name, g in (("A", A), ("B", B), ("C", C)):
        if not is_coinvariant(g, w.k, w.l):
            raise EngineError(f"generator {name} = {g} is not coinvariant for {w}")
    return gens


# -- mixed powers of a generator and its adjoint -------------------------------------


def power_identity(letter: str, star_first: bool, m: int, n: int) -> tuple[AlgebraElement, AlgebraElement]:
    """Both sides of the closed form for ``x*^m x^n`` or ``x^m x*^n``.

    With ``x = a`` (``H = A``, ``t = p``) or ``x = b`` (``H = B``, ``t = q``)::

        x*^m x^n = x*^{m-n} ∏_{i=1}^{n} (1 - t^i H)        m >= n
                 = ∏_{i=1}^{m} (1 - t^i H) x^{n-m}         m <= n
        x^m x*^n = x^{m-n} ∏_{i=1}^{n} (1 - t^{1-i} H)     m >= n
                 = ∏_{i=1}^{m} (1 - t^{1-i} H) x*^{n-m}    m <= n

    The left side is computed by the rewriting engine from the raw word.
    """
    if letter not in ("a", "b") or m < 0 or n < 0:
        raise ValueError("letter must be 'a' or 'b' and m, n non-negative")
    power = a_power if letter == "a" else b_power
    head = generator("A" if letter == "a" else "B")
    t = P if letter == "a" else Q
    sign = -1 if star_first else 1
    lhs = power(sign * m) * power(-sign * n)
    exps = range(1, min(m, n) + 1)
    factor = ONE_ELT
    for i in exps:
        factor = factor * (ONE_ELT - head.scale(t ** (i if star_first else 1 - i)))
    rest = power(sign * (m - n))
    rhs = rest * factor if m >= n else factor * rest
    return lhs, rhs


# -- relations ------------------------------------------------------------------


@dataclass(frozen=True)
class Relation:
    """``lhs(g) == rhs(g)`` for a namespace ``g`` of generator images.

    ``g`` carries ``A, B, C, Cs, one``, ``star`` and ``scalar`` (turning a
    :class:`ScalarElement` into whatever the representation multiplies by),
    so the same relation serves the exact engine and the truncated matrices.
    ``shift`` is the largest index excursion of any word in the relation.
    """

    name: str
    lhs: Callable[[Any], Any]
    rhs: Callable[[Any], Any]
    shift: int = 0

    def defect(self, g) -> Any:
        return self.lhs(g) - self.rhs(g)


def _prod(g, factors):
    out = g.one
    for f in factors:
        out = out @ f
    return out


def _poly_A(g, exps):
    """∏ (1 - p^e A) over the exponents."""
    return _prod(g, [g.one - g.scalar(P**e) * g.A for e in exps])


def _poly_B(g, exps):
    return _prod(g, [g.one - g.scalar(Q**e) * g.B for e in exps])


def sphere_relations(w: WeightPair) -> list[Relation]:
    k, l, L = w.k, w.l, w.abs_l
    if w.sign > 0:
        cs_c_A, cs_c_B = range(1, L + 1), [j - k for j in range(1, k + 1)]
        c_cs_A, c_cs_B = [i - l for i in range(1, L + 1)], range(1, k + 1)
    else:
        cs_c_A, cs_c_B = [i + l for i in range(1, L + 1)], [j - k for j in range(1, k + 1)]
        c_cs_A, c_cs_B = range(1, L + 1), range(1, k + 1)

    def product_form(a_exps, b_exps):
        return lambda g: _poly_A(g, a_exps) @ _poly_B(g, b_exps)

    def sum_form(a_exps, b_exps):
        return lambda g: _poly_A(g, a_exps) + _poly_B(g, b_exps) - g.one

    return [
        Relation("A* = A", lambda g: g.star(g.A), lambda g: g.A),
        Relation("B* = B", lambda g: g.star(g.B), lambda g: g.B),
        Relation("AB = 0", lambda g: g.A @ g.B, lambda g: 0 * g.one),
        Relation("BA = 0", lambda g: g.B @ g.A, lambda g: 0 * g.one),
        Relation(f"AC = p^{l} CA", lambda g: g.A @ g.C, lambda g: g.scalar(P**l) * (g.C @ g.A), 1),
        Relation(f"BC = q^{-k} CB", lambda g: g.B @ g.C, lambda g: g.scalar(Q ** (-k)) * (g.C @ g.B), 1),
        Relation("C*C (product form)", lambda g: g.Cs @ g.C, product_form(cs_c_A, cs_c_B), 1),
        Relation("C*C (sum form)", lambda g: g.Cs @ g.C, sum_form(cs_c_A, cs_c_B), 1),
        Relation("CC* (product form)", lambda g: g.C @ g.Cs, product_form(c_cs_A, c_cs_B), 1),
        Relation("CC* (sum form)", lambda g: g.C @ g.Cs, sum_form(c_cs_A, c_cs_B), 1),
    ]


def _symbolic_namespace(w: WeightPair) -> SimpleNamespace:
    gens = make_generators(w)
    return SimpleNamespace(
        A=gens.A,
        B=gens.B,
        C=gens.C,
        Cs=gens.Cs,
        one=ONE_ELT,
        star=lambda x: x.star(),
        scalar=lambda s: s,
    )


def verify_sphere_relations(w: WeightPair) -> list[Check]:
    """Normalize ``lhs - rhs`` of every defining relation; all must vanish."""
    g = _symbolic_namespace(w)
    out = []
    for rel in sphere_relations(w):
        d = rel.defect(g)
        out.append(Check(rel.name, not d, "" if not d else str(d)))
    # the two presentations of each quadratic relation agree (AB = 0 collapse)
    rels = {r.name: r for r in sphere_relations(w)}
    for q in ("C*C", "CC*"):
        d = rels[f"{q} (product form)"].rhs(g) - rels[f"{q} (sum form)"].rhs(g)
        out.append(Check(f"{q}: product form = sum form", not d, "" if not d else str(d)))
    return out


# -- generalised Weyl algebra --------------------------------------------------------


@dataclass(frozen=True)
class GWAData:
    """Degree-one GWA presentation over ``D = C[A, B]/<AB>``."""

    sigma_A: ScalarElement
    sigma_B: ScalarElement
    a_tilde: AlgebraElement
    x_plus: AlgebraElement
    x_minus: AlgebraElement


def _is_in_D(x: AlgebraElement) -> bool:
    return all(m.a_exp == 0 and m.b_exp == 0 for m in x.terms)


def apply_sigma(x: AlgebraElement, data: GWAData, power: int = 1) -> AlgebraElement:
    """The automorphism ``σ^power`` of ``D``: ``A^r -> σ_A^{r·power} A^r``."""
    if not _is_in_D(x):
        raise ValueError(f"{x} is not in the subalgebra generated by A and B")
    out = {}
    for m, c in x.items():
        if m.head == "A":
            c = c * data.sigma_A ** (m.power * power)
        elif m.head == "B":
            c = c * data.sigma_B ** (m.power * power)
        out[m] = c
    return AlgebraElement(out)


def gwa_data(w: WeightPair) -> GWAData:
    gens = make_generators(w)
    g = _symbolic_namespace(w)
    k, l, L = w.k, w.l, w.abs_l
    if w.sign > 0:
        a_tilde = _poly_A(g, [i - l for i in range(1, L + 1)]) @ _poly_B(g, range(1, k + 1))
        return GWAData(P**l, Q ** (-k), a_tilde, gens.Cs, gens.C)
    a_tilde = _poly_A(g, [i + l for i in range(1, L + 1)]) @ _poly_B(g, [j - k for j in range(1, k + 1)])
    return GWAData(P ** (-l), Q**k, a_tilde, gens.C, gens.Cs)


def gwa_verify(w: WeightPair) -> list[Check]:
    data = gwa_data(w)
    Xp, Xm, at = data.x_plus, data.x_minus, data.a_tilde
    A, B = generator("A"), generator("B")

    def check(name, d):
        return Check(name, not d, "" if not d else str(d))

    out = [
        check("X-X+ = ã", Xm * Xp - at),
        check("X+X- = σ(ã)", Xp * Xm - apply_sigma(at, data)),
        Check("ã ≠ 0", bool(at)),
        check("σ(A)σ(B) = 0", apply_sigma(A, data) * apply_sigma(B, data)),
    ]
    for name, alpha in (("A", A), ("B", B), ("A^2", A * A), ("B^2", B * B), ("1 + A - B", ONE_ELT + A - B)):
        out.append(check(f"X+ {name} = σ({name}) X+", Xp * alpha - apply_sigma(alpha, data) * Xp))
        out.append(check(f"X- {name} = σ^-1({name}) X-", Xm * alpha - apply_sigma(alpha, data, -1) * Xm))
    return out


# -- the basis A^r C^{#s}, B^r C^{#s} ---------------------------------------------------


class NotMember(ValueError):
    """The element is not in the span of the sphere basis."""


@lru_cache(maxsize=None)
def basis_element(w: WeightPair, head: str, r: int, s: int) -> AlgebraElement:
    """``H^r C^{#s}`` (``H^0 = 1``) normalized in the 3-sphere algebra."""
    gens = make_generators(w)
    if head == "1":
        if r:
            raise ValueError("unit head has r = 0")
        out = ONE_ELT
    else:
        if r < 1:
            raise ValueError("head power must be >= 1")
        out = AlgebraElement({Monomial(head, r, 0, 0): ONE})
    c = gens.C if s >= 0 else gens.Cs
    for _ in range(abs(s)):
        out = out * c
    return out


def coinvariant_membership(x: AlgebraElement, w: WeightPair) -> dict:
    """Expand ``x`` in the basis ``A^r C^{#s}``, ``B^r C^{#s}``.

    Returns ``{(head, r, s): coefficient}`` with ``head`` in ``'1', 'A', 'B'``
    (``r = 0`` exactly for the unit head).  Raises :class:`NotMember` when a
    monomial of ``x`` is not of the form ``H^r a^{#ls} b^{#-ks}``.
    """
    out = {}
    for m, c in x.items():
        if m.a_exp % w.l or m.b_exp != -w.k * (m.a_exp // w.l):
            raise NotMember(f"monomial {m} is not in the span of the sphere basis for {w}")
        s = m.a_exp // w.l
        key = (m.head, m.power, s)
        basis = basis_element(w, *key)
        if len(basis) != 1 or m not in basis.terms:
            raise EngineError(f"basis element {key} does not normalize to a single word")
        out[key] = c * basis.coefficient(m).inverse()
    return out


def from_decomposition(dec: dict, w: WeightPair) -> AlgebraElement:
    out = AlgebraElement()
    for key, c in dec.items():
        out = out + basis_element(w, *key).scale(c)
    return out
