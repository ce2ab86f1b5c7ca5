"""Normal forms in the coordinate algebra of the Heegaard quantum 3-sphere.

The algebra is generated by ``a, b`` with

    ab = λ ba,   ab* = λ^{-1} b*a,
    a*a - p aa* = 1 - p,   b*b - q bb* = 1 - q,   (1 - aa*)(1 - bb*) = 0,

and ``A = 1 - aa*``, ``B = 1 - bb*``.  Every element has a unique expansion in
the basis words ``H^h a^{#μ} b^{#ν}`` with head ``H`` one of ``1, A, B``
(``h >= 1`` for ``A, B``), where ``a^{#μ}`` means ``a^μ`` for ``μ >= 0`` and
``a*^{|μ|}`` otherwise.

Products are computed by rewriting with the letterwise rules

    aa* -> 1 - A        a*a -> 1 - pA        bb* -> 1 - B        b*b -> 1 - qB
    aA  -> p^{-1} Aa    a*A -> p Aa*         bB  -> q^{-1} Bb    b*B -> q Bb*
    aB  -> Ba           bA  -> Ab            AB -> 0             BA -> 0
    b^{#ν} a^{#μ} -> λ^{-νμ} a^{#μ} b^{#ν}

The power formulas for ``a*^m a^n`` and ``a^m a*^n`` are not built in; they
fall out of repeatedly cancelling one letter at the junction.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Sequence

from .scalars import LAM, ONE, P, Q, ZERO, ScalarElement, _tidy, scalar

__all__ = [
    "Monomial",
    "AlgebraElement",
    "EngineError",
    "LETTERS",
    "generator",
    "normalize",
    "parse_word",
    "mul",
    "star",
    "degree",
    "is_coinvariant",
    "a_power",
    "b_power",
    "prod",
]

LETTERS = ("a", "a*", "b", "b*", "A", "B")
_HEAD_RANK = {"1": 0, "A": 1, "B": 2}


class EngineError(RuntimeError):
    """An identity that must hold exactly failed; indicates a bug in the engine."""


class Monomial(NamedTuple):
    """Basis word ``head^power a^{#a_exp} b^{#b_exp}``."""

    head: str
    power: int
    a_exp: int
    b_exp: int

    @classmethod
    def make(cls, head: str = "1", power: int = 0, a_exp: int = 0, b_exp: int = 0) -> "Monomial":
        if head not in _HEAD_RANK:
            raise ValueError(f"unknown head {head!r}")
        if head == "1" and power != 0:
            raise ValueError("unit head carries no power")
        if head != "1" and power < 1:
            raise ValueError(f"head power must be >= 1, got {power}")
        return cls(head, power, a_exp, b_exp)

    def sort_key(self):
        return (_HEAD_RANK[self.head], self.power, abs(self.a_exp), -self.a_exp, abs(self.b_exp), -self.b_exp)

    def __str__(self):
        parts = []
        if self.head != "1":
            parts.append(self.head if self.power == 1 else f"{self.head}^{self.power}")
        for name, e in (("a", self.a_exp), ("b", self.b_exp)):
            if e:
                letter = name if e > 0 else name + "*"
                parts.append(letter if abs(e) == 1 else f"{letter}^{abs(e)}")
        return " ".join(parts) or "1"

    def to_json(self) -> dict:
        return {"head": self.head, "power": self.power, "a_exp": self.a_exp, "b_exp": self.b_exp}


UNIT = Monomial("1", 0, 0, 0)


# -- one-variable contraction ------------------------------------------------


@lru_cache(maxsize=None)
def _contract(e1: int, e2: int, var: str) -> tuple:
    """``g^{#e1} g^{#e2}`` for one disc generator ``g`` (``a`` with ``p``/``A``,
    or ``b`` with ``q``/``B``).

    Returns a tuple of scalars ``c_j`` such that the product equals
    ``(Σ_j c_j H^j) g^{#(e1+e2)}``.
    """
    if e1 == 0 or e2 == 0 or (e1 > 0) == (e2 > 0):
        return (ONE,)
    t = P if var == "p" else Q
    # peel the two letters meeting at the junction
    if e1 > 0:
        # g^{e1-1} (g g*) g*^{|e2|-1},  g g* -> 1 - H
        rest = e1 - 1
        h_coeff = ONE
    else:
        # g*^{|e1|-1} (g* g) g^{e2-1},  g* g -> 1 - tH
        rest = e1 + 1
        h_coeff = t
    inner = _contract(rest, e2 - 1 if e2 > 0 else e2 + 1, var)
    # H moves left past g^{#rest}: g^{#r} H = t^{-r} H g^{#r}
    factor = h_coeff * t ** (-rest)
    out = list(inner) + [ZERO]
    for j in range(len(inner)):
        out[j + 1] = out[j + 1] - factor * inner[j]
    while len(out) > 1 and not out[-1]:
        out.pop()
    return tuple(out)


@lru_cache(maxsize=None)
def _mono_mul(m1: Monomial, m2: Monomial) -> tuple:
    """Normal form of a product of two basis words as ``((Monomial, scalar), ...)``."""
    h1, e1, mu1, nu1 = m1
    h2, e2, mu2, nu2 = m2
    coeff = ONE
    # move the head of m2 left past a^{#mu1} b^{#nu1}
    if h2 == "A" and mu1:
        coeff = P ** (-mu1 * e2)
    elif h2 == "B" and nu1:
        coeff = Q ** (-nu1 * e2)
    if h1 != "1" and h2 != "1" and h1 != h2:
        return ()
    head = h1 if h1 != "1" else h2
    power = e1 + e2
    # b^{#nu1} a^{#mu2} -> λ^{-nu1 mu2} a^{#mu2} b^{#nu1}
    if nu1 and mu2:
        coeff = coeff * LAM ** (-nu1 * mu2)
    apoly = _contract(mu1, mu2, "p")
    bpoly = _contract(nu1, nu2, "q")
    mu, nu = mu1 + mu2, nu1 + nu2
    acc: dict = {}
    for j, cj in enumerate(apoly):
        if not cj:
            continue
        for j2, dj in enumerate(bpoly):
            if not dj:
                continue
            pa = (power if head == "A" else 0) + j
            pb = (power if head == "B" else 0) + j2
            if pa and pb:
                continue
            if pa:
                m = Monomial("A", pa, mu, nu)
            elif pb:
                m = Monomial("B", pb, mu, nu)
            else:
                m = Monomial("1", 0, mu, nu)
            c = coeff * cj * dj
            acc[m] = acc[m] + c if m in acc else c
    return tuple((m, c) for m, c in acc.items() if c)


# -- elements ----------------------------------------------------------------


class AlgebraElement:
    """Finite linear combination of basis words with :class:`ScalarElement` coefficients.

    ``*`` and ``@`` are the algebra product; multiplying by an int, Fraction
    or ScalarElement scales.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Monomial):
                    m = Monomial.make(*m)
                c = scalar(c)
                if c:
                    clean[m] = clean[m] + c if m in clean else c
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "AlgebraElement":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_monomial(cls, m: Monomial, coeff=1) -> "AlgebraElement":
        return cls({m: coeff})

    @property
    def terms(self) -> Mapping[Monomial, ScalarElement]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=Monomial.sort_key)

    def coefficient(self, m: Monomial) -> ScalarElement:
        return self._terms.get(m, ZERO)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            if m in out:
                s = out[m] + c
                if s:
                    out[m] = s
                else:
                    del out[m]
            else:
                out[m] = c
        return AlgebraElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def scale(self, s) -> "AlgebraElement":
        s = scalar(s)
        if not s:
            return ZERO_ELT
        out = {}
        for m, c in self._terms.items():
            v = c * s
            if v:
                out[m] = v
        return AlgebraElement._raw(out)

    # -- product -----------------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return _element_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, AlgebraElement):
            return _element_mul(self, other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = ONE_ELT
        for _ in range(n):
            result = result * self
        return result

    def star(self) -> "AlgebraElement":
        out: dict = {}
        for m, c in self._terms.items():
            cs = c.star()
            for mm, f in _mono_star(m)._terms.items():
                v = cs * f
                out[mm] = out[mm] + v if mm in out else v
        return AlgebraElement._raw({m: c for m, c in out.items() if c})

    # -- substitutions -----------------------------------------------------

    def drop_head(self, head: str) -> "AlgebraElement":
        """Quotient by the ideal generated by ``head`` (``A`` or ``B``): in the
        normal-form basis that ideal is spanned by the words with that head."""
        return AlgebraElement._raw({m: c for m, c in self._terms.items() if m.head != head})

    def map_coefficients(self, fn) -> "AlgebraElement":
        return AlgebraElement({m: fn(c) for m, c in self._terms.items()})

    def evaluate_coefficients(self, p: float, q: float, theta: float = 0.0) -> dict:
        return {m: c.evaluate(p, q, theta) for m, c in self._terms.items()}

    # -- comparison and text -----------------------------------------------

    def __eq__(self, other):
        other = _as_element(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for i, m in enumerate(self.monomials()):
            c = self._terms[m]
            sign, body = _term_text(c, m)
            if i == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"AlgebraElement({str(self)!r})"

    def to_json(self) -> list:
        return [
            {**m.to_json(), "coeff": self._terms[m].serialize()}
            for m in self.monomials()
        ]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "AlgebraElement":
        from .scalars import parse_scalar

        return cls(
            {
                Monomial.make(d["head"], d["power"], d["a_exp"], d["b_exp"]): parse_scalar(d["coeff"])
                for d in data
            }
        )


def _term_text(c: ScalarElement, m: Monomial) -> tuple:
    mono = "" if m == UNIT else str(m)
    if c.is_monomial():
        ((e, k),) = c.terms.items()
        sign = "-" if k < 0 else "+"
        mag = -c if k < 0 else c
        if not mono:
            return sign, str(mag)
        if mag == ONE:
            return sign, mono
        return sign, f"{mag}·{mono}"
    if not mono:
        return "+", f"({c})"
    return "+", f"({c})·{mono}"


def _as_element(x):
    if isinstance(x, AlgebraElement):
        return x
    try:
        s = scalar(x)
    except TypeError:
        return NotImplemented
    return AlgebraElement._raw({UNIT: s} if s else {})


def _element_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    acc: dict = {}
    for m1, c1 in x._terms.items():
        for m2, c2 in y._terms.items():
            prods = _mono_mul(m1, m2)
            if not prods:
                continue
            c12 = c1 * c2
            for m, f in prods:
                tgt = acc.get(m)
                if tgt is None:
                    tgt = acc[m] = {}
                _accumulate(tgt, c12, f)
    out = {}
    for m, raw in acc.items():
        raw = {e: _tidy(c) for e, c in raw.items() if c}
        if raw:
            out[m] = ScalarElement._raw(raw)
    return AlgebraElement._raw(out)


def _accumulate(target: dict, s1: ScalarElement, s2: ScalarElement) -> None:
    get = target.get
    for (p2, q2, l2), c2 in s2._terms.items():
        for (p1, q1, l1), c1 in s1._terms.items():
            e = (p1 + p2, q1 + q2, l1 + l2)
            target[e] = get(e, 0) + c1 * c2


ZERO_ELT = AlgebraElement._raw({})
ONE_ELT = AlgebraElement._raw({UNIT: ONE})


def _letter_monomial(letter: str, n: int = 1) -> Monomial:
    if letter == "a":
        return Monomial("1", 0, n, 0)
    if letter == "a*":
        return Monomial("1", 0, -n, 0)
    if letter == "b":
        return Monomial("1", 0, 0, n)
    if letter == "b*":
        return Monomial("1", 0, 0, -n)
    if letter in ("A", "B"):
        return Monomial(letter, n, 0, 0)
    raise ValueError(f"unknown letter {letter!r}; expected one of {LETTERS}")


def generator(letter: str) -> AlgebraElement:
    """The element for one of the letters ``a, a*, b, b*, A, B``."""
    return AlgebraElement._raw({_letter_monomial(letter): ONE})


def a_power(mu: int) -> AlgebraElement:
    """``a^{#mu}``."""
    return AlgebraElement._raw({Monomial("1", 0, mu, 0): ONE})


def b_power(nu: int) -> AlgebraElement:
    """``b^{#nu}``."""
    return AlgebraElement._raw({Monomial("1", 0, 0, nu): ONE})


@lru_cache(maxsize=None)
def _mono_star(m: Monomial) -> AlgebraElement:
    # (H^h a^{#μ} b^{#ν})* = b^{#-ν} a^{#-μ} H^h
    out = b_power(-m.b_exp) * a_power(-m.a_exp)
    if m.head != "1":
        out = out * AlgebraElement._raw({Monomial(m.head, m.power, 0, 0): ONE})
    return out


def normalize(word: Sequence[str] | str) -> AlgebraElement:
    """Unique basis expansion of a word in the letters ``a, a*, b, b*, A, B``.

    A string is parsed with :func:`parse_word` first.

    >>> str(normalize("a* a"))
    '1 - p·A'
    >>> str(normalize(["b", "a"]))
    'λ^-1·a b'
    """
    if isinstance(word, str):
        word = parse_word(word)
    result = ONE_ELT
    for letter in word:
        result = result * generator(letter)
    return result


_TOKEN = re.compile(r"(a\*|b\*|a|b|A|B)(?:\^(\d+))?$")


def parse_word(text: str) -> list[str]:
    """Parse whitespace-separated tokens ``a a* b b* A B`` with optional ``^n``.

    Raises ``ValueError`` naming the character offset of the first bad token.
    """
    letters: list[str] = []
    for match in re.finditer(r"\S+", text):
        tok = match.group(0)
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse token {tok!r} at position {match.start()}")
        n = int(m.group(2)) if m.group(2) else 1
        letters.extend([m.group(1)] * n)
    return letters


def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return x * y


def star(x: AlgebraElement) -> AlgebraElement:
    return x.star()


def prod(factors: Iterable[AlgebraElement]) -> AlgebraElement:
    result = ONE_ELT
    for f in factors:
        result = result * f
    return result


def _check_weights(k: int, l: int) -> None:
    if k <= 0 or l == 0 or gcd(k, abs(l)) != 1:
        raise ValueError(f"weights need k > 0, l != 0, gcd(k, |l|) = 1; got ({k}, {l})")


def degree(x: AlgebraElement, k: int, l: int) -> int | None:
    """Degree ``kμ + lν`` under ``deg a = k``, ``deg b = l``.

    Returns ``None`` when the monomials of ``x`` disagree (inhomogeneous).
    The zero element has no well-defined degree and raises ``ValueError``.
    """
    _check_weights(k, l)
    if not x:
        raise ValueError("the zero element has no degree")
    degs = {k * m.a_exp + l * m.b_exp for m in x._terms}
    return degs.pop() if len(degs) == 1 else None


def is_coinvariant(x: AlgebraElement, k: int, l: int) -> bool:
    """Fixed by the weighted circle coaction: every monomial has degree 0."""
    _check_weights(k, l)
    return all(k * m.a_exp + l * m.b_exp == 0 for m in x._terms)
