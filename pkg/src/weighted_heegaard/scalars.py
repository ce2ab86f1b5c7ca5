"""Exact coefficients for the Heegaard sphere algebras.

A :class:`ScalarElement` is a Laurent polynomial in the deformation
parameters ``p``, ``q`` and a formal invertible phase ``λ`` (standing for
``exp(2πiθ)`` with θ irrational), with rational coefficients.  Because θ is
irrational no relation among powers of ``λ`` is ever imposed.

Examples
--------
>>> from weighted_heegaard.scalars import P, LAM
>>> str((1 - P) * (1 + P))
'1 - p^2'
>>> str((LAM**2 * P).star())
'p·λ^-2'
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping

__all__ = [
    "ScalarElement",
    "ZERO",
    "ONE",
    "P",
    "Q",
    "LAM",
    "scalar",
    "add",
    "mul",
    "star",
    "evaluate",
    "parse_scalar",
]

Exponent = tuple  # (e_p, e_q, e_lambda)

_VARS = ("p", "q", "λ")


def _coerce_coeff(c):
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"scalar coefficients must be rational, got {c!r}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _tidy(c):
    # Fraction results with unit denominator are stored as int (faster arithmetic)
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


class ScalarElement:
    """Immutable Laurent polynomial in ``p, q, λ`` over the rationals.

    Terms are stored as a map from exponent triples ``(e_p, e_q, e_λ)`` to
    nonzero rational coefficients; the zero scalar is the empty map.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple, Rational] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != 3:
                    raise ValueError(f"exponent must be a triple, got {e!r}")
                c = _coerce_coeff(c)
                if c:
                    clean[e] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "ScalarElement":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, e_p: int = 0, e_q: int = 0, e_lam: int = 0, coeff=1) -> "ScalarElement":
        coeff = _coerce_coeff(coeff)
        if not coeff:
            return ZERO
        return cls._raw({(e_p, e_q, e_lam): coeff})

    # -- inspection -----------------------------------------------------

    @property
    def terms(self) -> Mapping[tuple, Rational]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0, 0) in self._terms)

    def constant_term(self) -> Rational:
        return self._terms.get((0, 0, 0), 0)

    def variables(self) -> set[str]:
        used = set()
        for e in self._terms:
            for name, v in zip(_VARS, e):
                if v:
                    used.add(name)
        return used

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = _tidy(s)
            else:
                out.pop(e, None)
        return ScalarElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ScalarElement._raw({e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ZERO
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for (p2, q2, l2), c2 in b.items():
            for (p1, q1, l1), c1 in a.items():
                e = (p1 + p2, q1 + q2, l1 + l2)
                s = get(e, 0) + c1 * c2
                out[e] = s
        return ScalarElement._raw({e: _tidy(c) for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def inverse(self) -> "ScalarElement":
        """Inverse of a single-term scalar (the units of the Laurent ring)."""
        if len(self._terms) != 1:
            raise ZeroDivisionError(f"{self} is not a unit of the Laurent ring")
        ((ep, eq, el), c), = self._terms.items()
        return ScalarElement._raw({(-ep, -eq, -el): _tidy(Fraction(1) / c)})

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if len(self._terms) == 1:
            ((ep, eq, el), c), = self._terms.items()
            return ScalarElement._raw({(ep * n, eq * n, el * n): c**n})
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def star(self) -> "ScalarElement":
        """Involution: ``p, q`` fixed, ``λ ↦ λ^{-1}``, rational coefficients fixed."""
        return ScalarElement._raw({(ep, eq, -el): c for (ep, eq, el), c in self._terms.items()})

    def scale_exponents(self, var: str, factor: int) -> "ScalarElement":
        i = _VARS.index(var)
        out = {}
        for e, c in self._terms.items():
            e = list(e)
            e[i] *= factor
            out[tuple(e)] = c
        return ScalarElement(out)

    # -- evaluation -----------------------------------------------------

    def evaluate(self, p: float, q: float, theta: float = 0.0) -> complex:
        if not 0.0 < p < 1.0 or not 0.0 < q < 1.0:
            raise ValueError(f"p and q must lie in (0, 1); got p={p}, q={q}")
        lam = cmath.exp(2j * cmath.pi * theta)
        total = 0j
        for (ep, eq, el), c in sorted(self._terms.items()):
            total += float(c) * p**ep * q**eq * lam**el
        return total

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text -----------------------------------------------------------

    def serialize(self) -> str:
        """Canonical exact form, e.g. ``"1 - 1·p^1"``; inverse of :func:`parse_scalar`."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            factors = [f"{name}^{v}" for name, v in zip(_VARS, e) if v]
            body = "·".join([str(abs(c))] + factors)
            parts.append(("-" if c < 0 else "+", body))
        return _join_signed(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items()):
            factors = []
            for name, v in zip(_VARS, e):
                if v == 1:
                    factors.append(name)
                elif v:
                    factors.append(f"{name}^{v}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "·".join(factors)
            else:
                body = "·".join([str(mag)] + factors)
            parts.append(("-" if c < 0 else "+", body))
        return _join_signed(parts)

    def __repr__(self):
        return f"ScalarElement({self.serialize()!r})"


def _join_signed(parts: list) -> str:
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _as_scalar(x):
    if isinstance(x, ScalarElement):
        return x
    if isinstance(x, Rational) and not isinstance(x, bool):
        x = _coerce_coeff(x)
        return ScalarElement._raw({(0, 0, 0): x} if x else {})
    return NotImplemented


def scalar(x) -> ScalarElement:
    """Coerce an int, Fraction or ScalarElement to a ScalarElement."""
    s = _as_scalar(x)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an exact scalar")
    return s


ZERO = ScalarElement._raw({})
ONE = ScalarElement._raw({(0, 0, 0): 1})
P = ScalarElement._raw({(1, 0, 0): 1})
Q = ScalarElement._raw({(0, 1, 0): 1})
LAM = ScalarElement._raw({(0, 0, 1): 1})


def add(x, y) -> ScalarElement:
    return scalar(x) + scalar(y)


def mul(x, y) -> ScalarElement:
    return scalar(x) * scalar(y)


def star(x) -> ScalarElement:
    return scalar(x).star()


def evaluate(x, p: float, q: float, theta: float = 0.0) -> complex:
    return scalar(x).evaluate(p, q, theta)


_TERM = re.compile(r"^(\d+(?:/\d+)?)((?:·[pqλ]\^-?\d+)*)$")


def parse_scalar(text: str) -> ScalarElement:
    """Parse the output of :meth:`ScalarElement.serialize`."""
    text = text.strip()
    if text == "0":
        return ZERO
    tokens = text.replace(" - ", " -").replace(" + ", " +").split(" ")
    terms: dict = {}
    for tok in tokens:
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("+-")
        m = _TERM.match(tok)
        if not m:
            raise ValueError(f"malformed scalar term {tok!r} in {text!r}")
        e = [0, 0, 0]
        for factor in filter(None, m.group(2).split("·")):
            name, v = factor.split("^")
            e[_VARS.index(name)] += int(v)
        e = tuple(e)
        terms[e] = terms.get(e, 0) + sign * Fraction(m.group(1))
    return ScalarElement(terms)


def sum_scalars(items: Iterable[ScalarElement]) -> ScalarElement:
    out: dict = {}
    for s in items:
        for e, c in s._terms.items():
            out[e] = out.get(e, 0) + c
    return ScalarElement._raw({e: _tidy(c) for e, c in out.items() if c})
