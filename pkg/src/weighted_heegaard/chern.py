"""Exact Chern pairing of the line-bundle idempotents with the trace cocycle.

The cocycle on the sphere basis is

    τ(A^λ) = p^{λs} / (1 - p^{λ|l|}),   τ(B^λ) = q^{λt} / (1 - q^{λk}),

zero on every ``H^λ C^{#μ}`` with ``μ != 0`` and, by convention, ``τ(1) = 0``.
Values are kept as exact rational functions; applied to ``Tr E[n]`` for
``l > 0`` the result reduces to the constant ``-n``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

from .bundles import DEFAULT_LIMIT, connection_f, idempotent_trace
from .heegaard import AlgebraElement
from .reps import DEFAULT_P, DEFAULT_Q, tau_numeric
from .scalars import ONE, P, Q, ZERO, ScalarElement, scalar
from .spheres import Check, WeightPair, coinvariant_membership

__all__ = [
    "RationalFunction",
    "tau_symbolic",
    "tau_element",
    "chern_number",
    "f_vanishing_checks",
    "chern_consistency",
]

_VAR_INDEX = {"p": 0, "q": 1, "λ": 2}


# -- univariate polynomial helpers (dense lists, lowest degree first) ---------------


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        f = a[-1] / lead
        quot[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
    return _trim(quot), a


def _poly_gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]  # monic


def _univariate(x: ScalarElement, var: str) -> tuple[int, list]:
    """``x = var^low * poly(var)`` with ``poly`` a dense coefficient list."""
    i = _VAR_INDEX[var]
    exps = {e[i]: c for e, c in x.terms.items()}
    low = min(exps)
    out = [0] * (max(exps) - low + 1)
    for e, c in exps.items():
        out[e - low] = c
    return low, out


def _from_univariate(low: int, coeffs: list, var: str) -> ScalarElement:
    i = _VAR_INDEX[var]
    terms = {}
    for d, c in enumerate(coeffs):
        if c:
            e = [0, 0, 0]
            e[i] = low + d
            terms[tuple(e)] = c
    return ScalarElement(terms)


class RationalFunction:
    """Quotient of two exact Laurent polynomials.

    Univariate values (only ``p`` or only ``q``) are kept in lowest terms with
    the denominator normalised to constant term 1 and no monomial factor; in
    general only the common monomial content is cancelled.  Equality is
    cross-multiplication, so it is exact whatever the representation.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=ONE, *, reduce: bool = True):
        num, den = scalar(numerator), scalar(denominator)
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.numerator, self.denominator = num, den
        if reduce:
            self._reduce()

    def _reduce(self):
        num, den = self.numerator, self.denominator
        if not num:
            self.numerator, self.denominator = ZERO, ONE
            return
        used = num.variables() | den.variables()
        if len(used) == 1:
            (var,) = used
            nlow, n = _univariate(num, var)
            dlow, d = _univariate(den, var)
            g = _poly_gcd(n, d)
            n, d = _poly_divmod(n, g)[0], _poly_divmod(d, g)[0]
            c = Fraction(d[0])
            n, d = [Fraction(x) / c for x in n], [Fraction(x) / c for x in d]
            self.numerator = _from_univariate(nlow - dlow, n, var)
            self.denominator = _from_univariate(0, d, var)
        else:
            # cancel the lowest monomial of the denominator only
            low = min(den.terms)
            c = den.terms[low]
            unit = ScalarElement.monomial(*low, coeff=c)
            self.numerator = num / unit
            self.denominator = den / unit

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        try:
            return RationalFunction(scalar(other), reduce=False)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator, reduce=False)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
            reduce=False,
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.numerator * other.numerator, self.denominator * other.denominator, reduce=False
        )

    __rmul__ = __mul__

    def reduced(self) -> "RationalFunction":
        return RationalFunction(self.numerator, self.denominator)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        r = self.reduced()
        return hash((r.numerator, r.denominator))

    def is_constant(self) -> bool:
        r = self.reduced()
        return r.numerator.is_constant() and r.denominator.is_constant()

    def constant_value(self) -> Fraction:
        r = self.reduced()
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(r.numerator.constant_term()) / Fraction(r.denominator.constant_term())

    def evaluate(self, p: float = DEFAULT_P, q: float = DEFAULT_Q) -> float:
        return (self.numerator.evaluate(p, q) / self.denominator.evaluate(p, q)).real

    def __str__(self):
        r = self.reduced()
        if r.denominator == ONE:
            return str(r.numerator)
        num = str(r.numerator)
        if len(r.numerator) > 1:
            num = f"({num})"
        return f"{num} / ({r.denominator})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


# -- the trace cocycle --------------------------------------------------------------


def _check_indices(w: WeightPair, s: int, t: int):
    if not 0 <= s < w.abs_l:
        raise ValueError(f"s = {s} out of range [0, {w.abs_l})")
    if not 0 <= t < w.k:
        raise ValueError(f"t = {t} out of range [0, {w.k})")


def tau_symbolic(head: str, power: int, cpower: int, s: int, t: int, w: WeightPair) -> RationalFunction:
    """τ on the basis element ``head^power C^{#cpower}`` (``head = '1'`` for the unit)."""
    _check_indices(w, s, t)
    if head not in ("1", "A", "B"):
        raise ValueError(f"head must be '1', 'A' or 'B', got {head!r}")
    if cpower != 0 or head == "1" or power == 0:
        return RationalFunction(ZERO)
    if head == "A":
        return RationalFunction(P ** (power * s), ONE - P ** (power * w.abs_l))
    return RationalFunction(Q ** (power * t), ONE - Q ** (power * w.k))


def tau_element(x: AlgebraElement, s: int, t: int, w: WeightPair) -> RationalFunction:
    """Linear extension of :func:`tau_symbolic` through the sphere basis."""
    terms = [
        tau_symbolic(head, r, c, s, t, w) * coeff
        for (head, r, c), coeff in sorted(coinvariant_membership(x, w).items())
    ]
    total = reduce(lambda u, v: u + v, terms, RationalFunction(ZERO))
    return total.reduced()


def chern_number(w: WeightPair, n: int, s: int = 0, limit: int = DEFAULT_LIMIT) -> RationalFunction:
    """``τ(Tr E[n])`` as a reduced rational function (``-n`` for ``l > 0``).

    Negative ``l`` is computed the same way but the value is not asserted.
    """
    trace = idempotent_trace(w, n, limit)
    return tau_element(trace, s, 0, w)


def f_vanishing_checks(w: WeightPair) -> list[Check]:
    """``f(p^{s-|l|}) = 1`` for every ``0 <= s < |l|``: one factor of the product vanishes."""
    f = connection_f(w.abs_l)
    out = []
    for s in range(w.abs_l):
        v = f.at(P ** (s - w.abs_l))
        out.append(Check(f"f(p^{s - w.abs_l}) = 1", v == ONE, "" if v == ONE else str(v)))
    return out


def chern_consistency(
    w: WeightPair,
    n: int,
    s: int = 0,
    t: int = 0,
    N: int = 200,
    p: float = DEFAULT_P,
    q: float = DEFAULT_Q,
    tol: float = 1e-8,
) -> dict:
    """Compare the exact pairing at ``p`` with the truncated operator trace."""
    trace = idempotent_trace(w, n)
    symbolic = tau_element(trace, s, t, w)
    sym_value = symbolic.evaluate(p, q)
    numeric, tail = 0.0, 0.0
    for (head, r, c), coeff in sorted(coinvariant_membership(trace, w).items()):
        if head == "1":
            continue  # Tr(γ) = 0 on equal-size blocks
        partial, bound = tau_numeric(w, s, t, head, r, c, N, p, q)
        cval = coeff.evaluate(p, q).real
        numeric += cval * partial
        tail += abs(cval) * bound
    delta = abs(numeric - sym_value)
    return {
        "weight": w.as_list(),
        "n": n,
        "s": s,
        "t": t,
        "symbolic": str(symbolic),
        "symbolic_value": sym_value,
        "numeric": numeric,
        "tail_bound": tail,
        "delta": delta,
        "passed": delta <= tail + tol,
    }
