"""Circle bundles over the weighted Heegaard spheres.

The total space is the subalgebra generated by ``x = a^{|l|}``, ``y = b^k``,
``z = A``, ``w = B``.  The circle coaction gives ``x`` degree 1, ``y`` degree
``sign(l)`` and ``z, w`` degree 0.  A strong connection ``ω(u^n)`` is built by
recursion; it yields idempotents ``E[n]`` whose traces are polynomials
``g_n(z)`` used in the Chern pairing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .heegaard import (
    AlgebraElement,
    EngineError,
    Monomial,
    ONE_ELT,
    ZERO_ELT,
    a_power,
    b_power,
    generator,
    is_coinvariant,
)
from .scalars import LAM, ONE, P, Q, ZERO, ScalarElement, scalar
from .spheres import Check, WeightPair

__all__ = [
    "ZPolynomial",
    "TensorElement",
    "IdempotentMatrix",
    "ConnectionLimitExceeded",
    "DEFAULT_LIMIT",
    "lens_generators",
    "in_total_space",
    "rho_degree",
    "lens_relations",
    "phase_exponent",
    "connection_f",
    "strong_connection",
    "verify_strong_connection",
    "idempotent",
    "idempotent_trace",
    "g_recursion",
    "trace_g",
    "quotient_check",
    "hat_degree",
]

DEFAULT_LIMIT = 8


class ConnectionLimitExceeded(ValueError):
    pass


# -- polynomials in z ------------------------------------------------------------


class ZPolynomial:
    """Polynomial ``Σ_r d_r z^r`` with :class:`ScalarElement` coefficients.

    Used for the connection polynomial ``f`` and the traces ``g_n``; ``z``
    stands for ``A``.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable = ()):
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        clean = {}
        for r, c in coeffs.items():
            if r < 0:
                raise ValueError("negative powers of z are not allowed")
            c = scalar(c)
            if c:
                clean[int(r)] = c
        self._coeffs = clean

    @property
    def coeffs(self) -> dict[int, ScalarElement]:
        return dict(sorted(self._coeffs.items()))

    def __getitem__(self, r: int) -> ScalarElement:
        return self._coeffs.get(r, ZERO)

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def __add__(self, other):
        other = _as_zpoly(other)
        out = dict(self._coeffs)
        for r, c in other._coeffs.items():
            out[r] = out.get(r, ZERO) + c
        return ZPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ZPolynomial({r: -c for r, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_zpoly(other))

    def __rsub__(self, other):
        return _as_zpoly(other) - self

    def __mul__(self, other):
        other = _as_zpoly(other)
        out: dict = {}
        for (r1, c1), (r2, c2) in itertools.product(self._coeffs.items(), other._coeffs.items()):
            out[r1 + r2] = out.get(r1 + r2, ZERO) + c1 * c2
        return ZPolynomial(out)

    __rmul__ = __mul__

    def rescale(self, c) -> "ZPolynomial":
        """``z -> c·z``."""
        c = scalar(c)
        return ZPolynomial({r: d * c**r for r, d in self._coeffs.items()})

    def at(self, value) -> ScalarElement:
        """Exact substitution of a scalar for ``z``."""
        value = scalar(value)
        return sum((d * value**r for r, d in self._coeffs.items()), ZERO)

    def to_element(self) -> AlgebraElement:
        return AlgebraElement(
            {(Monomial("A", r, 0, 0) if r else Monomial("1", 0, 0, 0)): d for r, d in self._coeffs.items()}
        )

    @classmethod
    def from_element(cls, x: AlgebraElement) -> "ZPolynomial":
        out = {}
        for m, c in x.items():
            if m.a_exp or m.b_exp or m.head == "B":
                raise ValueError(f"{x} is not a polynomial in A alone")
            out[m.power] = c
        return cls(out)

    def __eq__(self, other):
        try:
            other = _as_zpoly(other)
        except TypeError:
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(frozenset(self._coeffs.items()))

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for r, d in sorted(self._coeffs.items()):
            zs = "" if r == 0 else ("z" if r == 1 else f"z^{r}")
            if not zs:
                parts.append(f"({d})")
            else:
                parts.append(f"({d})·{zs}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ZPolynomial({str(self)!r})"

    def to_json(self) -> dict:
        return {str(r): d.serialize() for r, d in sorted(self._coeffs.items())}


def _as_zpoly(x) -> ZPolynomial:
    if isinstance(x, ZPolynomial):
        return x
    return ZPolynomial({0: scalar(x)})


Z = ZPolynomial({1: ONE})


def connection_f(l: int) -> ZPolynomial:
    """``f(z) = 1 - ∏_{i=1}^{|l|} (1 - p^i z)``."""
    if l == 0:
        raise ValueError("l must be nonzero")
    out = ZPolynomial({0: ONE})
    for i in range(1, abs(l) + 1):
        out = out * (1 - Z.rescale(P**i))
    return 1 - out


# -- the total space ----------------------------------------------------------


@lru_cache(maxsize=None)
def lens_generators(w: WeightPair) -> dict[str, AlgebraElement]:
    """``x, x*, y, y*, z, w`` as elements of the 3-sphere algebra."""
    x = a_power(w.abs_l)
    y = b_power(w.k)
    return {"x": x, "x*": x.star(), "y": y, "y*": y.star(), "z": generator("A"), "w": generator("B")}


def in_total_space(x: AlgebraElement, w: WeightPair) -> bool:
    return all(m.a_exp % w.abs_l == 0 and m.b_exp % w.k == 0 for m in x.terms)


def rho_degree(x: AlgebraElement, w: WeightPair) -> int | None:
    """Circle degree ``μ/|l| + sign(l)·ν/k``; ``None`` if inhomogeneous.

    Raises ``ValueError`` if ``x`` is zero or not in the total space.
    """
    if not x:
        raise ValueError("the zero element has no degree")
    if not in_total_space(x, w):
        raise ValueError(f"{x} is not in the total space for {w}")
    degs = {m.a_exp // w.abs_l + w.sign * (m.b_exp // w.k) for m in x.terms}
    return degs.pop() if len(degs) == 1 else None


def phase_exponent(w: WeightPair) -> int:
    """Exponent ``e`` with ``xy = λ^e yx``, computed by the engine."""
    g = lens_generators(w)
    xy, yx = g["x"] * g["y"], g["y"] * g["x"]
    (m, c), = xy.items()
    (m2, c2), = yx.items()
    if m != m2:
        raise EngineError("xy and yx normalize to different words")
    ratio = c * c2.inverse()
    (e, coeff), = ratio.terms.items()
    if e[0] or e[1] or coeff != 1:
        raise EngineError(f"xy/yx = {ratio} is not a pure phase")
    return e[2]


def _zprod(poly_var: str, exps) -> AlgebraElement:
    g = generator("A" if poly_var == "z" else "B")
    t = P if poly_var == "z" else Q
    out = ONE_ELT
    for e in exps:
        out = out * (ONE_ELT - g.scale(t**e))
    return out


def lens_relations(w: WeightPair) -> list[Check]:
    """Defining relations of the total-space algebra, checked by normalization."""
    g = lens_generators(w)
    x, xs, y, ys, z, ww = (g[n] for n in ("x", "x*", "y", "y*", "z", "w"))
    k, L = w.k, w.abs_l
    e = phase_exponent(w)
    lam = LAM**e
    rels = [
        (f"xy = λ^{e} yx", x * y - (y * x).scale(lam)),
        (f"x*y = λ^{-e} yx*", xs * y - (y * xs).scale(lam.inverse())),
        ("xx* = ∏(1 - p^(i-|l|) z)", x * xs - _zprod("z", [i - L for i in range(1, L + 1)])),
        ("x*x = ∏(1 - p^i z)", xs * x - _zprod("z", range(1, L + 1))),
        ("yy* = ∏(1 - q^(i-k) w)", y * ys - _zprod("w", [i - k for i in range(1, k + 1)])),
        ("y*y = ∏(1 - q^i w)", ys * y - _zprod("w", range(1, k + 1))),
        ("z* = z", z.star() - z),
        ("w* = w", ww.star() - ww),
        ("wz = 0", ww * z),
        ("zw = 0", z * ww),
        ("xw = wx", x * ww - ww * x),
        ("yz = zy", y * z - z * y),
        (f"yw = q^{-k} wy", y * ww - (ww * y).scale(Q ** (-k))),
        (f"xz = p^{-L} zx", x * z - (z * x).scale(P ** (-L))),
    ]
    out = [Check(name, not d, "" if not d else str(d)) for name, d in rels]
    out.append(Check(f"phase exponent k|l| = {k * L}", e == k * L, f"engine exponent {e}"))
    return out


# -- tensors and the strong connection --------------------------------------------------------


@dataclass(frozen=True)
class TensorElement:
    """``Σ_i left_i ⊗ right_i``; no simplification across the tensor sign."""

    pairs: tuple

    def __len__(self):
        return len(self.pairs)

    def contract(self) -> AlgebraElement:
        """Multiplication map ``Σ left_i · right_i``."""
        out = ZERO_ELT
        for left, right in self.pairs:
            out = out + left * right
        return out

    def canonical(self) -> dict:
        """Coordinates in the basis of tensor products of basis words."""
        out: dict = {}
        for left, right in self.pairs:
            for (m1, c1), (m2, c2) in itertools.product(left.items(), right.items()):
                key = (m1, m2)
                out[key] = out.get(key, ZERO) + c1 * c2
        return {k: v for k, v in out.items() if v}

    def merged(self) -> "TensorElement":
        """Merge pairs with identical left legs by summing their right legs."""
        acc: dict = {}
        for left, right in self.pairs:
            acc[left] = acc[left] + right if left in acc else right
        return TensorElement(tuple((l, r) for l, r in acc.items() if l and r))


def _step(pairs, left_factor, right_factor):
    return [(left_factor * a, b * right_factor) for a, b in pairs]


@lru_cache(maxsize=None)
def strong_connection(w: WeightPair, n: int, limit: int = DEFAULT_LIMIT) -> TensorElement:
    """``ω(u^n)`` as a tensor with ``2^{|n|}`` pairs.

    Positive ``l``::

        ω(u^n)  = x* ω(u^{n-1}) x + f(z) y* ω(u^{n-1}) y
        ω(u^-n) = x ω(u^{-n+1}) x* + f(p^{-l} z) y ω(u^{-n+1}) y*

    Negative ``l`` (``y`` has degree -1) swaps ``y`` and ``y*``; ``f`` always has
    ``|l|`` factors.
    """
    if abs(n) > limit:
        raise ConnectionLimitExceeded(f"|n| = {abs(n)} exceeds the limit {limit}")
    if n == 0:
        return TensorElement(((ONE_ELT, ONE_ELT),))
    g = lens_generators(w)
    f = connection_f(w.l)
    prev = strong_connection(w, n - 1 if n > 0 else n + 1, limit).pairs
    if n > 0:
        fy = f.to_element() * (g["y*"] if w.sign > 0 else g["y"])
        y_right = g["y"] if w.sign > 0 else g["y*"]
        pairs = _step(prev, g["x*"], g["x"]) + _step(prev, fy, y_right)
    else:
        fy = f.rescale(P ** (-w.abs_l)).to_element() * (g["y"] if w.sign > 0 else g["y*"])
        y_right = g["y*"] if w.sign > 0 else g["y"]
        pairs = _step(prev, g["x"], g["x*"]) + _step(prev, fy, y_right)
    return TensorElement(tuple(pairs))


def verify_strong_connection(T: TensorElement, w: WeightPair, n: int) -> list[Check]:
    """Normalisation ``Σ left·right = 1`` and the two leg-degree conditions."""
    total = T.contract()
    checks = [Check("μ∘ω = 1", total == ONE_ELT, "" if total == ONE_ELT else str(total))]
    bad_right = [str(r) for _, r in T.pairs if not in_total_space(r, w) or rho_degree(r, w) != n]
    bad_left = [str(l) for l, _ in T.pairs if not in_total_space(l, w) or rho_degree(l, w) != -n]
    checks.append(Check(f"right legs have degree {n}", not bad_right, "; ".join(bad_right[:3])))
    checks.append(Check(f"left legs have degree {-n}", not bad_left, "; ".join(bad_left[:3])))
    return checks


# -- idempotents -------------------------------------------------------------------


@dataclass(frozen=True)
class IdempotentMatrix:
    entries: tuple  # tuple of row tuples of AlgebraElement

    @property
    def size(self) -> int:
        return len(self.entries)

    def square(self) -> "IdempotentMatrix":
        n = self.size
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO_ELT
                for m in range(n):
                    acc = acc + self.entries[i][m] * self.entries[m][j]
                row.append(acc)
            rows.append(tuple(row))
        return IdempotentMatrix(tuple(rows))

    def trace(self) -> AlgebraElement:
        out = ZERO_ELT
        for i in range(self.size):
            out = out + self.entries[i][i]
        return out

    def entries_coinvariant(self, w: WeightPair) -> bool:
        return all(is_coinvariant(e, w.k, w.l) for row in self.entries for e in row)


def idempotent(w: WeightPair, n: int, verify: bool = True, limit: int = DEFAULT_LIMIT) -> IdempotentMatrix:
    """``E[n]_{ij} = right_i · left_j`` from the pairs of ``ω(u^n)``."""
    pairs = strong_connection(w, n, limit).pairs
    E = IdempotentMatrix(tuple(tuple(r * l for l, _ in pairs) for _, r in pairs))
    if verify:
        if not E.entries_coinvariant(w):
            raise EngineError(f"E[{n}] for {w} has entries outside the sphere algebra")
        if E.square() != E:
            raise EngineError(f"E[{n}] for {w} is not idempotent")
    return E


def idempotent_trace(w: WeightPair, n: int, limit: int = DEFAULT_LIMIT) -> AlgebraElement:
    """``Tr E[n] = Σ_i right_i · left_i`` without building the full matrix."""
    out = ZERO_ELT
    for left, right in strong_connection(w, n, limit).pairs:
        out = out + right * left
    return out


def g_recursion(w: WeightPair, n: int) -> ZPolynomial:
    """``g_0 = 1``, ``g_{n+1}(z) = (1 - f(p^{-l}z)) g_n(p^{-l}z) + f(z) g_n(z)``."""
    if n < 0:
        raise ValueError("the trace recursion is defined for n >= 0")
    f = connection_f(w.l)
    shift = P ** (-w.abs_l)
    f_shift = f.rescale(shift)
    g = ZPolynomial({0: ONE})
    for _ in range(n):
        g = (1 - f_shift) * g.rescale(shift) + f * g
    return g


def trace_g(w: WeightPair, n: int, limit: int = DEFAULT_LIMIT) -> ZPolynomial:
    """``Tr E[n]`` as a polynomial in ``z``, computed from the strong
    connection and from the recursion; raises :class:`EngineError` if they differ."""
    if n < 0:
        raise ValueError("trace_g is defined for n >= 0")
    traced = ZPolynomial.from_element(idempotent_trace(w, n, limit))
    recursed = g_recursion(w, n)
    if traced != recursed:
        raise EngineError(f"Tr E[{n}] = {traced} but the recursion gives {recursed}")
    if traced[0] != ONE:
        raise EngineError(f"constant term of g_{n} is {traced[0]}, expected 1")
    if any(c.variables() - {"p"} for c in traced.coeffs.values()):
        raise EngineError(f"g_{n} depends on more than p")
    return traced


# -- piecewise triviality ----------------------------------------------------------------


def quotient_check(w: WeightPair) -> list[Check]:
    """Unitarity of ``[y]`` modulo ``<w>`` and of ``[x]`` modulo ``<z>``."""
    g = lens_generators(w)
    x, xs, y, ys = g["x"], g["x*"], g["y"], g["y*"]
    out = []
    for name, val, head in (
        ("yy* = 1 mod <w>", y * ys - ONE_ELT, "B"),
        ("y*y = 1 mod <w>", ys * y - ONE_ELT, "B"),
        ("xx* = 1 mod <z>", x * xs - ONE_ELT, "A"),
        ("x*x = 1 mod <z>", xs * x - ONE_ELT, "A"),
    ):
        d = val.drop_head(head)
        out.append(Check(name, not d, "" if not d else str(d)))
    zw = g["z"] * g["w"]
    wz = g["w"] * g["z"]
    out.append(Check("<w> ∩ <z> = 0 (zw = wz = 0)", not zw and not wz))
    # colinearity of the trivialisations: u -> [y]^{sign l}, u -> [x]
    jw = y if w.sign > 0 else ys
    out.append(Check("j_w(u) has degree 1", rho_degree(jw, w) == 1))
    out.append(Check("j_z(u) has degree 1", rho_degree(x, w) == 1))
    return out


# -- orbifold grading -----------------------------------------------------------------


def hat_degree(h: AlgebraElement, i: int, j: int, w: WeightPair) -> int | None:
    """``(deg h - j + i) / (k|l|)`` for ``h`` in ``Hom(χ_i, χ_j)``.

    Returns ``None`` when ``deg h`` is not ``j - i`` modulo ``k|l|``.
    """
    from .heegaard import degree

    order = w.k * w.abs_l
    if not (0 <= i < order and 0 <= j < order):
        raise ValueError(f"character indices must lie in [0, {order})")
    d = degree(h, w.k, w.l)
    if d is None:
        raise ValueError(f"{h} is not homogeneous")
    if (d - j + i) % order:
        return None
    return (d - j + i) // order
