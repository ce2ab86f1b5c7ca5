"""Truncated operator realisations of the weighted Heegaard spheres.

Irreducible representations act on ``l^2(N)`` with basis ``e_n``:

* series 1 (index ``s < |l|``): ``A`` diagonal ``p^{n|l|+s}``, ``B = 0``, ``C`` a
  weighted shift (up for ``l > 0``, down for ``l < 0``);
* series 2 (index ``t < k``): ``A = 0``, ``B`` diagonal ``q^{nk+t}``, ``C`` a
  weighted shift down;
* circle: ``A = B = 0`` and ``C`` the bilateral shift on the window
  ``m = -N..N``.

Everything is cut off to a finite window; overflow past the window is
dropped.  Square roots of the weights live only here, in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from types import SimpleNamespace

import numpy as np

from .scalars import ScalarElement
from .spheres import WeightPair, sphere_relations

__all__ = [
    "DEFAULT_P",
    "DEFAULT_Q",
    "SERIES",
    "RepSpec",
    "FredholmData",
    "rep_generators",
    "rep_generator",
    "point_rep",
    "relation_residual",
    "stacked_generators",
    "fredholm_module",
    "fredholm_identities",
    "tau_numeric",
    "summability_partial",
    "toeplitz_compactness",
]

DEFAULT_P = 0.5
DEFAULT_Q = 0.3
SERIES = ("series1", "series2", "circle")


@dataclass(frozen=True)
class RepSpec:
    weight: WeightPair
    series: str
    index: int = 0
    N: int = 50
    p: float = DEFAULT_P
    q: float = DEFAULT_Q

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"series must be one of {SERIES}, got {self.series!r}")
        bound = {"series1": self.weight.abs_l, "series2": self.weight.k, "circle": 1}[self.series]
        if not 0 <= self.index < bound:
            raise ValueError(f"index {self.index} out of range [0, {bound}) for {self.series}")
        if self.N < 1:
            raise ValueError("truncation N must be positive")
        if not (0 < self.p < 1 and 0 < self.q < 1):
            raise ValueError("p and q must lie in (0, 1)")

    @property
    def dim(self) -> int:
        return 2 * self.N + 1 if self.series == "circle" else self.N


def _disc_weights(t: float, base: np.ndarray, width: int) -> np.ndarray:
    """``∏_{i=1}^{width} (1 - t^{i + base})^{1/2}`` elementwise."""
    out = np.ones_like(base, dtype=float)
    for i in range(1, width + 1):
        out *= 1.0 - t ** (base + i).astype(float)
    return np.sqrt(np.clip(out, 0.0, None))


def _series1(w: WeightPair, s: int, N: int, p: float) -> dict:
    L = w.abs_l
    n = np.arange(N)
    A = np.diag(p ** (n * L + s).astype(float)).astype(complex)
    C = np.zeros((N, N), dtype=complex)
    if w.sign > 0:
        wts = _disc_weights(p, n * L + s, L)
        C[n[:-1] + 1, n[:-1]] = wts[:-1]
    else:
        wts = _disc_weights(p, (n - 1) * L + s, L)
        C[n[1:] - 1, n[1:]] = wts[1:]
    return {"A": A, "B": np.zeros((N, N), dtype=complex), "C": C}


def _series2(w: WeightPair, t: int, N: int, q: float) -> dict:
    k = w.k
    n = np.arange(N)
    B = np.diag(q ** (n * k + t).astype(float)).astype(complex)
    C = np.zeros((N, N), dtype=complex)
    wts = _disc_weights(q, (n - 1) * k + t, k)
    C[n[1:] - 1, n[1:]] = wts[1:]
    return {"A": np.zeros((N, N), dtype=complex), "B": B, "C": C}


def _circle(N: int) -> dict:
    dim = 2 * N + 1
    zero = np.zeros((dim, dim), dtype=complex)
    return {"A": zero, "B": zero.copy(), "C": np.eye(dim, k=-1, dtype=complex)}


def rep_generators(spec: RepSpec) -> dict[str, np.ndarray]:
    """Truncated images of ``A, B, C, C*`` under the representation."""
    if spec.series == "series1":
        gens = _series1(spec.weight, spec.index, spec.N, spec.p)
    elif spec.series == "series2":
        gens = _series2(spec.weight, spec.index, spec.N, spec.q)
    else:
        gens = _circle(spec.N)
    gens["C*"] = gens["C"].conj().T
    return gens


def rep_generator(spec: RepSpec, g: str) -> np.ndarray:
    return rep_generators(spec)[g]


def point_rep(w: WeightPair, phase: complex) -> dict[str, np.ndarray]:
    """One-dimensional representation ``A, B -> 0``, ``C -> phase`` with ``|phase| = 1``."""
    if not np.isclose(abs(phase), 1.0):
        raise ValueError("the phase must be unimodular")
    zero = np.zeros((1, 1), dtype=complex)
    C = np.array([[phase]], dtype=complex)
    return {"A": zero, "B": zero, "C": C, "C*": C.conj().T}


def _namespace(gens: dict, p: float, q: float) -> SimpleNamespace:
    dim = gens["A"].shape[0]
    return SimpleNamespace(
        A=gens["A"],
        B=gens["B"],
        C=gens["C"],
        Cs=gens["C*"],
        one=np.eye(dim, dtype=complex),
        star=lambda x: x.conj().T,
        scalar=lambda s: s.evaluate(p, q) if isinstance(s, ScalarElement) else s,
    )


def _safe_mask(spec: RepSpec | None, dim: int, shift: int) -> np.ndarray:
    idx = np.arange(dim)
    if spec is None:
        return np.ones(dim, dtype=bool)
    if spec.series == "circle":
        m = idx - spec.N
        return np.abs(m) <= spec.N - shift
    return idx <= spec.N - 1 - shift


def relation_residual(spec: RepSpec, gens: dict | None = None) -> dict:
    """Operator defects of the sphere relations on the safe subspace.

    For each relation the defect ``lhs - rhs`` is applied to the basis vectors
    that stay inside the window under every word of the relation; the largest
    column norm there is the residual.  The edge columns are reported too but
    carry truncation artefacts by construction.
    """
    point = gens is not None
    gens = gens if point else rep_generators(spec)
    g = _namespace(gens, spec.p if spec else DEFAULT_P, spec.q if spec else DEFAULT_Q)
    out = {}
    for rel in sphere_relations(spec.weight):
        D = np.asarray(rel.defect(g))
        norms = np.linalg.norm(D, axis=0)
        mask = _safe_mask(None if point else spec, D.shape[0], rel.shift)
        out[rel.name] = {
            "residual": float(norms[mask].max(initial=0.0)),
            "edge": float(norms[~mask].max(initial=0.0)),
            "safe_columns": int(mask.sum()),
        }
    return out


# -- Fredholm modules ------------------------------------------------------------


def stacked_generators(w: WeightPair, s: int, t: int, N: int, p: float, q: float) -> dict:
    """Series 1 and series 2 spliced on the window ``m = -N..N``: ``f_m`` is
    ``e^s_m`` for ``m >= 0`` and ``e^t_{-m-1}`` for ``m < 0``."""
    g1 = _series1(w, s, N + 1, p)
    g2 = _series2(w, t, N, q)
    dim = 2 * N + 1
    i1 = np.arange(N + 1) + N  # window index of e^s_n
    i2 = N - 1 - np.arange(N)  # window index of e^t_n
    out = {}
    for name in ("A", "B", "C"):
        M = np.zeros((dim, dim), dtype=complex)
        M[np.ix_(i1, i1)] = g1[name]
        M[np.ix_(i2, i2)] = g2[name]
        out[name] = M
    out["C*"] = out["C"].conj().T
    return out


@dataclass
class FredholmData:
    """Even Fredholm module ``(V ⊕ V', π ⊕ π', F, γ)`` cut off to finite blocks."""

    weight: WeightPair
    s: int
    t: int
    N: int
    p: float
    q: float
    first: dict = field(repr=False)  # generator images on the first summand
    second: dict = field(repr=False)
    F: np.ndarray = field(repr=False)
    gamma: np.ndarray = field(repr=False)

    @property
    def half(self) -> int:
        return self.first["A"].shape[0]

    def image(self, head: str, power: int, cpower: int, block: str = "both") -> np.ndarray:
        """Image of ``head^power C^{#cpower}`` (``head`` in ``A, B`` or ``1``)."""
        mats = []
        for gens in (self.first, self.second):
            c = gens["C"] if cpower >= 0 else gens["C*"]
            M = np.linalg.matrix_power(c, abs(cpower))
            if head != "1":
                # A and B are diagonal: left multiplication scales rows
                M = (np.diag(gens[head]) ** power)[:, None] * M
            mats.append(M)
        if block == "first":
            return mats[0]
        if block == "second":
            return mats[1]
        return _block_diag(*mats)

    def difference(self, head: str, power: int, cpower: int) -> np.ndarray:
        """``π(x) - π'(x)``, the off-diagonal block of ``[F, π̄(x)]``."""
        return self.image(head, power, cpower, "first") - self.image(head, power, cpower, "second")


def _block_diag(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n, m = X.shape[0], Y.shape[0]
    out = np.zeros((n + m, n + m), dtype=complex)
    out[:n, :n] = X
    out[n:, n:] = Y
    return out


@lru_cache(maxsize=32)
def fredholm_module(w: WeightPair, s: int, t: int, N: int, p: float = DEFAULT_P, q: float = DEFAULT_Q) -> FredholmData:
    """``l > 0``: ``π_{s,t} ⊕ π_c`` on two copies of the ``2N+1`` window.
    ``l < 0``: ``π^{-1}_s ⊕ π^{-2}_t`` on two ``N``-dimensional spaces."""
    if not 0 <= s < w.abs_l or not 0 <= t < w.k:
        raise ValueError(f"(s, t) = ({s}, {t}) out of range for {w}")
    if w.sign > 0:
        first = stacked_generators(w, s, t, N, p, q)
        second = _circle(N)
        second["C*"] = second["C"].conj().T
    else:
        first = rep_generators(RepSpec(w, "series1", s, N, p, q))
        second = rep_generators(RepSpec(w, "series2", t, N, p, q))
    half = first["A"].shape[0]
    I, Z = np.eye(half, dtype=int), np.zeros((half, half), dtype=int)
    F = np.block([[Z, I], [I, Z]])
    gamma = np.block([[I, Z], [Z, -I]])
    for arr in (*first.values(), *second.values(), F, gamma):
        arr.setflags(write=False)  # instances are cached and shared
    return FredholmData(w, s, t, N, p, q, first, second, F, gamma)


def fredholm_identities(fd: FredholmData) -> dict[str, bool]:
    """``F* = F``, ``F² = I``, ``γ² = I``, ``Fγ + γF = 0``; integer matrices, exact."""
    F, g = fd.F, fd.gamma
    I = np.eye(F.shape[0], dtype=int)
    return {
        "F* = F": np.array_equal(F.T, F),
        "F^2 = I": np.array_equal(F @ F, I),
        "γ^2 = I": np.array_equal(g @ g, I),
        "Fγ + γF = 0": not np.any(F @ g + g @ F),
    }


def tau_numeric(
    w: WeightPair,
    s: int,
    t: int,
    head: str,
    power: int,
    cpower: int,
    N: int,
    p: float = DEFAULT_P,
    q: float = DEFAULT_Q,
) -> tuple[float, float]:
    """``Tr(γ π̄(head^power C^{#cpower}))`` on the window, with a tail bound.

    Returns ``(partial_sum, tail_bound)``; the tail bound covers the diagonal
    entries beyond the window (a geometric series) and is zero when the
    element is off-diagonal or the unit.
    """
    if head not in ("1", "A", "B"):
        raise ValueError("head must be '1', 'A' or 'B'")
    if head == "1" and power:
        raise ValueError("the unit head has no power")
    fd = fredholm_module(w, s, t, N, p, q)
    x = fd.image(head, power, cpower)
    partial = float(np.real(np.einsum("ij,ji->", fd.gamma, x)))  # Tr(γX) without the product
    tail = 0.0
    if cpower == 0 and head != "1" and power > 0:
        L, k = w.abs_l, w.k
        if head == "A":
            # series-1 side holds n = 0..N (l > 0) or n = 0..N-1 (l < 0)
            last = N if w.sign > 0 else N - 1
            tail = p ** (power * ((last + 1) * L + s)) / (1 - p ** (power * L))
        else:
            tail = q ** (power * (N * k + t)) / (1 - q ** (power * k))
    return partial, tail


def _abs_diagonal(X: np.ndarray) -> np.ndarray:
    """Diagonal of ``|X| = (X*X)^{1/2}``."""
    H = X.conj().T @ X
    evals, V = np.linalg.eigh(H)
    root = (V * np.sqrt(np.clip(evals, 0.0, None))) @ V.conj().T
    return np.real(np.diag(root))


def summability_partial(
    w: WeightPair, s: int, t: int, x: str, N: int, p: float = DEFAULT_P, q: float = DEFAULT_Q
) -> dict:
    """Partial sums of ``Tr|π(x) - π'(x)|`` for ``x`` in ``A, B, C``.

    Diagonal entries of ``|X|`` are summed shell by shell (``m = 0, -1, 1, -2,
    ...`` on the spliced window, ``n = 0, 1, ...`` for ``l < 0``) and compared
    with the geometric bound obtained from the termwise estimate
    ``1 - ∏_{i=1}^{l} (1 - p^{i+c})^{1/2} <= 2^l p^{c+l}`` (and its ``q``
    analogue).
    """
    if x not in ("A", "B", "C"):
        raise ValueError("x must be one of A, B, C")
    fd = fredholm_module(w, s, t, N, p, q)
    head, power, cpower = (x, 1, 0) if x in ("A", "B") else ("1", 0, 1)
    diag = _abs_diagonal(fd.difference(head, power, cpower))
    L, k = w.abs_l, w.k
    if w.sign > 0:
        m = np.arange(-N, N + 1)
        order = np.argsort(np.where(m >= 0, 2 * m, -2 * m - 1), kind="stable")
        labels = m[order]
    else:
        order = np.arange(N)
        labels = order
    terms = diag[order]
    termwise = np.array([_term_bound(w, s, t, x, int(lab), p, q) for lab in labels])
    partial = np.cumsum(terms)
    bound = _series_bound(w, s, t, x, p, q)
    tol = 1e-12
    return {
        "labels": labels.tolist(),
        "terms": terms,
        "partial_sums": partial,
        "bound": bound,
        "monotone": bool(np.all(np.diff(partial) >= -tol)),
        "bounded": bool(np.all(partial <= bound + tol)),
        "termwise_ok": bool(np.all(terms <= termwise + tol)),
    }


def _term_bound(w, s, t, x, label, p, q) -> float:
    L, k = w.abs_l, w.k
    if w.sign > 0:
        m = label
        if x == "A":
            return p ** (m * L + s) if m >= 0 else 0.0
        if x == "B":
            return q ** ((-m - 1) * k + t) if m < 0 else 0.0
        if m >= 0:
            return 2**L * p ** (s + m * L + L)
        if m == -1:
            return 1.0  # π_{s,t}(C) kills e^t_0 while the circle shifts it
        n = -m - 1
        return 2**k * q ** (t + n * k)
    n = label
    if x == "A":
        return p ** (n * L + s)
    if x == "B":
        return q ** (n * k + t)
    if n == 0:
        return 0.0
    return 2**L * p ** (s + (n - 1) * L + L) + 2**k * q ** (t + (n - 1) * k + k)


def _series_bound(w, s, t, x, p, q) -> float:
    L, k = w.abs_l, w.k
    if x == "A":
        return p**s / (1 - p**L)
    if x == "B":
        return q**t / (1 - q**k)
    p_side = 2**L * p ** (s + L) / (1 - p**L)
    q_side = 2**k * q ** (t + k) / (1 - q**k)
    if w.sign > 0:
        return p_side + 1.0 + q_side
    return p_side + q_side


def toeplitz_compactness(spec: RepSpec, threshold: float = 1e-8) -> dict:
    """Column norms of ``π(C) - U`` (series 1, ``l > 0``) or ``π(C) - U*``.

    The defect in column ``n`` is ``1 - w_n`` for the shift weight ``w_n``; it is
    dominated by ``r^{c(n)+1}/(1 - r)`` with ``r`` the disc parameter, so the
    norms fall below ``threshold`` from a predictable index onwards.
    """
    gens = rep_generators(spec)
    N, L, k = spec.N, spec.weight.abs_l, spec.weight.k
    if spec.series == "circle":
        U = np.eye(spec.dim, k=-1)
        norms = np.linalg.norm(gens["C"] - U, axis=0)
        return {
            "shift": "U",
            "norms": norms,
            "bounds": np.zeros_like(norms),
            "predicted_index": 0,
            "passed": bool(np.all(norms == 0)),
        }
    up = spec.series == "series1" and spec.weight.sign > 0
    U = np.eye(N, k=-1) if up else np.eye(N, k=1)
    norms = np.linalg.norm(gens["C"] - U, axis=0)
    n = np.arange(N)
    if spec.series == "series1":
        r, base = spec.p, (n * L if up else (n - 1) * L) + spec.index
    else:
        r, base = spec.q, (n - 1) * k + spec.index
    bounds = np.where(base >= 0, r ** (base + 1.0) / (1 - r), np.inf)
    if not up:
        bounds[0] = 0.0  # C e_0 = U* e_0 = 0
    below = np.nonzero(bounds < threshold)[0]
    predicted = int(below[below > 0][0]) if np.any(below > 0) else N
    tail = norms[predicted:]
    monotone = bool(np.all(np.diff(norms[1:]) <= 1e-15))
    dominated = bool(np.all(norms <= bounds + 1e-15))
    passed = predicted < N and bool(np.all(tail < threshold)) and monotone and dominated
    return {
        "shift": "U" if up else "U*",
        "ratio": r ** (L if spec.series == "series1" else k),
        "norms": norms,
        "bounds": bounds,
        "predicted_index": predicted,
        "monotone": monotone,
        "dominated": dominated,
        "passed": passed,
    }
