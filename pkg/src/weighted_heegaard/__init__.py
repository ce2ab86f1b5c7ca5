"""Quantum weighted Heegaard spheres: exact algebra, line bundles, Chern pairing."""

from .heegaard import AlgebraElement, Monomial, normalize, parse_word
from .scalars import LAM, ONE, P, Q, ZERO, ScalarElement, parse_scalar
from .spheres import WeightPair, gwa_verify, make_generators, verify_sphere_relations
from .bundles import idempotent, idempotent_trace, strong_connection, trace_g
from .chern import RationalFunction, chern_number, tau_symbolic
from .reps import RepSpec, fredholm_module, relation_residual, tau_numeric

__all__ = [
    "AlgebraElement",
    "Monomial",
    "normalize",
    "parse_word",
    "ScalarElement",
    "parse_scalar",
    "ZERO",
    "ONE",
    "P",
    "Q",
    "LAM",
    "WeightPair",
    "make_generators",
    "verify_sphere_relations",
    "gwa_verify",
    "strong_connection",
    "idempotent",
    "idempotent_trace",
    "trace_g",
    "RationalFunction",
    "chern_number",
    "tau_symbolic",
    "RepSpec",
    "fredholm_module",
    "relation_residual",
    "tau_numeric",
]

__version__ = "0.1.0"
