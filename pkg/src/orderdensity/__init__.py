"""Densities of primes P of F_q[T] for which d divides the order of a modulo P.

The modules build on each other: :mod:`arith` (integer arithmetic),
:mod:`ff` (finite fields), :mod:`poly` (F_q[T] and F_q(T)), :mod:`profile`
(invariants of a triple (q, a, d)), :mod:`density` (exact densities) and
:mod:`empirical` (brute-force counts).  :mod:`cli` wires them together.
"""
from .density import (
    AssumptionReport,
    DensityKind,
    DensityValue,
    ProofLevel,
    assumption_check,
    d3_closed,
    d3_series,
    delta_nu_closed,
    delta_w,
    eta,
    proportion_density,
)
from .empirical import (
    CountRecord,
    cesaro,
    count_R,
    d1_probe,
    normalized_error,
    order_mod,
    split_count,
    split_identity_check,
)
from .errors import *  # noqa: F401,F403
from .ff import FFElem, FieldSpec, field_from_q, field_new
from .poly import Poly, RatFunc, parse_poly, parse_ratfunc
from .profile import ArithProfile, dispatch, profile_new, special_case

__version__ = "0.1.0"
