"""Exact densities of R_q(a, d).

* :func:`proportion_density` -- the degree-N coefficient of ``q^N / N``.
* :func:`delta_w` -- its constant value on each progression ``{f w (alpha + d n)}``.
* :func:`d3_series` -- the Cesaro (d_3) density as a truncated series with an exact tail bound.
* :func:`d3_closed` -- the finite product valid when ``f_{u,v} = ord_{dv}(q)`` throughout.

All arithmetic is in :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .errors import AssumptionNotVerified, PreconditionViolated
from .profile import ArithProfile, e_N, f_uv, geometric_degree

DEFAULT_EPSILON = Fraction(1, 10**9)
DEFAULT_V_BOUND = 10**4


class DensityKind(str, enum.Enum):
    PROPORTION = "proportion"
    DELTA_W = "delta_w"
    SERIES_TRUNCATED = "series_truncated"
    CLOSED_FORM = "closed_form"


class ProofLevel(str, enum.Enum):
    THEOREM = "theorem"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class DensityValue:
    value: Fraction
    tail_bound: Fraction
    kind: DensityKind
    proof_level: ProofLevel | None = None

    def interval(self) -> tuple[Fraction, Fraction]:
        return self.value - self.tail_bound, self.value + self.tail_bound


@dataclass(frozen=True)
class AssumptionReport:
    verified: bool
    proof_level: ProofLevel
    v_bound: int | None = None
    counterexample: tuple[int, int] | None = None  # (u, v) with f_uv != ord_dv(q)

    def as_dict(self) -> dict:
        return {
            "verified": self.verified,
            "proof_level": self.proof_level.value,
            "v_bound": self.v_bound,
            "counterexample": list(self.counterexample) if self.counterexample else None,
        }


def to_fraction(x) -> Fraction:
    """Exact rational from a Fraction, int, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _mobius_divisors(d: int):
    return [(u, arith.moebius(u)) for u in arith.divisors_of(d) if arith.moebius(u)]


def proportion_density(profile: ArithProfile, N: int) -> DensityValue:
    """Double sum over ``v | e_N`` and ``u | d`` of ``mu(u) [f_{u,v} | N] / (uv/(uv,h))``."""
    if N < 1:
        raise PreconditionViolated(f"degree must be positive, got {N}")
    total = Fraction(0)
    if N % profile.f == 0:
        for v in arith.divisors_of(e_N(profile, N)):
            for u, mu in _mobius_divisors(profile.d):
                if N % f_uv(profile, u, v) == 0:
                    total += Fraction(mu, geometric_degree(profile, u, v))
    return DensityValue(total, Fraction(0), DensityKind.PROPORTION)


def progression_index(profile: ArithProfile, N: int) -> int | None:
    """The ``w | d^oo`` whose progressions ``f w (alpha + d n)`` contain N, or None if ``f`` does not divide N."""
    if N % profile.f:
        return None
    return arith.gcd_supernatural(N // profile.f, profile.base)


def delta_w(profile: ArithProfile, w: int) -> DensityValue:
    """Value of the proportion-density on the progressions indexed by ``w | d^oo``."""
    if not profile.base.divides(w):
        raise PreconditionViolated(f"w={w} does not divide {profile.d}^oo")

    def compute():
        fw = profile.f * w
        total = Fraction(0)
        for v in arith.divisors_of(e_N(profile, fw)):
            for u, mu in _mobius_divisors(profile.d):
                if fw % f_uv(profile, u, v) == 0:
                    uv = u * v
                    total += Fraction(mu * math.gcd(uv, profile.h), uv)
        return total

    return DensityValue(profile._memo(("delta_w", w), compute), Fraction(0), DensityKind.DELTA_W)


def eta(profile: ArithProfile, m: int, n: int) -> int:
    """Correction factor: ``2^(v_2(q^f_bar + 1) - 1)`` when ``[P]`` and ``2 | gcd(m, n)``, else 1."""
    if profile.p_flag and math.gcd(m, n) % 2 == 0:
        return 2 ** (arith.v_qpow_plus_one(profile.q, profile.f_bar, 2) - 1)
    return 1


def assumption_check(profile: ArithProfile, v_bound: int = DEFAULT_V_BOUND) -> AssumptionReport:
    """Whether ``f_{u,v} = ord_{dv}(q)`` for every ``u | d``, ``v | d^oo``.

    Proven outright when ``(d, h) = 1`` or ``(d, m) = 1``; otherwise checked for
    ``v <= v_bound`` only and reported as bounded.
    """
    d = profile.d
    if math.gcd(d, profile.h) == 1 or math.gcd(d, profile.m) == 1:
        return AssumptionReport(True, ProofLevel.THEOREM)
    for v in arith.smooth_divisors_up_to(profile.base, v_bound):
        r = arith.mult_order(profile.q, d * v)
        for u in arith.divisors_of(d):
            if f_uv(profile, u, v) != r:
                return AssumptionReport(False, ProofLevel.BOUNDED, v_bound, (u, v))
    return AssumptionReport(True, ProofLevel.BOUNDED, v_bound)


def _require_assumption(profile, assumption):
    report = assumption if assumption is not None else assumption_check(profile)
    if not report.verified:
        raise AssumptionNotVerified(
            f"f_(u,v) differs from ord_(dv)(q) at (u, v) = {report.counterexample}", report)
    return report


def delta_nu_closed(profile: ArithProfile, nu: int,
                    assumption: AssumptionReport | None = None) -> DensityValue:
    """Closed form of ``delta_w`` at ``f w = f_bar nu``, valid under the assumption."""
    report = _require_assumption(profile, assumption)
    if not profile.base.divides(nu):
        raise PreconditionViolated(f"nu={nu} does not divide {profile.d}^oo")
    q, d, fb = profile.q, profile.d, profile.f_bar
    dh = d * profile.h
    total = Fraction(0)
    for u, mu in _mobius_divisors(d):
        den = (u * arith.qpow_part(q, fb, u) * arith.gcd_supernatural(nu, u)
               * eta(profile, nu, u))
        num = mu * arith.gcd_supernatural(dh, u)
        total += Fraction(num, den)
    return DensityValue(total, Fraction(0), DensityKind.DELTA_W, report.proof_level)


def delta_w_closed(profile: ArithProfile, w: int,
                   assumption: AssumptionReport | None = None) -> DensityValue:
    """``delta_w`` through :func:`delta_nu_closed`, or 0 when ``f_bar`` does not divide ``f w``."""
    report = _require_assumption(profile, assumption)
    fw = profile.f * w
    if fw % profile.f_bar:
        return DensityValue(Fraction(0), Fraction(0), DensityKind.DELTA_W, report.proof_level)
    return delta_nu_closed(profile, fw // profile.f_bar, report)


def _reciprocal_mass(base) -> Fraction:
    """``sum_{w | d^oo} 1/w = prod_{l | d} l/(l-1)``."""
    out = Fraction(1)
    for l in arith.SupernaturalBase.of(base).primes:
        out *= Fraction(l, l - 1)
    return out


def d3_series(profile: ArithProfile, epsilon=DEFAULT_EPSILON) -> DensityValue:
    """Truncated ``phi(d)/(d f) * sum_{w | d^oo} delta_w / w`` with an exact tail bound <= epsilon.

    The bound uses ``0 <= delta_w <= 1``; the truncation point doubles until it holds.
    """
    eps = to_fraction(epsilon)
    if eps <= 0:
        raise PreconditionViolated("epsilon must be positive")
    scale = Fraction(arith.euler_phi(profile.d), profile.d * profile.f)
    mass = _reciprocal_mass(profile.base)
    W = 1
    while True:
        ws = arith.smooth_divisors_up_to(profile.base, W)
        partial = sum((Fraction(1, w) for w in ws), Fraction(0))
        tail = scale * (mass - partial)
        if tail <= eps:
            break
        W *= 2
    value = scale * sum((delta_w(profile, w).value / w for w in ws), Fraction(0))
    return DensityValue(value, tail, DensityKind.SERIES_TRUNCATED)


def d3_closed(profile: ArithProfile, assumption: AssumptionReport | None = None) -> DensityValue:
    """Finite product for the d_3 density; raises :class:`AssumptionNotVerified` when unsupported."""
    report = _require_assumption(profile, assumption)
    q, d, fb = profile.q, profile.d, profile.f_bar
    dh = d * profile.h
    value = Fraction(1, fb)
    for l in profile.base.primes:
        term = Fraction(l ** arith.valuation(dh, l),
                        (l + 1) * l ** arith.v_qpow_minus_one(q, fb, l))
        if l == 2 and profile.p_flag:
            C = Fraction(3, 4) + Fraction(1, 2 ** (arith.v_qpow_plus_one(q, fb, 2) + 1))
            term *= C
        value *= 1 - term
    return DensityValue(value, Fraction(0), DensityKind.CLOSED_FORM, report.proof_level)
