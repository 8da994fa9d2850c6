"""Arithmetic invariants of a triple (q, a, d).

``a = lambda * a~`` with ``a~`` a quotient of monic polynomials, ``h`` the largest
``t`` with ``a~`` a t-th power in K^x, ``m`` the order of ``lambda`` in F_q^x,
``f = ord_d(q)`` and ``f_bar = ord_{d (h, d^oo)}(q)``.  On top of these the
profile exposes the constant-field degrees ``f_{u,v}`` and the geometric
Kummer degrees ``uv / (uv, h)`` consumed by the density formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import reduce

from . import arith
from .arith import SupernaturalBase
from .errors import (
    CharacteristicDividesD,
    ConstantA,
    DLessThanTwo,
    FDoesNotDivideN,
    PDividesN,
    PreconditionViolated,
    ZeroInput,
)
from .ff import FFElem, FieldSpec, unit_order
from .poly import Poly, RatFunc, factorize, gauss_count, monic_part


@dataclass(frozen=True, eq=False)
class ArithProfile:
    field: FieldSpec
    a: RatFunc
    d: int
    lam: FFElem
    a_monic: RatFunc
    h: int
    m: int
    f: int
    f_bar: int
    p_flag: bool
    # monic irreducible factors of a~ with signed exponents (denominator negative)
    factors: tuple[tuple[Poly, int], ...]
    base: SupernaturalBase
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def p(self) -> int:
        return self.field.p

    def __repr__(self):
        return (f"ArithProfile(q={self.q}, a={self.a}, d={self.d}, lambda={self.lam}, h={self.h}, "
                f"m={self.m}, f={self.f}, f_bar={self.f_bar}, P={self.p_flag})")

    # -- cached helpers -------------------------------------------------------------
    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            value = self._cache[key] = fn()
            return value

    def ord_dv(self, v: int) -> int:
        """``ord_{dv}(q)`` for ``v | d^oo`` through the closed order formula."""
        return self._memo(("ord", v), lambda: arith.ord_via_formula(self.q, self.d, self.f, v))

    def check_uv(self, u: int, v: int) -> None:
        if u < 1 or self.d % u:
            raise PreconditionViolated(f"u={u} does not divide d={self.d}")
        if not self.base.divides(v):
            raise PreconditionViolated(f"v={v} does not divide {self.d}^oo")


def _exponent_gcd(factors) -> int:
    return reduce(math.gcd, (abs(e) for _, e in factors), 0)


def profile_new(field: FieldSpec, a, d: int) -> ArithProfile:
    """Build the invariant bundle for ``(q, a, d)``.

    Constant ``a`` and ``d = 1`` are excluded here; see :func:`special_case`.
    """
    a = RatFunc.coerce(a, field)
    if a.field != field:
        raise PreconditionViolated("a is defined over a different field")
    if a.is_zero():
        raise ZeroInput("a must be nonzero")
    if a.is_constant():
        raise ConstantA(f"a={a} is constant")
    if d < 2:
        raise DLessThanTwo(f"d must be >= 2, got {d}")
    if d % field.p == 0:
        raise CharacteristicDividesD(f"the characteristic {field.p} divides d={d}")
    lam, a_monic = monic_part(a)
    factors = [(P, e) for P, e in factorize(a_monic.num)]
    factors += [(P, -e) for P, e in factorize(a_monic.den)]
    factors = tuple(sorted(factors, key=lambda item: item[0]))
    h = _exponent_gcd(factors)
    q = field.q
    base = SupernaturalBase.of(d)
    f = arith.mult_order(q, d)
    f_bar = arith.mult_order(q, d * arith.gcd_supernatural(h, base))
    return ArithProfile(
        field=field, a=a, d=d, lam=lam, a_monic=a_monic, h=h, m=unit_order(lam), f=f,
        f_bar=f_bar, p_flag=arith.proposition_P(q, d, f), factors=factors, base=base,
    )


def is_constant_extension(profile: ArithProfile, n: int) -> bool:
    """Whether ``K(a^(1/n))/K`` only enlarges the constants, i.e. ``a = mu * b^n``."""
    if n < 1:
        raise PreconditionViolated(f"n must be positive, got {n}")
    if n % profile.p == 0:
        raise PDividesN(f"p={profile.p} divides n={n}")
    return profile.h % n == 0


def e_N(profile: ArithProfile, N: int) -> int:
    """``((q^N - 1)/d, d^oo)``; requires ``f | N``."""
    if N < 1 or N % profile.f:
        raise FDoesNotDivideN(f"f={profile.f} does not divide N={N}")
    return profile._memo(("e", N), lambda: arith.qpow_minus_one_part(profile.q, N, profile.base)
                         // profile.d)


def _index_gcd(profile: ArithProfile, r: int, D: int) -> int:
    """``((q^r - 1)/m, D)`` prime by prime, never forming ``q^r - 1``."""
    out = 1
    for l, e in arith.factor(D):
        v = arith.v_qpow_minus_one(profile.q, r, l) - arith.valuation(profile.m, l)
        out *= l ** min(v, e)
    return out


def _constant_degree(profile: ArithProfile, r: int, dd: int) -> int:
    D = math.gcd(dd, profile.h)
    return r * D // _index_gcd(profile, r, D)


def constant_field_degree(profile: ArithProfile, n: int, dd: int) -> int:
    """``[F_q(zeta_n, lambda^(1/(dd, h))) : F_q]``, the constant field degree of ``K(zeta_n, a^(1/dd))``."""
    if n < 1 or dd < 1 or n % dd:
        raise PreconditionViolated(f"need dd | n, got dd={dd}, n={n}")
    if n % profile.p == 0:
        raise PreconditionViolated(f"p={profile.p} divides n={n}")
    return _constant_degree(profile, arith.mult_order(profile.q, n), dd)


def f_uv(profile: ArithProfile, u: int, v: int) -> int:
    """Constant field degree ``f_{u,v}`` of ``K(zeta_{dv}, a^(1/(uv)))``."""
    profile.check_uv(u, v)

    def compute():
        out = _constant_degree(profile, profile.ord_dv(v), u * v)
        k, rem = divmod(out, profile.f)
        assert rem == 0 and profile.base.divides(k), (u, v, out)
        return out

    return profile._memo(("fuv", u, v), compute)


def geometric_degree(profile: ArithProfile, u: int, v: int) -> int:
    """``[K_{dv,uv} : F_{dv,uv} K] = uv / (uv, h)``."""
    profile.check_uv(u, v)
    uv = u * v
    return uv // math.gcd(uv, profile.h)


# -- excluded cases: constant a or d = 1 -------------------------------------------------

@dataclass(frozen=True)
class SpecialCase:
    """Closed-form handling of ``d = 1`` or constant ``a``."""

    field: FieldSpec
    a: RatFunc
    d: int
    kind: str  # "d_one" | "constant"
    density: Fraction
    unit_order: int | None = None

    def count(self, N: int, a_excluded: int = 0) -> int:
        """``R_q(a, d, N)``; ``a_excluded`` is the number of degree-N primes with v_P(a) != 0."""
        I_N = gauss_count(self.field.q, N)
        if self.kind == "d_one":
            return I_N - a_excluded
        return I_N if self.density == 1 else 0


def special_case(field: FieldSpec, a, d: int) -> SpecialCase | None:
    """The closed-form case for ``(a, d)`` if it is one, else ``None``."""
    a = RatFunc.coerce(a, field)
    if a.is_zero():
        raise ZeroInput("a must be nonzero")
    if d < 1:
        raise PreconditionViolated(f"d must be positive, got {d}")
    if d == 1:
        return SpecialCase(field, a, d, "d_one", Fraction(1))
    if a.is_constant():
        lam = FFElem(field, a.num.coeffs[0])
        m = unit_order(lam)
        return SpecialCase(field, a, d, "constant", Fraction(1 if m % d == 0 else 0), m)
    return None


def dispatch(field: FieldSpec, a, d: int) -> ArithProfile | SpecialCase:
    sc = special_case(field, a, d)
    return sc if sc is not None else profile_new(field, a, d)
