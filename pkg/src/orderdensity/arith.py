"""Integer-side arithmetic.

Multiplicative functions, valuations, gcds against supernatural numbers
``d^oo = prod_{l | d} l^oo``, divisor enumeration, multiplicative orders and the
two lifting identities for ``(q^(mn) - 1, d^oo)`` and ``ord_{dv}(q)`` that the
density formulas lean on.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

import sympy

from .errors import NotCoprime, PreconditionViolated, TooLarge

DEFAULT_FACTOR_CAP_BITS = 128


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ``((prime, exponent), ...)`` sorted by prime."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        last = 1
        for prime, exponent in self.pairs:
            if prime <= last or exponent < 1:
                raise ValueError(f"malformed factorization {self.pairs!r}")
            last = prime

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class SupernaturalBase:
    """The supernatural number ``d^oo``; only the prime support of ``d`` matters."""

    d: int
    primes: tuple[int, ...]

    @classmethod
    def of(cls, d: "int | SupernaturalBase") -> "SupernaturalBase":
        if isinstance(d, SupernaturalBase):
            return d
        if d < 1:
            raise PreconditionViolated(f"d must be positive, got {d}")
        return cls(d, factor(d).primes)

    def divides(self, v: int) -> bool:
        """True iff ``v | d^oo``."""
        if v < 1:
            return False
        for l in self.primes:
            while v % l == 0:
                v //= l
        return v == 1


def _base(d) -> SupernaturalBase:
    return SupernaturalBase.of(d)


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> Factorization:
    pairs = tuple(sorted(sympy.factorint(n).items()))
    for p, _ in pairs:
        if not sympy.isprime(p):  # pragma: no cover - sympy certifies its own output
            raise ArithmeticError(f"uncertified factor {p} of {n}")
    return Factorization(pairs)


def factor(n: int, cap_bits: int = DEFAULT_FACTOR_CAP_BITS) -> Factorization:
    """Complete factorization of ``n >= 1``; refuses inputs wider than ``cap_bits``."""
    n = int(n)
    if n < 1:
        raise PreconditionViolated(f"cannot factor {n}")
    if n.bit_length() > cap_bits:
        raise TooLarge(f"{n.bit_length()}-bit integer exceeds the {cap_bits}-bit factorization cap")
    return _factor_cached(n)


def valuation(n: int, l: int) -> int:
    """``v_l(n)`` for ``n != 0``."""
    if n == 0:
        raise PreconditionViolated("valuation of 0 is infinite")
    n = abs(n)
    k = 0
    while n % l == 0:
        n //= l
        k += 1
    return k


def moebius(n: int) -> int:
    if n < 1:
        raise PreconditionViolated(f"moebius needs n >= 1, got {n}")
    fac = factor(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


class ArithSuite(NamedTuple):
    phi: int
    tau: int
    omega: int
    psi: int
    rad: int


def arith_suite(n: int) -> ArithSuite:
    """Euler phi, divisor count, distinct prime count, Dedekind psi and radical of ``n``."""
    if n < 1:
        raise PreconditionViolated(f"arith_suite needs n >= 1, got {n}")
    phi = psi = n
    tau = rad = 1
    fac = factor(n)
    for p, e in fac:
        phi = phi // p * (p - 1)
        psi = psi // p * (p + 1)
        tau *= e + 1
        rad *= p
    return ArithSuite(phi, tau, len(fac), psi, rad)


def euler_phi(n: int) -> int:
    return arith_suite(n).phi


def gcd_supernatural(k: int, base) -> int:
    """``(k, d^oo) = prod_{l | d} l^(v_l(k))``."""
    if k < 1:
        raise PreconditionViolated(f"k must be positive, got {k}")
    out = 1
    for l in _base(base).primes:
        while k % l == 0:
            k //= l
            out *= l
    return out


@lru_cache(maxsize=65536)
def divisors_of(n: int) -> tuple[int, ...]:
    if n < 1:
        raise PreconditionViolated(f"divisors_of needs n >= 1, got {n}")
    divs = [1]
    for p, e in factor(n):
        divs = [x * p**j for x in divs for j in range(e + 1)]
    return tuple(sorted(divs))


def smooth_divisors_up_to(base, bound: int) -> list[int]:
    """All ``w | d^oo`` with ``w <= bound``, ascending."""
    if bound < 1:
        raise PreconditionViolated(f"bound must be positive, got {bound}")
    out = [1]
    for l in _base(base).primes:
        nxt = []
        for w in out:
            while w <= bound:
                nxt.append(w)
                w *= l
        out = nxt
    return sorted(out)


def _carmichael(n: int) -> int:
    lam = 1
    for p, e in factor(n):
        if p == 2 and e >= 3:
            part = 2 ** (e - 2)
        else:
            part = (p - 1) * p ** (e - 1)
        lam = lam * part // math.gcd(lam, part)
    return lam


def order_from_exponent(is_identity, exponent: int) -> int:
    """Strip prime factors from a known group exponent while ``is_identity(t)`` holds.

    ``is_identity(t)`` must report whether the element raised to ``t`` is the identity.
    """
    t = exponent
    for l, e in factor(exponent):
        for _ in range(e):
            if is_identity(t // l):
                t //= l
            else:
                break
    return t


@lru_cache(maxsize=65536)
def mult_order(q: int, n: int) -> int:
    """Least ``t >= 1`` with ``q^t == 1 (mod n)``."""
    if n < 1:
        raise PreconditionViolated(f"modulus must be positive, got {n}")
    if math.gcd(q, n) != 1:
        raise NotCoprime(f"gcd({q}, {n}) != 1")
    if n == 1:
        return 1
    q %= n
    return order_from_exponent(lambda t: pow(q, t, n) == 1, _carmichael(n))


def _v_qpow_direct(q: int, m: int, l: int, sign: int) -> int:
    """``v_l(q^m + sign)`` by modular exponentiation, without forming ``q^m``."""
    k = 64
    while True:
        mod = l**k
        x = (pow(q, m, mod) + sign) % mod
        if x != 0:
            return valuation(x, l)
        k *= 2


def qpow_part(q: int, m: int, base) -> int:
    """``(q^m - 1, d^oo)`` computed prime by prime with modular powers."""
    out = 1
    for l in _base(base).primes:
        out *= l ** _v_qpow_direct(q, m, l, -1)
    return out


def lifting_flag(q: int, m: int, base) -> bool:
    """Whether the extra power of two in :func:`qpow_gcd_supernatural` can be nontrivial.

    That happens exactly when ``2 | d`` and ``q^m == 3 (mod 4)``; with ``m = ord_d(q)``
    this coincides with :func:`proposition_P`.
    """
    return 2 in _base(base).primes and pow(q, m, 4) == 3


def qpow_gcd_supernatural(q: int, m: int, n: int, base, p_flag: bool) -> int:
    """``(q^(mn) - 1, d^oo)`` from ``(q^m - 1, d^oo)`` by the lifting identity.

    The result is ``(q^m-1, d^oo) * (n, d^oo)``, times ``2^(v_2(q^m+1)-1)`` when
    ``p_flag`` holds and ``n`` is even.  Requires ``gcd(d, q) = 1`` and ``d | q^m - 1``.
    """
    b = _base(base)
    if math.gcd(b.d, q) != 1:
        raise PreconditionViolated(f"gcd(d={b.d}, q={q}) != 1")
    if pow(q, m, b.d) != 1 % b.d:
        raise PreconditionViolated(f"d={b.d} does not divide q^m - 1 for q={q}, m={m}")
    out = qpow_part(q, m, b) * gcd_supernatural(n, b)
    if p_flag and n % 2 == 0:
        out *= 2 ** (_v_qpow_direct(q, m, 2, 1) - 1)
    return out


@lru_cache(maxsize=65536)
def qpow_minus_one_part(q: int, r: int, base) -> int:
    """``(q^r - 1, d^oo)`` for arbitrarily large ``r`` via the lifting identity per prime."""
    b = _base(base)
    out = 1
    for l in b.primes:
        if q % l == 0:
            raise NotCoprime(f"{l} divides q={q}")
        t = mult_order(q, l)
        if r % t:
            continue
        out *= qpow_gcd_supernatural(q, t, r // t, SupernaturalBase(l, (l,)), lifting_flag(q, t, l))
    return out


def v_qpow_minus_one(q: int, r: int, l: int) -> int:
    """``v_l(q^r - 1)`` for a prime ``l`` not dividing ``q``."""
    return valuation(qpow_minus_one_part(q, r, SupernaturalBase(l, (l,))), l)


def v_qpow_plus_one(q: int, r: int, l: int) -> int:
    """``v_l(q^r + 1)``."""
    return _v_qpow_direct(q, r, l, 1)


def proposition_P(q: int, d: int, f: int) -> bool:
    """``2 || d``, ``q == 3 (mod 4)`` and ``f`` odd."""
    return d % 2 == 0 and d % 4 != 0 and q % 4 == 3 and f % 2 == 1


def ord_via_formula(q: int, d: int, f: int, v: int) -> int:
    """``ord_{dv}(q)`` from ``f = ord_d(q)`` for ``v | d^oo`` without an order search."""
    if math.gcd(q, d) != 1:
        raise PreconditionViolated(f"gcd(q={q}, d={d}) != 1")
    if not _base(d).divides(v):
        raise PreconditionViolated(f"v={v} does not divide {d}^oo")
    if f != mult_order(q, d):
        raise PreconditionViolated(f"f={f} is not ord_{d}({q})")
    dv = d * v
    if proposition_P(q, d, f) and v % 2 == 0:
        return 2 * f * dv // math.gcd(pow(q, 2 * f, dv) - 1, dv)
    return f * dv // math.gcd(pow(q, f, dv) - 1, dv)


def prime_support(n: int) -> tuple[int, ...]:
    return factor(n).primes


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
