"""Brute-force ground truth for R_q(a, d, N) and the Kummer split counts.

Two engines produce the same :class:`DegreeCounts` histogram:

``reference``
    walks the monic degree-N polynomials in odometer order, keeps the
    irreducible ones and computes ``ord_P(a)`` by descent from ``q^N - 1``.
``fast``
    counts through the roots of the primes inside F_{q^N} with compiled
    exp/log tables (see :mod:`orderdensity.fastcount`).

Both record, for every prime P with ``v_P(a) = 0``, the class
``g = gcd((q^N - 1) / ord_P(a), L)`` where ``L`` is the part of ``q^N - 1``
supported on a fixed prime set.  Then ``d | ord_P(a)`` iff ``d | L/g``, and
``a^((q^N-1)/dd) = 1 (mod P)`` iff ``dd | g``, for any d, dd built from those primes.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import arith
from .density import proportion_density
from .errors import BadReduction, FTooSmall, FDoesNotDivideN, PreconditionViolated, BudgetExceeded
from .ff import FieldSpec
from .poly import (Poly, RatFunc, check_budget, factorize, gauss_count, irreducibles,
                   monic_part, partition_range, poly_inverse_mod, powmod)
from .profile import ArithProfile, e_N

ENGINES = ("auto", "fast", "reference")
# below this many monic polynomials the reference engine is quick enough and skips compilation
REFERENCE_CUTOFF = 2**12
BASE_PRIMES = (2, 3, 5, 7)


def order_mod(a, P: Poly) -> int:
    """Multiplicative order of ``a`` in ``(F_q[T]/P)^x``."""
    a = RatFunc.coerce(a, P.field)
    if P.degree < 1 or not P.is_monic():
        raise PreconditionViolated("P must be monic of positive degree")
    num, den = a.num % P, a.den % P
    if num.is_zero() or den.is_zero():
        raise BadReduction(f"v_P(a) != 0 for P = {P}")
    r = num * poly_inverse_mod(den, P) % P
    return arith.order_from_exponent(lambda t: powmod(r, t, P).is_one(), P.field.q**P.degree - 1)


@dataclass(frozen=True)
class DegreeCounts:
    """Primes of one degree, bucketed by ``gcd((q^N-1)/ord_P(a), L)``."""

    q: int
    N: int
    L: int
    classes: dict  # g -> number of primes
    a_excluded: int

    @property
    def group_order(self) -> int:
        return self.q**self.N - 1

    def _check_primes(self, n):
        for l in arith.factor(n).primes:
            if self.group_order % l == 0 and self.L % l:
                raise PreconditionViolated(f"prime {l} is not tracked by this count (L={self.L})")

    def R(self, d: int) -> int:
        """Primes with ``v_P(a) = 0`` and ``d | ord_P(a)``."""
        self._check_primes(d)
        return sum(c for g, c in self.classes.items() if (self.L // g) % d == 0)

    def split(self, n: int, dd: int) -> int:
        """``{K_{n,dd}}_N``: ``n | q^N - 1`` and ``a^((q^N-1)/dd) = 1`` mod P."""
        if n % dd:
            raise PreconditionViolated(f"dd={dd} does not divide n={n}")
        if self.group_order % n:
            return 0
        self._check_primes(dd)
        return sum(c for g, c in self.classes.items() if g % dd == 0)


def _tracked_L(q: int, N: int, primes) -> int:
    return arith.gcd_supernatural(q**N - 1, math.prod(set(primes)))


# -- engines -------------------------------------------------------------------------

def _reference_counts(F: FieldSpec, a: RatFunc, N: int, L: int, workers: int, budget):
    check_budget(F.q, N, budget)
    Qm1 = F.q**N - 1

    def run(span):
        classes, excluded = {}, 0
        for P in irreducibles(F, N, span[0], span[1], budget=budget):
            try:
                o = order_mod(a, P)
            except BadReduction:
                excluded += 1
                continue
            g = math.gcd(Qm1 // o, L)
            classes[g] = classes.get(g, 0) + 1
        return classes, excluded

    spans = partition_range(F.q**N, workers)
    if len(spans) == 1:
        parts = [run(spans[0])]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(len(spans)) as pool:
            parts = list(pool.map(run, spans))
    classes, excluded = {}, 0
    for c, e in parts:
        excluded += e
        for g, n in c.items():
            classes[g] = classes.get(g, 0) + n
    return classes, excluded


def _a_structure(a: RatFunc):
    lam, monic = monic_part(a)
    factors = [(P, e) for P, e in factorize(monic.num)] if monic.num.degree > 0 else []
    factors += [(P, -e) for P, e in factorize(monic.den)] if monic.den.degree > 0 else []
    return lam.code, factors


def _fast_counts(F: FieldSpec, a_list, N: int, L: int, workers: int, budget):
    from . import fastcount

    check_budget(F.q, N, budget)
    structs = [_a_structure(a) for a in a_list]
    polys = sorted({P for _, fs in structs for P, _ in fs})
    specs = []
    for lam, fs in structs:
        ex = dict((P, e) for P, e in fs)
        specs.append((lam, tuple(ex.get(P, 0) for P in polys)))
    divs, table = fastcount.count_roots(F, N, polys, specs, L, workers)
    out = []
    T = Poly.T(F)
    for k, (a, (lam, fs)) in enumerate(zip(a_list, structs)):
        row = [int(x) for x in table[k]]
        classes = {}
        for g, c in zip(divs, row[:-1]):
            if c:
                assert c % N == 0, (g, c, N)
                classes[g] = c // N
        assert row[-1] % N == 0
        excluded = row[-1] // N
        if N == 1:
            # the prime T has the root 0, which the exponent walk never visits
            try:
                o = order_mod(a, T)
                g = math.gcd((F.q - 1) // o, L)
                classes[g] = classes.get(g, 0) + 1
            except BadReduction:
                excluded += 1
        out.append((classes, excluded))
    return out


def _choose_engine(q: int, N: int, engine: str) -> str:
    if engine not in ENGINES:
        raise PreconditionViolated(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine == "auto":
        return "reference" if q**N <= REFERENCE_CUTOFF else "fast"
    return engine


_cache_lock = threading.Lock()
_cache: dict = {}


def _cache_get(F, a, N, primes):
    with _cache_lock:
        for (F2, a2, N2, pr), value in _cache.items():
            if F2 == F and N2 == N and a2 == a and set(primes) <= pr:
                return value
    return None


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


def count_degree_many(F: FieldSpec, a_list, N: int, primes=(), *, engine: str = "auto",
                      workers: int = 1, budget: int | None = None) -> list[DegreeCounts]:
    """Degree-N histograms for several ``a`` at once (one table pass with the fast engine)."""
    if N < 1:
        raise PreconditionViolated(f"degree must be positive, got {N}")
    check_budget(F.q, N, budget)
    a_list = [RatFunc.coerce(a, F) for a in a_list]
    prime_set = frozenset(BASE_PRIMES) | frozenset(primes)
    L = _tracked_L(F.q, N, prime_set)
    results = [_cache_get(F, a, N, prime_set) for a in a_list]
    todo = [k for k, r in enumerate(results) if r is None]
    if todo:
        kind = _choose_engine(F.q, N, engine)
        if kind == "fast":
            raw = _fast_counts(F, [a_list[k] for k in todo], N, L, workers, budget)
        else:
            raw = [_reference_counts(F, a_list[k], N, L, workers, budget) for k in todo]
        with _cache_lock:
            for k, (classes, excluded) in zip(todo, raw):
                results[k] = DegreeCounts(F.q, N, L, dict(sorted(classes.items())), excluded)
                _cache[(F, a_list[k], N, prime_set)] = results[k]
    return results


def count_degree(F: FieldSpec, a, N: int, primes=(), **opts) -> DegreeCounts:
    return count_degree_many(F, [a], N, primes, **opts)[0]


def _profile_counts(profile: ArithProfile, N: int, **opts) -> DegreeCounts:
    return count_degree(profile.field, profile.a, N, profile.base.primes, **opts)


# -- records ---------------------------------------------------------------------------

@dataclass
class CountRecord:
    N: int
    I_N: int
    R: int
    a_excluded: int
    splits: dict = dc_field(default_factory=dict)  # (v, u) -> {K_{dv,uv}}_N
    delta_N: Fraction | None = None
    cesaro: Fraction | None = None
    normalized_error: Fraction | None = None
    identity_pass: bool | None = None

    def as_dict(self) -> dict:
        from .render import rational

        return {
            "N": self.N,
            "I_N": self.I_N,
            "R": self.R,
            "a_excluded": self.a_excluded,
            "splits": [{"v": v, "u": u, "count": c} for (v, u), c in sorted(self.splits.items())],
            "delta_N": rational(self.delta_N),
            "cesaro": rational(self.cesaro),
            "normalized_error": rational(self.normalized_error),
            "identity_pass": self.identity_pass,
        }


@dataclass(frozen=True)
class IdentityCheck:
    lhs: int
    rhs: int
    passed: bool

    @property
    def pass_(self) -> bool:
        return self.passed


def count_R(profile: ArithProfile, N: int, **opts) -> CountRecord:
    """``R_q(a, d, N)`` together with ``I_N`` and the excluded primes."""
    c = _profile_counts(profile, N, **opts)
    return CountRecord(N=N, I_N=gauss_count(profile.q, N), R=c.R(profile.d), a_excluded=c.a_excluded)


def split_count(profile: ArithProfile, n: int, dd: int, N: int, **opts) -> int:
    """Degree-N primes with ``q^N = 1 (mod n)`` and ``a^((q^N-1)/dd) = 1 (mod P)``."""
    if n < 1 or dd < 1 or n % dd:
        raise PreconditionViolated(f"need dd | n, got dd={dd}, n={n}")
    if math.gcd(n, profile.p) != 1:
        raise PreconditionViolated(f"p={profile.p} divides n={n}")
    c = count_degree(profile.field, profile.a, N, tuple(set(profile.base.primes)
                                                         | set(arith.factor(dd).primes)), **opts)
    return c.split(n, dd)


def _splits(profile: ArithProfile, N: int, c: DegreeCounts) -> dict:
    d = profile.d
    return {(v, u): c.split(d * v, u * v)
            for v in arith.divisors_of(e_N(profile, N)) for u in arith.divisors_of(d)}


def split_identity_check(profile: ArithProfile, N: int, **opts) -> IdentityCheck:
    """``R = sum_{v | e_N} sum_{u | d} mu(u) {K_{dv,uv}}_N``, as an integer identity."""
    c = _profile_counts(profile, N, **opts)
    lhs = c.R(profile.d)
    if N % profile.f:
        return IdentityCheck(lhs, 0, lhs == 0)
    splits = _splits(profile, N, c)
    rhs = sum(arith.moebius(u) * k for (v, u), k in splits.items())
    return IdentityCheck(lhs, rhs, lhs == rhs)


def cesaro(profile: ArithProfile, N: int, **opts) -> Fraction:
    """``(1/N) sum_{n <= N} R(n) n / q^n``."""
    if N < 1:
        raise PreconditionViolated(f"degree must be positive, got {N}")
    q = profile.q
    total = sum((Fraction(count_R(profile, n, **opts).R * n, q**n) for n in range(1, N + 1)),
                Fraction(0))
    return total / N


def _error_scale(profile: ArithProfile, N: int) -> int:
    omega = len(profile.base.primes)
    return 2 ** (omega + 1) * len(arith.divisors_of(e_N(profile, N)))


def normalized_error_from(profile: ArithProfile, N: int, R: int, delta: Fraction) -> Fraction:
    """``|R - delta q^N/N| N / (2^(omega(d)+1) tau(e_N) q^(N/2))``.

    Exact when ``q^N`` is a square; otherwise ``q^(N/2)`` is replaced by
    ``isqrt(q^N)``, which can only overstate the error.
    """
    if N % profile.f:
        raise FDoesNotDivideN(f"f={profile.f} does not divide N={N}")
    qN = profile.q**N
    dev = abs(R * N - delta * qN)
    return dev / (_error_scale(profile, N) * math.isqrt(qN))


def normalized_error(profile: ArithProfile, N: int, **opts) -> Fraction:
    R = count_R(profile, N, **opts).R
    return normalized_error_from(profile, N, R, proportion_density(profile, N).value)


def count_record(profile: ArithProfile, N: int, **opts) -> CountRecord:
    """Per-degree record with splits, identity verdict, delta_N and normalized error.

    ``cesaro`` is left unset; it depends on every lower degree and the caller tracks it.
    """
    c = _profile_counts(profile, N, **opts)
    rec = CountRecord(N=N, I_N=gauss_count(profile.q, N), R=c.R(profile.d), a_excluded=c.a_excluded)
    if N % profile.f == 0:
        rec.splits = _splits(profile, N, c)
        rhs = sum(arith.moebius(u) * k for (v, u), k in rec.splits.items())
        rec.identity_pass = rec.R == rhs
        rec.delta_N = proportion_density(profile, N).value
        rec.normalized_error = normalized_error_from(profile, N, rec.R, rec.delta_N)
    else:
        rec.identity_pass = rec.R == 0
        rec.delta_N = Fraction(0)
    return rec


@dataclass(frozen=True)
class ProbePoint:
    N: int
    ratio: Fraction | None  # R(N) N / q^N, None when over budget
    delta: Fraction         # proportion_density(N)


@dataclass(frozen=True)
class D1Probe:
    zero_sequence: list
    y_sequence: list

    def as_dict(self) -> dict:
        from .render import rational

        def pts(seq):
            return [{"N": p.N, "ratio": rational(p.ratio), "delta_N": rational(p.delta)} for p in seq]

        return {"zero_sequence": pts(self.zero_sequence), "y_sequence": pts(self.y_sequence)}


def d1_probe(profile: ArithProfile, steps: int, **opts) -> D1Probe:
    """Ratios ``R(N) N / q^N`` on ``x_n = f n + 1`` (never divisible by f) and on
    ``y_n = f_bar (h, d^oo) (d n + 1)``, for n < steps.

    Degrees beyond the budget get ``ratio = None``; the theoretical value is still reported.
    """
    if profile.f < 2:
        raise FTooSmall(f"f = ord_d(q) = {profile.f}; the probe needs f >= 2")
    if steps < 1:
        raise PreconditionViolated("steps must be positive")
    q = profile.q

    def point(N):
        try:
            ratio = Fraction(count_R(profile, N, **opts).R * N, q**N)
        except BudgetExceeded:
            ratio = None
        return ProbePoint(N, ratio, proportion_density(profile, N).value)

    scale = profile.f_bar * arith.gcd_supernatural(profile.h, profile.base)
    xs = [profile.f * n + 1 for n in range(steps)]
    ys = [scale * (profile.d * n + 1) for n in range(steps)]
    return D1Probe([point(N) for N in xs], [point(N) for N in ys])
