"""The ring A = F_q[T] and the rational functions K = F_q(T).

Polynomials are immutable tuples of field-element codes, lowest degree first,
with no trailing zeros; the zero polynomial has degree -1.
"""
from __future__ import annotations

import os
import random
from functools import lru_cache

from . import arith
from .errors import (
    BudgetExceeded,
    ConstantInput,
    DivisionByZero,
    FieldMismatch,
    ParseError,
    PreconditionViolated,
    ZeroInput,
)
from .ff import FFElem, FieldSpec, ElementAlgebra
from .syntax import format_terms, parse_with

DEFAULT_BUDGET = 2**30
BUDGET_ENV = "ORDERDENSITY_BUDGET"
# equal-degree splitting draws from random.Random(EDF_SEED + attempt)
EDF_SEED = 0x5EED


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


def _trim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs=()):
        self.field = field
        self.coeffs = _trim([int(c) for c in coeffs])

    @classmethod
    def const(cls, field, c) -> "Poly":
        if isinstance(c, FFElem):
            c = c.code
        return cls(field, (c,))

    @classmethod
    def T(cls, field) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field, degree: int, c: int = 1) -> "Poly":
        return cls(field, [0] * degree + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_monic(self) -> bool:
        return self.lc == 1

    def _check(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatch("polynomials over different fields")
            return other
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise FieldMismatch("constant from a different field")
            return Poly(self.field, (other.code,))
        if isinstance(other, int):
            return Poly(self.field, (self.field.from_int(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        add = self.field.add
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = add(out[i], y)
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.field.neg
        return Poly(self.field, [neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.field)
        F = self.field
        add, mul = F.add, F.mul
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly(F, out)

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        mul = self.field.mul
        return Poly(self.field, [mul(c, x) for x in self.coeffs])

    def __divmod__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        add, mul, neg = F.add, F.mul, F.neg
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly(F), self
        inv = F.inv(other.lc)
        b = other.coeffs
        quo = [0] * (len(rem) - db)
        for shift in range(len(rem) - 1 - db, -1, -1):
            c = rem[shift + db]
            if c == 0:
                continue
            c = mul(c, inv)
            quo[shift] = c
            nc = neg(c)
            for j in range(db + 1):
                if b[j]:
                    rem[shift + j] = add(rem[shift + j], mul(nc, b[j]))
        return Poly(F, quo), Poly(F, rem[:db] if db > 0 else [])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise PreconditionViolated("negative power of a polynomial")
        result = Poly(self.field, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim([self.field.from_int(other)])
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __lt__(self, other):
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __repr__(self):
        return f"Poly({str(self)!r}, q={self.field.q})"

    def __str__(self):
        return format_poly(self)

    def monic(self) -> tuple[int, "Poly"]:
        if self.is_zero():
            raise ZeroInput("the zero polynomial has no monic part")
        lc = self.lc
        return lc, self.scale(self.field.inv(lc))

    def derivative(self) -> "Poly":
        F = self.field
        return Poly(F, [F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero only when both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()[1]


def poly_xgcd(a: Poly, b: Poly):
    """``(g, s, t)`` with ``g = s a + t b`` monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly(F, (1,)), Poly(F)
    t0, t1 = Poly(F), Poly(F, (1,))
    while not r1.is_zero():
        qt, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = poly_xgcd(a % m, m)
    if not g.is_one():
        raise DivisionByZero("not invertible modulo the given polynomial")
    return s % m


def powmod(a: Poly, e: int, m: Poly) -> Poly:
    """``a^e mod m`` by square-and-multiply, reducing at every step."""
    if m.is_zero():
        raise DivisionByZero("modulus is zero")
    if e < 0:
        a, e = poly_inverse_mod(a, m), -e
    result = Poly(a.field, (1,)) % m
    base = a % m
    while e:
        if e & 1:
            result = (result * base) % m
        e >>= 1
        if e:
            base = (base * base) % m
    return result


def _frobenius_powers(P: Poly, upto: int) -> list[Poly]:
    """``[T^(q^0), T^(q^1), ..., T^(q^upto)] mod P``."""
    q = P.field.q
    x = Poly.T(P.field) % P
    out = [x]
    for _ in range(upto):
        x = powmod(x, q, P)
        out.append(x)
    return out


def is_irreducible(P: Poly) -> bool:
    """Rabin's test: ``T^(q^n) = T`` mod P and ``gcd(T^(q^(n/l)) - T, P) = 1`` for primes l | n."""
    n = P.degree
    if n < 1:
        raise ConstantInput("irreducibility of a constant is undefined")
    if n == 1:
        return True
    if P.coeffs[0] == 0:
        return False
    frob = _frobenius_powers(P, n)
    T = Poly.T(P.field) % P
    if frob[n] != T:
        return False
    for l in arith.factor(n).primes:
        if not poly_gcd(frob[n // l] - T, P).is_one():
            return False
    return True


# -- factorization -----------------------------------------------------------------

def _pth_root(f: Poly) -> Poly:
    F = f.field
    p = F.p
    e = F.q // p  # c -> c^(q/p) inverts Frobenius on F_q
    return Poly(F, [F.pow(c, e) for c in f.coeffs[::p]])


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic ``f`` as ``prod g_i^(e_i)`` with squarefree, pairwise coprime ``g_i``."""
    if f.degree < 1:
        return []
    p = f.field.p
    out = []
    df = f.derivative()
    if df.is_zero():
        return [(g, e * p) for g, e in squarefree_decomposition(_pth_root(f))]
    c = poly_gcd(f, df)
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        out.extend((g, e * p) for g, e in squarefree_decomposition(_pth_root(c)))
    return out


def distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split squarefree monic ``f`` into products of irreducibles of equal degree."""
    out = []
    T = Poly.T(f.field)
    h = T % f if f.degree > 0 else T
    i = 0
    q = f.field.q
    while f.degree >= 2 * (i + 1):
        i += 1
        h = powmod(h, q, f)
        g = poly_gcd(h - T, f)
        if not g.is_one():
            out.append((g, i))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _random_poly(F: FieldSpec, below: int, rng: random.Random) -> Poly:
    return Poly(F, [rng.randrange(F.q) for _ in range(below)])


def equal_degree(g: Poly, i: int, seed: int = EDF_SEED) -> list[Poly]:
    """Cantor-Zassenhaus splitting of a product of degree-``i`` irreducibles."""
    if g.degree == i:
        return [g]
    F = g.field
    attempt = 0
    while True:
        rng = random.Random(seed + attempt)
        attempt += 1
        a = _random_poly(F, g.degree, rng)
        if a.degree < 1:
            continue
        if F.p == 2:
            b = a % g
            t = b
            for _ in range(F.k * i - 1):
                t = (t * t) % g
                b = b + t
        else:
            b = powmod(a, (F.q**i - 1) // 2, g) - 1
        d = poly_gcd(b, g)
        if 0 < d.degree < g.degree:
            return equal_degree(d, i, seed + attempt) + equal_degree(g // d, i, seed + attempt + 1)


def factorize(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities (leading coefficient dropped), sorted."""
    if f.is_zero():
        raise ZeroInput("cannot factor zero")
    _, f = f.monic()
    found: dict[Poly, int] = {}
    for g, e in squarefree_decomposition(f):
        for h, i in distinct_degree(g):
            for r in equal_degree(h, i):
                found[r] = found.get(r, 0) + e
    return sorted(found.items(), key=lambda item: item[0])


def factor_with_unit(f: Poly) -> tuple[int, list[tuple[Poly, int]]]:
    return f.lc, factorize(f)


# -- enumeration ---------------------------------------------------------------------

@lru_cache(maxsize=1024)
def gauss_count(q: int, N: int) -> int:
    """Number of monic irreducibles of degree N over F_q."""
    if N < 1:
        raise PreconditionViolated(f"degree must be >= 1, got {N}")
    total = sum(arith.moebius(e) * q ** (N // e) for e in arith.divisors_of(N))
    assert total % N == 0
    return total // N


def check_budget(q: int, N: int, budget: int | None = None) -> None:
    budget = default_budget() if budget is None else budget
    if q**N > budget:
        raise BudgetExceeded(f"q^N = {q}^{N} exceeds the budget of {budget} monic polynomials")


def monic_from_index(F: FieldSpec, N: int, index: int) -> Poly:
    """The monic degree-N polynomial whose lower coefficients are the base-q digits of index."""
    q = F.q
    low = []
    for _ in range(N):
        index, c = divmod(index, q)
        low.append(c)
    return Poly(F, low + [1])


def irreducibles(F: FieldSpec, N: int, start: int = 0, stop: int | None = None,
                 budget: int | None = None):
    """Yield monic irreducibles of degree N, in odometer order, from index range [start, stop)."""
    if N < 1:
        raise PreconditionViolated(f"degree must be >= 1, got {N}")
    check_budget(F.q, N, budget)
    total = F.q**N
    stop = total if stop is None else min(stop, total)
    if N == 1:
        for i in range(start, stop):
            yield monic_from_index(F, 1, i)
        return
    q = F.q
    digits = [(start // q**j) % q for j in range(N)]
    for _ in range(start, stop):
        if digits[0] != 0:
            P = Poly(F, digits + [1])
            if is_irreducible(P):
                yield P
        j = 0
        while j < N:
            digits[j] += 1
            if digits[j] < q:
                break
            digits[j] = 0
            j += 1


def partition_range(total: int, parts: int) -> list[tuple[int, int]]:
    """Split [0, total) into ``parts`` contiguous, nearly equal ranges."""
    parts = max(1, min(parts, total)) if total else 1
    bounds = [total * i // parts for i in range(parts + 1)]
    return [(bounds[i], bounds[i + 1]) for i in range(parts)]


# -- rational functions --------------------------------------------------------------

class RatFunc:
    """Reduced fraction ``num/den`` with ``den`` monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        F = num.field
        if den is None:
            den = Poly(F, (1,))
        if den.field != F:
            raise FieldMismatch("numerator and denominator over different fields")
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly(F, (1,))
            return
        g = poly_gcd(num, den)
        if not g.is_one():
            num, den = num // g, den // g
        lc = den.lc
        if lc != 1:
            inv = F.inv(lc)
            num, den = num.scale(inv), den.scale(inv)
        self.num, self.den = num, den

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def coerce(cls, x, field: FieldSpec | None = None) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        if isinstance(x, FFElem):
            return cls(Poly.const(x.field, x.code))
        if isinstance(x, int) and field is not None:
            return cls(Poly.const(field, field.from_int(x)))
        if isinstance(x, str) and field is not None:
            return parse_ratfunc(field, x)
        raise TypeError(f"cannot make a rational function from {x!r}")

    def _other(self, other):
        if isinstance(other, (RatFunc, Poly, FFElem, int)):
            return RatFunc.coerce(other, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o.num.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            if self.num.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den**-e, self.num**-e)
        return RatFunc(self.num**e, self.den**e)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, FFElem, int)):
            return self == RatFunc.coerce(other, self.field)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({str(self)!r}, q={self.field.q})"

    def __str__(self):
        return format_ratfunc(self)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def is_polynomial(self) -> bool:
        return self.den.is_one()


def monic_part(x: RatFunc) -> tuple[FFElem, RatFunc]:
    """Split ``x = lambda * x~`` with ``x~`` a quotient of monic polynomials."""
    if x.is_zero():
        raise ZeroInput("zero has no monic part")
    F = x.field
    lam, num = x.num.monic()
    return FFElem(F, lam), RatFunc(num, x.den)


def valuation_at(x: RatFunc, P: Poly) -> int:
    """``v_P(x)`` for a monic irreducible ``P``."""
    if x.is_zero():
        raise ZeroInput("valuation of zero")
    v = 0
    num, den = x.num, x.den
    while True:
        qt, r = divmod(num, P)
        if not r.is_zero():
            break
        num = qt
        v += 1
    while True:
        qt, r = divmod(den, P)
        if not r.is_zero():
            break
        den = qt
        v -= 1
    return v


# -- text syntax -----------------------------------------------------------------------

class _RatAlgebra:
    def __init__(self, field: FieldSpec, var: str = "T"):
        self.F = field
        self.var = var
        self.elem = ElementAlgebra(field)

    def const(self, n):
        return RatFunc(Poly.const(self.F, self.F.from_int(n)))

    def symbol(self, name):
        if name == self.var:
            return RatFunc(Poly.T(self.F))
        return RatFunc(Poly.const(self.F, self.elem.symbol(name)))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b.is_zero():
            raise ParseError("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def pow(self, a, e):
        return a**e


def parse_ratfunc(field: FieldSpec, text: str) -> RatFunc:
    return parse_with(text, _RatAlgebra(field))


def parse_poly(field: FieldSpec, text: str) -> Poly:
    r = parse_ratfunc(field, text)
    if not r.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return r.num


def _coef_fmt(F):
    def fmt(c):
        text = F.format(c)
        return text, c == 1, "+" in text
    return fmt


def format_poly(P: Poly) -> str:
    terms = [(j, c) for j, c in reversed(list(enumerate(P.coeffs))) if c]
    return format_terms(terms, "T", _coef_fmt(P.field))


def format_ratfunc(x: RatFunc) -> str:
    num = format_poly(x.num)
    if x.den.is_one():
        return num
    den = format_poly(x.den)
    if sum(1 for c in x.num.coeffs if c) > 1:
        num = f"({num})"
    if sum(1 for c in x.den.coeffs if c) > 1:
        den = f"({den})"
    return f"{num}/{den}"
