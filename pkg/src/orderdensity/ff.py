"""Finite fields F_q, q = p^k.

An element is stored as an integer *code* ``c_0 + c_1 p + ... + c_{k-1} p^(k-1)``
holding its coefficient vector in the basis ``1, g, ..., g^(k-1)`` where ``g`` is
the class of ``x`` in ``F_p[x]/(modulus)``.  For q <= 2^16 multiplication goes
through exp/log tables with respect to a fixed multiplicative generator; the
coefficient (schoolbook) product is always available and is used beyond that.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from . import arith
from .errors import (
    FieldMismatch,
    NotPrime,
    ParseError,
    PreconditionViolated,
    ReducibleModulus,
    ZeroElement,
)
from .syntax import format_terms, parse_with

TABLE_CAP = 2**16
_ADD_TABLE_CAP = 1024


# -- dense polynomials over the prime field F_p (lists, lowest degree first) --

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], -1, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for j, y in enumerate(m):
            a[shift + j] = (a[shift + j] - c * y) % p
        _ptrim(a)
    return a


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(a, e, m, p):
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base, p), m, p)
    return result


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _prime_irreducible(m, p) -> bool:
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    xp = [0, 1]
    for i in range(1, k // 2 + 1):
        xp = _ppowmod(xp, p, m, p)
        g = _pgcd(m, _psub(xp, [0, 1], p), p)
        if len(g) > 1:
            return False
    return True


def _prime_primitive(m, p) -> bool:
    k = len(m) - 1
    if not _prime_irreducible(m, p):
        return False
    order = p**k - 1
    for l in arith.factor(order).primes:
        if _ppowmod([0, 1], order // l, m, p) == [1]:
            return False
    return True


def _canonical_modulus(p: int, k: int):
    """Smallest monic primitive polynomial of degree k, lower coefficients read as a base-p code."""
    for code in range(1, p**k):
        low = [(code // p**j) % p for j in range(k)]
        if low[0] == 0:
            continue
        m = low + [1]
        if _prime_primitive(m, p):
            return tuple(m)
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


class FieldSpec:
    """The finite field F_q.  Immutable; compare with ``==`` (same p, k and modulus)."""

    def __init__(self, p: int, k: int, modulus=None):
        if not arith.sympy.isprime(p):
            raise NotPrime(f"{p} is not prime")
        if k < 1:
            raise PreconditionViolated(f"extension degree must be >= 1, got {k}")
        self.p = p
        self.k = k
        self.q = p**k
        if k == 1:
            if modulus is not None and tuple(modulus) not in ((0, 1),):
                raise PreconditionViolated("a prime field takes no modulus")
            self.modulus = (0, 1)
        else:
            if modulus is None:
                modulus = _canonical_modulus(p, k)
            m = [c % p for c in modulus]
            _ptrim(m)
            if len(m) != k + 1 or m[-1] != 1:
                raise PreconditionViolated(f"modulus must be monic of degree {k}")
            if not _prime_irreducible(m, p):
                raise ReducibleModulus(f"modulus {m} is reducible over F_{p}")
            self.modulus = tuple(m)
        self._digits = [p**j for j in range(k)]
        self.has_tables = self.q <= TABLE_CAP
        self.generator = self._find_generator()
        if self.has_tables:
            self._build_tables()
        self._add_table = None
        if k > 1 and p != 2 and self.q <= _ADD_TABLE_CAP:
            self._add_table = [[self._add_digits(a, b) for b in range(self.q)] for a in range(self.q)]

    # -- identity ---------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"FieldSpec(q={self.q})"
        return f"FieldSpec(q={self.p}^{self.k}, modulus={format_prime_poly(self.modulus, 'x')})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.k, self.modulus if self.k > 1 else None))

    # -- coefficient representation --------------------------------------------
    def to_vector(self, code: int) -> list[int]:
        p = self.p
        return [(code // self._digits[j]) % p for j in range(self.k)]

    def from_vector(self, vec) -> int:
        return sum((c % self.p) * self._digits[j] for j, c in enumerate(vec))

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        scale = 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    def mul_coeff(self, a: int, b: int) -> int:
        """Product by schoolbook multiplication and reduction modulo the defining polynomial."""
        if self.k == 1:
            return a * b % self.p
        prod = _pmul(_ptrim(self.to_vector(a)), _ptrim(self.to_vector(b)), self.p)
        return self.from_vector(_pmod(prod, list(self.modulus), self.p))

    def pow_coeff(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul_coeff(result, base)
            e >>= 1
            if e:
                base = self.mul_coeff(base, base)
        return result

    def _find_generator(self) -> int:
        order = self.q - 1
        primes = arith.factor(order).primes if order > 1 else ()
        candidates = [self.p] if self.k > 1 else []
        candidates += range(1, self.q)
        for g in candidates:
            if g == 0:
                continue
            if all(self.pow_coeff(g, order // l) != 1 for l in primes):
                return g
        raise AssertionError("field has no generator")  # pragma: no cover

    def _build_tables(self):
        n = self.q - 1
        exp = [0] * (2 * n)
        log = [-1] * self.q
        x = 1
        for i in range(n):
            exp[i] = exp[i + n] = x
            log[x] = i
            x = self.mul_coeff(x, self.generator)
        self.exp = exp
        self.log = log

    # -- arithmetic on codes ----------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.from_vector([-c for c in self.to_vector(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if not a or not b:
            return 0
        if self.has_tables:
            return self.exp[self.log[a] + self.log[b]]
        return self.mul_coeff(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 has no inverse")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self.has_tables:
            return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]
        return self.pow_coeff(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self.has_tables:
            return self.exp[self.log[a] * e % (self.q - 1)]
        return self.pow_coeff(a, e)

    def log_of(self, a: int) -> int:
        """Discrete log with respect to :attr:`generator`."""
        if a == 0:
            raise ZeroElement("log of 0")
        if self.has_tables:
            return self.log[a]
        raise PreconditionViolated("discrete logs need tables (q <= 2^16)")  # pragma: no cover

    def unit_order_code(self, a: int) -> int:
        if a == 0:
            raise ZeroElement("0 is not a unit")
        return arith.order_from_exponent(lambda t: self.pow(a, t) == 1, self.q - 1)

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    # -- elements -----------------------------------------------------------------
    def __call__(self, value) -> "FFElem":
        if isinstance(value, FFElem):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, str):
            return parse_element(self, value)
        return FFElem(self, self.from_int(int(value)))

    def elem(self, code: int) -> "FFElem":
        if not 0 <= code < self.q:
            raise PreconditionViolated(f"code {code} out of range for F_{self.q}")
        return FFElem(self, code)

    @property
    def gen(self) -> "FFElem":
        return FFElem(self, self.generator)

    def elements(self):
        return (FFElem(self, c) for c in range(self.q))

    def format(self, code: int) -> str:
        return format_element(self, code)


@lru_cache(maxsize=256)
def field_new(p: int, k: int = 1, modulus=None) -> FieldSpec:
    """Validated :class:`FieldSpec`; omitting the modulus picks the canonical primitive one."""
    if modulus is not None:
        modulus = tuple(modulus)
    return FieldSpec(p, k, modulus)


def field_from_q(q: int, modulus=None) -> FieldSpec:
    fac = arith.factor(q)
    if len(fac) != 1:
        raise NotPrime(f"q={q} is not a prime power")
    (p, k), = fac.pairs
    return field_new(p, k, modulus)


class FFElem:
    """An element of a :class:`FieldSpec`."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldSpec, code: int):
        self.field = field
        self.code = code

    def _other(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field != self.field:
                raise FieldMismatch("operands live in different fields")
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.div(self.code, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FFElem(self.field, self.field.div(o, self.code))

    def __pow__(self, e: int):
        return FFElem(self.field, self.field.pow(self.code, e))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.code))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.field == other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"FFElem({self.field.format(self.code)!r}, q={self.field.q})"

    def __str__(self):
        return self.field.format(self.code)

    def inverse(self) -> "FFElem":
        return FFElem(self.field, self.field.inv(self.code))


def unit_order(x: FFElem) -> int:
    """Multiplicative order of a nonzero element; divides q - 1."""
    return x.field.unit_order_code(x.code)


# -- text syntax -------------------------------------------------------------------

class ElementAlgebra:
    """Parser callbacks evaluating into element codes of a field."""

    def __init__(self, field: FieldSpec, symbol: str = "g"):
        self.F = field
        self.sym = symbol

    def const(self, n):
        return self.F.from_int(n)

    def symbol(self, name):
        if name != self.sym or self.F.k == 1:
            raise ParseError(f"unknown symbol {name!r} for F_{self.F.q}")
        return self.F.p

    def add(self, a, b):
        return self.F.add(a, b)

    def sub(self, a, b):
        return self.F.sub(a, b)

    def mul(self, a, b):
        return self.F.mul(a, b)

    def div(self, a, b):
        if b == 0:
            raise ParseError("division by zero")
        return self.F.div(a, b)

    def neg(self, a):
        return self.F.neg(a)

    def pow(self, a, e):
        return self.F.pow(a, e)


def parse_element(field: FieldSpec, text: str) -> FFElem:
    return FFElem(field, parse_with(text, ElementAlgebra(field)))


def _digit_fmt(c):
    return str(c), c == 1, False


def format_element(field: FieldSpec, code: int) -> str:
    if field.k == 1:
        return str(code)
    vec = field.to_vector(code)
    terms = [(j, c) for j, c in reversed(list(enumerate(vec))) if c]
    return format_terms(terms, "g", _digit_fmt)


def element_needs_parens(field: FieldSpec, code: int) -> bool:
    return "+" in format_element(field, code)


def format_prime_poly(coeffs, symbol: str = "x") -> str:
    terms = [(j, c) for j, c in reversed(list(enumerate(coeffs))) if c]
    return format_terms(terms, symbol, _digit_fmt)


class _PrimePolyAlgebra:
    """Evaluates into coefficient lists over F_p (used for user-supplied moduli)."""

    def __init__(self, p: int, symbol: str):
        self.p = p
        self.sym = symbol

    def const(self, n):
        return _ptrim([n % self.p])

    def symbol(self, name):
        if name != self.sym:
            raise ParseError(f"unknown symbol {name!r}; moduli are written in {self.sym!r}")
        return [0, 1]

    def add(self, a, b):
        n = max(len(a), len(b))
        return _ptrim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % self.p
                       for i in range(n)])

    def sub(self, a, b):
        return _psub(a, b, self.p)

    def mul(self, a, b):
        return _pmul(a, b, self.p)

    def div(self, a, b):
        raise ParseError("division is not allowed in a modulus")

    def neg(self, a):
        return _ptrim([-c % self.p for c in a])

    def pow(self, a, e):
        out = [1]
        for _ in range(e):
            out = _pmul(out, a, self.p)
        return out


def parse_prime_poly(p: int, text: str, symbol: str = "x") -> tuple[int, ...]:
    return tuple(parse_with(text, _PrimePolyAlgebra(p, symbol)))


def iter_codes(field: FieldSpec):
    return range(field.q)


def nonsquare(field: FieldSpec) -> FFElem:
    """Smallest-code non-square of an odd-characteristic field."""
    if field.p == 2:
        raise PreconditionViolated("every element of a characteristic-2 field is a square")
    for c in itertools.count(1):
        if not field.is_square(c):
            return FFElem(field, c)
