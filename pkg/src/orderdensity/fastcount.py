"""Compiled root-counting engine for degree-N primes.

Every monic irreducible P of degree N has exactly N roots in F_{q^N}, all
outside the proper subfields, and the order of ``a`` mod P is the order of
``a(alpha)`` for any root alpha.  So instead of walking the q^N monic
polynomials we walk the exponents ``i`` of a primitive element
``gamma`` of F_{q^N} = F_q[y]/(Q_N), evaluate ``log a(gamma^i)`` with
exp/log tables, and histogram ``gcd(log, L)``.  Dividing by N gives counts per
prime.

Field elements are base-q integer codes of their coefficient vectors over F_q.
"""
from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from . import arith
from .errors import BudgetExceeded
from .ff import FieldSpec
from .poly import Poly, monic_from_index, is_irreducible, powmod

_LOG_ZERO = np.uint32(0xFFFFFFFF)
_BLOCK = 1 << 20
_MEMORY_FRACTION = 0.8
# residue -> class lookup is used while L stays below this size
_CLASS_TABLE_CAP = 1 << 22


@njit(cache=True)
def _fill_tables(q, N, red, add_tab, exp_out, log_out):  # pragma: no cover - compiled
    # red[t, j] is the y^j coefficient of t*y^N reduced, i.e. -t*low_j
    digits = np.zeros(N, np.int64)
    digits[0] = 1
    code = 1
    for i in range(exp_out.shape[0]):
        exp_out[i] = code
        log_out[code] = i
        # multiply by y and rebuild the code from the top digit down
        top = digits[N - 1]
        code = 0
        for j in range(N - 1, -1, -1):
            nd = digits[j - 1] if j else 0
            if top != 0:
                nd = add_tab[nd, red[top, j]]
            digits[j] = nd
            code = code * q + nd


@njit(cache=True, nogil=True)
def _count_block(exp, log, q, Qm1, add_tab, i0, i1, strides, fcoef, fdeg,
                 aexp, alam, L, divs, cls, out):  # pragma: no cover - compiled
    n_f = fdeg.shape[0]
    n_a = aexp.shape[0]
    n_div = divs.shape[0]
    flog = np.empty(n_f, np.int64)
    for i in range(i0, i1):
        skip = False
        for s in strides:
            if i % s == 0:
                skip = True
                break
        if skip:
            continue
        for j in range(n_f):
            deg = fdeg[j]
            if deg == 1 and fcoef[j, 0] == 0:
                flog[j] = i
                continue
            v = 1
            for k in range(deg - 1, -1, -1):
                if v != 0:
                    v = exp[(np.int64(log[v]) + i) % Qm1]
                c = fcoef[j, k]
                if c != 0:
                    d0 = v % q
                    v = v - d0 + add_tab[d0, c]
            flog[j] = -1 if v == 0 else np.int64(log[v])
        for a in range(n_a):
            t = alam[a]
            excluded = False
            for j in range(n_f):
                e = aexp[a, j]
                if e != 0:
                    if flog[j] < 0:
                        excluded = True
                        break
                    t += e * flog[j]
            if excluded:
                out[a, n_div] += 1
                continue
            r = t % L
            if cls.shape[0]:
                out[a, cls[r]] += 1
                continue
            x, y = L, r
            while y != 0:
                x, y = y, x % y
            lo, hi = 0, n_div - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if divs[mid] < x:
                    lo = mid + 1
                else:
                    hi = mid
            out[a, lo] += 1


def primitive_modulus(field: FieldSpec, N: int) -> Poly:
    """First primitive monic polynomial of degree N over F_q in odometer order."""
    Qm1 = field.q**N - 1
    primes = arith.factor(Qm1).primes
    T = Poly.T(field)
    for index in range(1, field.q**N):
        P = monic_from_index(field, N, index)
        if P.coeffs[0] == 0 or not is_irreducible(P):
            continue
        if all(not powmod(T, Qm1 // l, P).is_one() for l in primes):
            return P
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


def _available_memory() -> int:
    try:
        return os.sysconf("SC_AVPHYS_PAGES") * os.sysconf("SC_PAGE_SIZE")
    except (ValueError, OSError, AttributeError):  # pragma: no cover - non-POSIX
        return 1 << 62


def _coeff_tables(field: FieldSpec):
    q = field.q
    idx = range(q)
    add = np.array([[field.add(a, b) for b in idx] for a in idx], np.int64)
    sub = np.array([[field.sub(a, b) for b in idx] for a in idx], np.int64)
    mul = np.array([[field.mul(a, b) for b in idx] for a in idx], np.int64)
    return add, sub, mul


class ExtensionTables:
    """exp/log tables of F_{q^N} built on a primitive modulus."""

    def __init__(self, field: FieldSpec, N: int):
        Q = field.q**N
        need = 8 * Q
        if need > _MEMORY_FRACTION * _available_memory():
            raise BudgetExceeded(
                f"exp/log tables for q^N = {field.q}^{N} need {need >> 20} MiB, "
                "more than the available memory")
        self.field = field
        self.N = N
        self.Q = Q
        self.modulus = primitive_modulus(field, N)
        self.add, sub, mul = _coeff_tables(field)
        red = np.array([[sub[0, mul[t, c]] for c in self.modulus.coeffs[:N]]
                        for t in range(field.q)], np.int64)
        self.exp = np.empty(Q - 1, np.uint32)
        self.log = np.empty(Q, np.uint32)
        self.log[0] = _LOG_ZERO
        _fill_tables(field.q, N, red, self.add, self.exp, self.log)


_tables_lock = threading.Lock()
_tables: ExtensionTables | None = None


def extension_tables(field: FieldSpec, N: int) -> ExtensionTables:
    """Tables for F_{q^N}; only the most recent set is kept alive."""
    global _tables
    with _tables_lock:
        if _tables is None or _tables.field != field or _tables.N != N:
            _tables = None  # release before allocating the next set
            _tables = ExtensionTables(field, N)
        return _tables


def clear_tables() -> None:
    global _tables
    with _tables_lock:
        _tables = None


def subfield_strides(q: int, N: int) -> np.ndarray:
    """``gamma^i`` lies in a proper subfield iff one of these strides divides i."""
    Qm1 = q**N - 1
    return np.array([Qm1 // (q ** (N // l) - 1) for l in arith.factor(N).primes], np.int64)


def count_roots(field: FieldSpec, N: int, factor_list, a_specs, L: int, workers: int = 1):
    """Histogram of ``gcd(log a(alpha), L)`` over the roots alpha of degree-N primes.

    ``factor_list`` holds the distinct monic irreducible factors (Poly).  Each
    entry of ``a_specs`` is ``(lambda_code, exponents)`` with one signed exponent
    per factor.  Returns ``(divisors of L, counts)`` where ``counts`` has one row
    per ``a`` and a final column for excluded roots.  Root counts, not prime counts.
    """
    tabs = extension_tables(field, N)
    Qm1 = tabs.Q - 1
    if Qm1 % L:
        raise ValueError(f"L={L} does not divide q^N - 1 = {Qm1}")
    divs = np.array(arith.divisors_of(L), np.int64)
    maxdeg = max([P.degree for P in factor_list], default=1)
    n_f = len(factor_list)
    fcoef = np.zeros((max(n_f, 1), maxdeg), np.int64)
    fdeg = np.zeros(n_f, np.int64)
    for j, P in enumerate(factor_list):
        fdeg[j] = P.degree
        fcoef[j, :P.degree] = P.coeffs[:P.degree]
    fcoef = fcoef[:n_f]
    aexp = np.array([list(e) for _, e in a_specs], np.int64).reshape(len(a_specs), n_f)
    alam = np.array([int(tabs.log[lam]) for lam, _ in a_specs], np.int64)
    strides = subfield_strides(field.q, N)
    if L <= _CLASS_TABLE_CAP:
        g = np.gcd(np.arange(L, dtype=np.int64), L)
        cls = np.searchsorted(divs, g).astype(np.int64)
    else:
        cls = np.zeros(0, np.int64)

    blocks = [(s, min(s + _BLOCK, Qm1)) for s in range(0, Qm1, _BLOCK)]

    def run(chunk):
        out = np.zeros((len(a_specs), len(divs) + 1), np.int64)
        for i0, i1 in chunk:
            _count_block(tabs.exp, tabs.log, field.q, Qm1, tabs.add, i0, i1, strides, fcoef,
                         fdeg, aexp, alam, L, divs, cls, out)
        return out

    # contiguous block ranges per worker; integer sums make the merge order irrelevant
    workers = max(1, min(workers, len(blocks)))
    bounds = [len(blocks) * k // workers for k in range(workers + 1)]
    chunks = [blocks[bounds[k]:bounds[k + 1]] for k in range(workers)]
    if workers == 1:
        parts = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, chunks))
    total = sum(parts[1:], parts[0])
    return [int(g) for g in divs], total


def warm_up() -> None:
    """Compile the kernels on a tiny field."""
    from .ff import field_new

    F = field_new(2)
    count_roots(F, 2, [Poly.T(F)], [(1, (1,))], 3)
    clear_tables()


__all__ = ["count_roots", "extension_tables", "clear_tables", "primitive_modulus",
           "subfield_strides", "ExtensionTables", "warm_up"]
