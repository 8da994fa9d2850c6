import pytest
from hypothesis import given, settings, strategies as st

from orderdensity.errors import BudgetExceeded, ConstantInput, FieldMismatch, ZeroInput
from orderdensity.ff import FFElem, field_new
from orderdensity.poly import (Poly, RatFunc, check_budget, factorize, format_poly, format_ratfunc,
                               gauss_count, irreducibles, is_irreducible, monic_part,
                               parse_poly, parse_ratfunc, partition_range, poly_gcd, powmod)


def P(F, text):
    return parse_poly(F, text)


def test_gcd_and_powmod_examples(F3):
    assert poly_gcd(P(F3, "T^2+1"), P(F3, "T+1")).is_one()
    m = P(F3, "T^2+1")
    assert powmod(P(F3, "T"), 0, m).is_one()
    assert powmod(P(F3, "T"), 4, m).is_one()
    assert powmod(P(F3, "T"), 2, m) == P(F3, "2")


def test_field_mismatch(F3, F5):
    with pytest.raises(FieldMismatch):
        P(F3, "T") + P(F5, "T")


def test_monic_part_examples(F3):
    lam, x = monic_part(parse_ratfunc(F3, "2*T"))
    assert lam == FFElem(F3, 2) and x == parse_ratfunc(F3, "T")
    lam, x = monic_part(parse_ratfunc(F3, "T/(2*T+1)"))
    assert lam == FFElem(F3, 2) and format_ratfunc(x) == "T/(T+2)"
    lam, x = monic_part(parse_ratfunc(F3, "T^2+1"))
    assert lam == FFElem(F3, 1)
    with pytest.raises(ZeroInput):
        monic_part(parse_ratfunc(F3, "0"))


def test_is_irreducible_examples(F2, F3):
    assert is_irreducible(P(F2, "T^2+T+1"))
    assert not is_irreducible(P(F2, "T^2+1"))
    assert is_irreducible(P(F3, "T^2+1"))
    with pytest.raises(ConstantInput):
        is_irreducible(P(F3, "2"))


def test_factorize_examples(F2, F3):
    assert factorize(P(F3, "T^2*(T+1)^4")) == [(P(F3, "T"), 2), (P(F3, "T+1"), 4)]
    assert factorize(P(F2, "T^2+1")) == [(P(F2, "T+1"), 2)]
    assert factorize(P(F3, "T^4-1")) == [(P(F3, "T+1"), 1), (P(F3, "T+2"), 1), (P(F3, "T^2+1"), 1)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1), (3, 2)]),
       st.lists(st.integers(0, 24), min_size=2, max_size=12))
def test_factorize_multiplies_back(pk, raw):
    F = field_new(*pk)
    f = Poly(F, [c % F.q for c in raw])
    if f.degree < 1:
        return
    lc, monic = f.monic()
    prod = Poly.const(F, lc)
    for g, e in factorize(f):
        assert is_irreducible(g) and g.is_monic()
        prod = prod * g**e
    assert prod == f


@pytest.mark.parametrize("q, N, expected", [(2, 2, 1), (3, 2, 3), (2, 1, 2), (2, 3, 2), (4, 2, 6)])
def test_gauss_count(q, N, expected):
    assert gauss_count(q, N) == expected


def test_irreducibles_examples(F2, F3):
    assert list(irreducibles(F2, 2)) == [P(F2, "T^2+T+1")]
    assert len(list(irreducibles(F3, 2))) == 3
    assert len(list(irreducibles(F2, 3))) == 2


@pytest.mark.parametrize("pk, Nmax", [((2, 1), 10), ((3, 1), 6), ((2, 2), 5), ((5, 1), 4)])
def test_enumeration_matches_gauss(pk, Nmax):
    F = field_new(*pk)
    for N in range(1, Nmax + 1):
        assert sum(1 for _ in irreducibles(F, N)) == gauss_count(F.q, N)


def test_enumeration_partitions_agree(F3):
    whole = list(irreducibles(F3, 5))
    for parts in (1, 2, 8):
        pieces = [Q for s, e in partition_range(3**5, parts) for Q in irreducibles(F3, 5, s, e)]
        assert pieces == whole


def test_fermat_little(F3):
    for Q in irreducibles(F3, 3):
        for c in range(1, 27):
            a = Poly(F3, [c % 3, c // 3 % 3, c // 9])
            assert powmod(a, 3**3 - 1, Q).is_one()


def test_budget(F2):
    with pytest.raises(BudgetExceeded):
        check_budget(2, 31)
    with pytest.raises(BudgetExceeded):
        next(irreducibles(F2, 12, budget=1000))


@pytest.mark.parametrize("text", ["T^3+2*T+1", "2*T", "T/(T+2)", "(T+1)/(T^2+1)", "1", "T^2"])
def test_ratfunc_round_trip_prime(F3, text):
    x = parse_ratfunc(F3, text)
    assert format_ratfunc(x) == text
    assert parse_ratfunc(F3, format_ratfunc(x)) == x


@pytest.mark.parametrize("text", ["g*T+1", "(g+1)*T^2+g", "T/(T+g)"])
def test_ratfunc_round_trip_extension(F4, text):
    x = parse_ratfunc(F4, text)
    assert format_ratfunc(x) == text


def test_ratfunc_reduced(F3):
    x = parse_ratfunc(F3, "(T^2-1)/(2*T+2)")
    assert x.den.is_monic()
    assert poly_gcd(x.num, x.den).is_one()
    assert x == parse_ratfunc(F3, "2*(T-1)")
    assert format_poly(x.num) == "2*T+1"


def test_ratfunc_arith(F5):
    x = parse_ratfunc(F5, "T/(T+1)")
    y = RatFunc.coerce("1/(T+1)", F5)
    assert x + y == RatFunc.coerce(1, F5)
    assert (x * y) / y == x
    assert x**-2 * x**2 == RatFunc.coerce(1, F5)
