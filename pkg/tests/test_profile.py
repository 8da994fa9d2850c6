import pytest
from fractions import Fraction

from orderdensity import arith
from orderdensity.errors import (CharacteristicDividesD, ConstantA, DLessThanTwo, FDoesNotDivideN,
                                 PDividesN)
from orderdensity.ff import FFElem, field_new
from orderdensity.poly import parse_ratfunc
from orderdensity.profile import (SpecialCase, constant_field_degree, dispatch, e_N, f_uv,
                                  geometric_degree, is_constant_extension, profile_new)


def test_profile_examples(F2, F3):
    p = profile_new(F3, "T", 2)
    assert (p.lam, p.h, p.m, p.f, p.f_bar, p.p_flag) == (FFElem(F3, 1), 1, 1, 1, 1, True)
    p = profile_new(F3, "2*T^2*(T+1)^4", 2)
    assert (p.lam, p.h) == (FFElem(F3, 2), 2)
    p = profile_new(F2, "T", 3)
    assert (p.h, p.m, p.f, p.f_bar) == (1, 1, 2, 2)


def test_profile_errors(F3, F5):
    with pytest.raises(ConstantA):
        profile_new(F3, "2", 2)
    with pytest.raises(CharacteristicDividesD):
        profile_new(F3, "T", 3)
    with pytest.raises(DLessThanTwo):
        profile_new(F5, "T", 1)


def test_h_for_quotients(F5):
    p = profile_new(F5, "T^6/(T+1)^4", 2)
    assert p.h == 2
    assert [e for _, e in p.factors] == [6, -4]


@pytest.mark.parametrize("b, n", [("T+1", 2), ("T^2+T+1", 3), ("T/(T+2)", 4), ("T*(T+3)^2", 6)])
def test_h_round_trip(F5, b, n):
    a = parse_ratfunc(F5, b) ** n * 3
    p = profile_new(F5, a, 2)
    assert p.h % n == 0
    assert is_constant_extension(p, n)


def test_is_constant_extension(F3):
    p = profile_new(F3, "T", 2)
    assert is_constant_extension(p, 1)
    assert not is_constant_extension(p, 2)
    assert is_constant_extension(profile_new(F3, "2*T^2", 2), 2)
    with pytest.raises(PDividesN):
        is_constant_extension(p, 3)


def test_e_N(F2, F3):
    p = profile_new(F3, "T", 2)
    assert (e_N(p, 1), e_N(p, 2)) == (1, 4)
    q = profile_new(F2, "T", 3)
    assert e_N(q, 2) == 1
    with pytest.raises(FDoesNotDivideN):
        e_N(q, 3)


@pytest.mark.parametrize("q, a, d", [(3, "T", 2), (5, "T^2", 6), (7, "3*T^2", 4), (4, "T", 5),
                                     (9, "T^4", 8), (2, "T", 15)])
def test_e_N_matches_bigint(q, a, d):
    from orderdensity.ff import field_from_q

    p = profile_new(field_from_q(q), a, d)
    for N in range(p.f, 40 * p.f, p.f):
        assert e_N(p, N) == arith.gcd_supernatural((q**N - 1) // d, d)


def test_constant_field_degree(F3):
    p = profile_new(F3, "T", 2)
    assert constant_field_degree(p, 4, 4) == 2
    assert constant_field_degree(p, 8, 1) == arith.mult_order(3, 8)


def test_f_uv_examples(F2, F3):
    p = profile_new(F3, "T", 2)
    for v in (1, 2, 4, 8, 16):
        for u in (1, 2):
            assert f_uv(p, u, v) == arith.mult_order(3, 2 * v)
    assert f_uv(profile_new(F2, "T", 3), 3, 1) == 2


@pytest.mark.parametrize("q, a, d", [(3, "T", 2), (3, "2*T^2", 4), (5, "2*T^4", 4), (7, "3*T^6", 6),
                                     (4, "T^3", 3), (9, "T^2", 8)])
def test_remark_and_subfield(q, a, d):
    from orderdensity.ff import field_from_q

    p = profile_new(field_from_q(q), a, d)
    for v in arith.smooth_divisors_up_to(d, 200):
        base = f_uv(p, 1, v)
        for u in arith.divisors_of(d):
            fu = f_uv(p, u, v)
            assert fu % p.f == 0 and p.base.divides(fu // p.f)
            assert fu % base == 0


@pytest.mark.parametrize("q, a, d", [(5, "T", 6), (5, "2*T^6", 6), (7, "3*T^2", 10),
                                     (11, "2*T^6", 30), (13, "T^2", 6)])
def test_lemma_multiplicativity(q, a, d):
    from orderdensity.ff import field_from_q

    p = profile_new(field_from_q(q), a, d)
    divs = arith.divisors_of(d)
    for v in arith.smooth_divisors_up_to(d, 100):
        for N in range(1, 200):
            if N % f_uv(p, 1, v):
                continue
            for u1 in divs:
                for u2 in divs:
                    if arith.math.gcd(u1, u2) != 1:
                        continue
                    lhs = N % f_uv(p, u1 * u2, v) == 0
                    assert lhs == (N % f_uv(p, u1, v) == 0 and N % f_uv(p, u2, v) == 0)


def test_geometric_degree(F3, F5):
    p = profile_new(F3, "T", 2)
    assert geometric_degree(p, 2, 4) == 8
    q = profile_new(F5, "T^4", 2)
    assert geometric_degree(q, 2, 2) == 1
    r = profile_new(F5, "T^2", 2)
    assert geometric_degree(r, 2, 2) == 2


def test_special_cases(F2, F3):
    sc = dispatch(F2, "1", 2)
    assert isinstance(sc, SpecialCase) and sc.kind == "constant" and sc.density == 0
    sc = dispatch(F3, "2", 2)
    assert sc.density == 1 and sc.count(4) == 18
    sc = dispatch(F3, "T", 1)
    assert sc.kind == "d_one" and sc.count(1, a_excluded=1) == 2
    assert sc.density == Fraction(1)
