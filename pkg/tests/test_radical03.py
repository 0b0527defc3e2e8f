from fractions import Fraction as Fr
from math import gcd, isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import factorint

from padic_pcf.cfcore import QuadPoly, membership
from padic_pcf.errors import NoNegativePell, NotDegenerate, NotSquareFree
from padic_pcf.exact import vp
from padic_pcf.radical03 import (
    Radical03Solution,
    bound_ps,
    d_filter,
    degenerate03,
    f_poly,
    family_a2plus1,
    family_neg_pell,
    neg_pell_sequence,
    search03,
    verify_solution,
)


def triples(sols):
    return {(s.p, s.a1, s.a2, s.a3) for s in sols}


def brute03(d, a3_max, p=None):
    """Solutions with |a3| <= a3_max found by direct enumeration."""
    out = set()
    for a3 in range(-a3_max, a3_max + 1):
        w = d - 1 + d * a3 * a3
        r = isqrt(w)
        if r * r != w:
            continue
        for a1 in {r, -r}:
            t = a1 - d * a3
            if t == 0:
                continue
            a2 = Fr(d - 1, t)
            f = factorint(a2.denominator)
            if len(f) != 1:
                continue
            (q, s), = f.items()
            if q == 2 or (p is not None and q != p) or (a1 * a3) % q == 0:
                continue
            out.add((q, a1, a2, a3))
    return out


def test_d_filter():
    assert d_filter(10) and d_filter(2) and d_filter(5) and d_filter(13)
    assert not d_filter(7) and not d_filter(12) and not d_filter(21)
    assert not d_filter(0) and not d_filter(-5)


@given(st.integers(1, 400))
def test_d_filter_definition(d):
    odd_bad = any(d % q == 0 and q % 4 == 3 for q in range(3, d + 1) if all(q % r for r in range(2, q)))
    assert d_filter(d) == (d % 4 != 0 and not odd_bad)


def test_search03_examples():
    assert triples(search03(10, 53, 3)) == {(53, 13, Fr(9, 53), -4), (53, -13, Fr(-9, 53), 4)}
    assert (13, 7, Fr(-9, 13), 2) in triples(search03(10, 13, 3))
    assert (11, 7, Fr(2, 11), -3) in triples(search03(5, 11, 3))
    assert search03(7, None, 5) == []
    with pytest.raises(NotSquareFree):
        search03(12, 5, 3)
    with pytest.raises(NotSquareFree):
        search03(1, 5, 3)


@pytest.mark.parametrize("d", [2, 5, 10, 13, 17, 26])
def test_search03_against_brute_force(d):
    found = search03(d, None, 12)
    assert brute03(d, 2000) <= triples(found)
    for sol in found:
        assert verify_solution(sol)


def test_search03_fixed_prime_is_a_restriction():
    everything = search03(10, None, 5)
    assert triples(search03(10, 13, 5)) == {t for t in triples(everything) if t[0] == 13}
    assert {13, 41, 53, 547, 1559, 2027} <= {s.p for s in everything}


def test_search03_is_sorted_and_unique():
    sols = search03(10, None, 6)
    keys = [s.sort_key() for s in sols]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_d5_exponent_is_one():
    for sol in search03(5, None, 20, p_limit=10**4):
        assert sol.s == 1


def test_d10_p53_within_bound():
    for sol in search03(10, 53, 10):
        if abs(sol.class_gcd) == 1:
            assert 53**sol.s <= bound_ps(10, 1, 53)


def test_bound_ps():
    assert bound_ps(10, 1, 53) == 57
    assert bound_ps(10, 1, 11) == 6897
    assert bound_ps(2, 5, 41) >= 41
    sol = Radical03Solution(2, 41, 1, 17, -12, 1)
    assert verify_solution(sol) and abs(sol.class_gcd) == 5


@given(st.integers(1, 500), st.integers(1, 20), st.sampled_from([3, 5, 7, 11]))
def test_bound_ps_brackets_real_value(d, k, p):
    b = bound_ps(d, k, p)
    scale = k * p ** (2 * vp(d + 1, p))
    assert b % scale == 0
    root = Fr(b, scale) - 2 * d  # integer upper bound for (d+1)^(3/2)
    assert root**2 >= (d + 1) ** 3
    assert (root - 1) ** 2 <= (d + 1) ** 3


def chebyshev_T(n, x):
    t0, t1 = 1, x
    for _ in range(n):
        t0, t1 = t1, 2 * x * t1 - t0
    return t0


def chebyshev_U(n, x):
    u0, u1 = 1, 2 * x
    for _ in range(n):
        u0, u1 = u1, 2 * x * u1 - u0
    return u0


def test_f_poly_examples():
    assert f_poly(1, 2) == -11
    assert f_poly(2, 2) == -199
    assert f_poly(3, 2) == -3571
    assert all(f_poly(0, a) == 1 for a in range(1, 6))
    with pytest.raises(ValueError):
        f_poly(-1, 2)


def test_f_poly_chebyshev():
    for a in range(1, 11):
        x = 2 * a * a + 1
        for n in range(1, 51):
            assert f_poly(n, a) == chebyshev_T(n, x) - 2 * a * (a * a + 1) * chebyshev_U(n - 1, x)


def test_family_a2plus1_examples():
    rows = [(s.p, s.a1, s.a2, s.a3) for s in family_a2plus1(2, 3)]
    assert rows == [
        (11, 18, Fr(-2, 11), 8),
        (199, 322, Fr(-2, 199), 144),
        (3571, 5778, Fr(-2, 3571), 2584),
    ]
    # f_1(1) = -1 carries no prime
    assert f_poly(1, 1) == -1
    assert all(s.p != 1 for s in family_a2plus1(1, 2))
    with pytest.raises(ValueError):
        family_a2plus1(0, 3)


@settings(max_examples=25)
@given(st.integers(1, 12), st.integers(1, 5))
def test_family_a2plus1_points(a, n):
    for sol in family_a2plus1(a, n):
        assert sol.d == a * a + 1
        assert gcd(a, sol.p) == 1
        assert verify_solution(sol)


def test_family_neg_pell():
    sols = family_neg_pell(2, 4)
    assert {s.p for s in sols} == {7, 41, 239}
    assert (7, 7 + 2 * 5, Fr(-1, 7), 7 + 5) in triples(sols)
    assert len({s.p for s in family_neg_pell(5, 5)}) <= 1
    with pytest.raises(NoNegativePell):
        family_neg_pell(3, 4)


def test_neg_pell_sequence():
    seq = neg_pell_sequence(2, 10)
    assert [s for s, _ in seq] == [1, 7, 41, 239, 1393, 8119, 47321, 275807, 1607521, 9369319]
    for s, t in seq:
        assert s * s - 2 * t * t == -1
    s1 = neg_pell_sequence(5, 1)[0][0]
    assert all(s % s1 == 0 for s, _ in neg_pell_sequence(5, 6))


def test_degenerate03_empty_and_never_convergent():
    assert degenerate03(QuadPoly(1, 0, 0), 5).points == ()
    assert degenerate03(QuadPoly(0, 0, 3), 5).points == ()
    res = degenerate03(QuadPoly(0, 1, 0), 5)
    assert res.points == () and [f.convergent for f in res.families] == [False]
    with pytest.raises(NotDegenerate):
        degenerate03(QuadPoly(1, 2, 3), 5)
    with pytest.raises(NotDegenerate):
        degenerate03(QuadPoly(1, 0, -10), 5)
    with pytest.raises(NotDegenerate):
        degenerate03(QuadPoly(0, 0, 0), 5)


def test_degenerate03_order_test():
    # 3 has order 3 modulo 13, not a multiple of 4
    assert degenerate03(QuadPoly(0, 13, 1), 3).points == ()
    # 5^2 = -1 modulo 13
    res = degenerate03(QuadPoly(0, 13, 1), 5, index_bound=1)
    assert res.points and any(pt.convergent for pt in res.points)
    mirror = degenerate03(QuadPoly(1, 13, 0), 5, index_bound=1)
    assert mirror.points and any(pt.convergent for pt in mirror.points)
    for F, pts in ((QuadPoly(0, 13, 1), res.points), (QuadPoly(1, 13, 0), mirror.points)):
        for pt in pts:
            assert membership(pt.pcf, F).equations_hold
