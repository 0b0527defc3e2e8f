"""Purely periodic expansions of length three for sqrt(d) and the
degenerate type-(0,3) configurations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import n_order, primefactors
from sympy.ntheory import factorint

from ._parallel import pmap
from .cfcore import PCF, QuadPoly, in_variety
from .convergence import is_convergent, limit
from .errors import NoNegativePell, NotDegenerate, NotSquareFree
from .exact import PAdicApprox, check_prime, prime_power, vp
from .loci import FamilyDescriptor, LocusResult, _result, integer_coefficients, make_point
from .pell import brahmagupta, neg_pell, orbit, pell_classes

DEFAULT_MAX_INDEX = 25


@dataclass(frozen=True)
class Radical03Solution:
    """``[overline(a1, v/p^s, a3)]_p`` converging to sqrt(d)."""

    d: int
    p: int
    s: int
    a1: int
    a3: int
    v: int

    @property
    def a2(self) -> Fraction:
        return Fraction(self.v, self.p**self.s)

    @property
    def pcf(self) -> PCF:
        return PCF.pure(self.p, (self.a1, self.a2, self.a3))

    @property
    def class_gcd(self) -> int:
        """``gcd(a1 + a3, 1 - a1 a3)`` signed as ``(1 - a1 a3) / p^s``."""
        q, r = divmod(1 - self.a1 * self.a3, self.p**self.s)
        assert r == 0
        return q

    def sort_key(self) -> tuple:
        return (self.p, abs(self.a1), self.a1, self.a3)

    def to_json(self) -> dict:
        return {
            "d": str(self.d),
            "p": str(self.p),
            "s": str(self.s),
            "a1": str(self.a1),
            "a2": f"{self.a2.numerator}/{self.a2.denominator}",
            "a3": str(self.a3),
            "limitCheck": "ok",
        }


def sqrt_limit_ok(pcf: PCF, d: int, precision: int = 8) -> bool:
    """The limit of ``pcf`` squares to d modulo ``p^(precision - 2|v|)``."""
    L = limit(pcf, precision).value
    if not isinstance(L, PAdicApprox):
        return L * L == d
    digits = max(precision - 2 * abs(L.valuation), 1)
    return (L * L).congruent(d, digits)


def verify_solution(sol: Radical03Solution, precision: int = 8) -> bool:
    d, p, s, a1, a3, v = sol.d, sol.p, sol.s, sol.a1, sol.a3, sol.v
    return (
        s >= 1
        and a1 * a1 - d * a3 * a3 == d - 1
        and v != 0
        and (d - 1) % v == 0
        and (a1 - d * a3) * v == (d - 1) * p**s
        and (a1 * a3 * v) % p != 0
        and in_variety(sol.pcf, QuadPoly(1, 0, -d))
        and is_convergent(sol.pcf).convergent
        and sqrt_limit_ok(sol.pcf, d, precision)
    )


def d_filter(d: int) -> bool:
    """False when no prime can give sqrt(d) an expansion of type (0,3):
    ``d <= 0``, ``4 | d``, or a prime ``q = 3 mod 4`` divides d."""
    if d <= 0 or d % 4 == 0:
        return False
    return all(q % 4 != 3 for q in primefactors(d))


def _check_square_free(d: int) -> None:
    if d <= 1 or any(e > 1 for e in factorint(d).values()):
        raise NotSquareFree(f"d={d} must be a square-free integer > 1")


def _candidate(d: int, u: int, v: int, p: int | None, p_limit: int | None) -> Radical03Solution | None:
    t = u - d * v
    if t == 0:
        return None
    a2 = Fraction(d - 1, t)
    den = a2.denominator
    if den == 1:
        return None
    if p is not None:
        s = vp(den, p)
        if p**s != den:
            return None
        q = p
    else:
        pp = prime_power(den)
        if pp is None or pp[0] == 2:
            return None
        q, s = pp
        if p_limit is not None and q > p_limit:
            return None
    if (u * v) % q == 0:
        return None
    return Radical03Solution(d, q, s, u, v, a2.numerator)


def _search_orbit(args) -> list[Radical03Solution]:
    d, start, unit, p, max_index, p_limit, precision = args
    found = []
    for u, v in orbit(start, d, max_index, unit).values():
        sol = _candidate(d, u, v, p, p_limit)
        if sol is not None:
            assert verify_solution(sol, precision), f"candidate failed verification: {sol}"
            found.append(sol)
    return found


def search03(
    d: int,
    p: int | None = None,
    max_index: int = DEFAULT_MAX_INDEX,
    max_class_scan: int | None = None,
    precision: int = 8,
    p_limit: int | None = None,
    workers: int | None = None,
) -> list[Radical03Solution]:
    """Expansions ``[overline(a1, v/p^s, a3)]_p`` of sqrt(d).

    Every class of ``x^2 - d y^2 = d - 1`` is walked for ``|i| <= max_index``
    from both signs of its representative; ``a1 - d a3`` must make
    ``(d - 1)/(a1 - d a3)`` equal to ``v/p^s`` with s >= 1.  With ``p`` None
    the prime is read off the denominator; ``p_limit`` drops larger primes.
    The index bound makes the result incomplete in general.
    """
    _check_square_free(d)
    if p is not None:
        check_prime(p)
    if not d_filter(d):
        return []
    classes = pell_classes(d, d - 1, max_class_scan)
    starts = sorted({s for f in classes.fundamentals for s in (f, (-f[0], -f[1]))})
    tasks = [(d, s, classes.unit, p, max_index, p_limit, precision) for s in starts]
    unique = {}
    for part in pmap(_search_orbit, tasks, workers):
        for sol in part:
            unique[(sol.p, sol.a1, sol.a3)] = sol
    return sorted(unique.values(), key=Radical03Solution.sort_key)


def bound_ps(d: int, k: int, p: int) -> int:
    """Integer upper bound for ``|k| ((d+1)^(3/2) + 2d) / |d+1|_p^2``."""
    check_prime(p)
    root_bound = isqrt((d + 1) ** 3) + 1
    return abs(k) * (root_bound + 2 * d) * p ** (2 * vp(d + 1, p))


# -- d = a^2 + 1 ------------------------------------------------------------------


def f_poly(n: int, a: int) -> int:
    """``f_n(a)`` with ``f_0 = 1``, ``f_1 = -2a^3 + 2a^2 - 2a + 1`` and
    ``f_{n+2} = 2(2a^2 + 1) f_{n+1} - f_n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    f0, f1 = 1, -2 * a**3 + 2 * a**2 - 2 * a + 1
    if n == 0:
        return f0
    c = 2 * (2 * a * a + 1)
    for _ in range(n - 1):
        f0, f1 = f1, c * f1 - f0
    return f1


def family_a2plus1(a: int, max_n: int, precision: int = 8) -> list[Radical03Solution]:
    """Expansions ``(a u*_n, a/f_n(a), a v*_n)`` of sqrt(a^2 + 1) for the n
    with ``|f_n(a)|`` an odd prime power."""
    if a < 1:
        raise ValueError("a must be a positive integer")
    d = a * a + 1
    unit = (2 * a * a + 1, 2 * a)
    power = unit
    out = []
    for n in range(1, max_n + 1):
        if n > 1:
            power = brahmagupta(power, unit, d)
        us, vs = power
        f = f_poly(n, a)
        assert f == us - d * vs
        assert gcd(a, f) == 1
        pp = prime_power(abs(f))
        if pp is None or pp[0] == 2:
            continue
        p, s = pp
        sol = Radical03Solution(d, p, s, a * us, a * vs, a if f > 0 else -a)
        assert verify_solution(sol, precision), f"family point failed verification: {sol}"
        out.append(sol)
    return out


def neg_pell_sequence(d: int, max_n: int) -> list[tuple[int, int]]:
    """``(s_n, t_n)`` for n = 1..max_n, the positive solutions of
    ``x^2 - d y^2 = -1`` generated from the fundamental one."""
    fund = neg_pell(d)
    if fund is None:
        raise NoNegativePell(f"x^2 - {d} y^2 = -1 has no solution")
    s1, t1 = fund
    u1, v1 = s1 * s1 + d * t1 * t1, 2 * s1 * t1
    seq = [(s1, t1)]
    while len(seq) < max_n:
        s, t = seq[-1]
        seq.append((u1 * s + d * v1 * t, v1 * s + u1 * t))
    return seq[:max_n]


def family_neg_pell(d: int, max_n: int, precision: int = 8) -> list[Radical03Solution]:
    """Points ``(±p + d t_n, ∓1/p, ±p + t_n)`` for the n with ``|s_n| = p``
    an odd prime."""
    out = []
    for s, t in neg_pell_sequence(d, max_n):
        pp = prime_power(abs(s))
        if pp is None or pp[1] != 1 or pp[0] == 2:
            continue
        p = pp[0]
        for sign in (1, -1):
            sol = Radical03Solution(d, p, 1, sign * p + d * t, sign * p + t, -sign)
            assert verify_solution(sol, precision), f"family point failed verification: {sol}"
            out.append(sol)
    return sorted(out, key=Radical03Solution.sort_key)


# -- degenerate configurations --------------------------------------------------


def _exponents(B1: int, p: int, index_bound: int) -> tuple[list[int], str] | None:
    """Exponents l with ``B1 | p^(2l) + 1`` (sampled), or None if there are none."""
    if B1 in (1, 2):
        return list(range(-index_bound, index_bound + 1)), "l in Z"
    order = n_order(p, B1)
    if order % 4:
        return None
    s = order // 4
    if pow(p, 2 * s, B1) != B1 - 1:
        return None
    return [s * (1 + 2 * t) for t in range(-index_bound, index_bound + 1)], f"l = {s}(1 + 2t), t in Z"


def degenerate03(F: QuadPoly, p: int, index_bound: int = 3, precision: int = 8) -> LocusResult:
    """``V(F)_{0,3}`` when F is one of A=B=0, B=C=0, A=C=0, A=0 with BC != 0,
    or C=0 with AB != 0.  Infinite families are sampled for ``|t| <= index_bound``."""
    check_prime(p)
    A, B, C = F.A, F.B, F.C
    if F.is_zero:
        raise NotDegenerate("F = 0 is not a degenerate configuration of type (0,3)")
    if (A == 0 and B == 0) or (B == 0 and C == 0):
        return _result((0, 3), [])
    if A == 0 and C == 0:
        return _result(
            (0, 3), [], [FamilyDescriptor("(a, -1/a, a) for a in O*", convergent=False)], complete=True
        )
    if A == 0 or C == 0:
        iA, iB, iC = integer_coefficients(F)
        B1 = iB // p ** vp(iB, p)
        found = _exponents(B1, p, index_bound)
        if found is None:
            return _result((0, 3), [], notes=[f"order of {p} modulo {B1} rules out every point"])
        ells, ell_desc = found
        pts = []
        for ell in ells:
            for sign in (1, -1):
                x = sign * Fraction(p) ** ell
                if A == 0:
                    coords = (-Fraction(iC, iB) * (x * x + 1) + x, -1 / x, x)
                    expected = vp(x, p) < 0 and x != Fraction(iB, iC)
                else:
                    coords = (x, -1 / x, Fraction(iA, iB) * (x * x + 1) + x)
                    expected = vp(x, p) > 0 and x != -Fraction(iB, iA)
                pt = make_point(p, 0, coords, F, precision)
                assert pt.convergent == expected
                pts.append(pt)
        if A == 0:
            desc = f"(-C/B (x^2 + 1) + x, -1/x, x) for x = ±{p}^l, {ell_desc}"
        else:
            desc = f"(x, -1/x, A/B (x^2 + 1) + x) for x = ±{p}^l, {ell_desc}"
        return _result(
            (0, 3), pts, [FamilyDescriptor(desc, convergent=any(pt.convergent for pt in pts))], complete=False
        )
    raise NotDegenerate("A, B, C are all nonzero or only B = 0")
