"""Pell and generalized Pell equations ``x^2 - d y^2 = n``."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import PerfectSquare

Pair = tuple[int, int]


def _check_d(d: int) -> None:
    if d >= 0 and isqrt(d) ** 2 == d:
        raise PerfectSquare(f"d={d} is a perfect square")
    if d < 2:
        raise ValueError(f"d={d} must be a positive non-square integer")


def sqrt_cf(d: int) -> tuple[int, list[int]]:
    """``(a0, period)`` of the classical continued fraction of sqrt(d)."""
    _check_d(d)
    a0 = isqrt(d)
    P, Q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        P = a * Q - P
        Q = (d - P * P) // Q
        a = (a0 + P) // Q
        period.append(a)
    return a0, period


def _convergent(a0: int, quotients: list[int], n: int) -> Pair:
    """Numerator and denominator of ``[a0; q_1, ..., q_n]``."""
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    for i in range(n):
        q = quotients[i % len(quotients)]
        h_prev, h = h, q * h + h_prev
        k_prev, k = k, q * k + k_prev
    return h, k


@dataclass(frozen=True)
class PellFundamental:
    d: int
    u_star: int
    v_star: int


def fundamental_unit(d: int) -> PellFundamental:
    """Least positive solution of ``u^2 - d v^2 = 1``."""
    a0, period = sqrt_cf(d)
    L = len(period)
    u, v = _convergent(a0, period, L - 1 if L % 2 == 0 else 2 * L - 1)
    assert u * u - d * v * v == 1
    return PellFundamental(d, u, v)


def neg_pell(d: int) -> Pair | None:
    """Fundamental solution of ``s^2 - d t^2 = -1``, or None when the period
    of sqrt(d) has even length."""
    a0, period = sqrt_cf(d)
    L = len(period)
    if L % 2 == 0:
        return None
    s, t = _convergent(a0, period, L - 1)
    assert s * s - d * t * t == -1
    return s, t


def norm(s: Pair, d: int) -> int:
    return s[0] * s[0] - d * s[1] * s[1]


def brahmagupta(s1: Pair, s2: Pair, d: int) -> Pair:
    (u1, v1), (u2, v2) = s1, s2
    return u1 * u2 + d * v1 * v2, u1 * v2 + u2 * v1


def iterate_class(fund: Pair, d: int, i: int, unit: PellFundamental | None = None) -> Pair:
    """``fund`` multiplied ``i`` times by the fundamental unit (by its
    inverse when ``i < 0``)."""
    unit = unit or fundamental_unit(d)
    step = (unit.u_star, unit.v_star if i >= 0 else -unit.v_star)
    x = tuple(fund)
    for _ in range(abs(i)):
        x = brahmagupta(x, step, d)
    return x


def orbit(fund: Pair, d: int, max_index: int, unit: PellFundamental | None = None) -> dict[int, Pair]:
    """``{i: iterate_class(fund, d, i)}`` for ``|i| <= max_index``."""
    unit = unit or fundamental_unit(d)
    out = {0: tuple(fund)}
    for sign in (1, -1):
        x = tuple(fund)
        step = (unit.u_star, sign * unit.v_star)
        for i in range(1, max_index + 1):
            x = brahmagupta(x, step, d)
            out[sign * i] = x
    return out


def same_class(s1: Pair, s2: Pair, d: int, n: int) -> bool:
    """Nagell's test: the quotient of the two solutions lies in Z[sqrt(d)]."""
    (u, v), (u2, v2) = s1, s2
    m = abs(n)
    return (u * u2 - d * v * v2) % m == 0 and (u * v2 - u2 * v) % m == 0


@dataclass(frozen=True)
class PellClassSet:
    d: int
    n: int
    unit: PellFundamental
    fundamentals: tuple[Pair, ...]

    def to_json(self) -> dict:
        return {
            "d": str(self.d),
            "n": str(self.n),
            "unit": [str(self.unit.u_star), str(self.unit.v_star)],
            "fundamentals": [[str(u), str(v)] for u, v in self.fundamentals],
        }


def _rectangle(d: int, n: int, unit: PellFundamental, v_cap: int | None) -> list[Pair]:
    u_s, v_s = unit.u_star, unit.v_star
    found = []
    if n > 0:
        # 2 (u*+1) v^2 <= v*^2 n
        v_max = isqrt(v_s * v_s * n // (2 * (u_s + 1)))
    else:
        # d v^2 >= -n and 2 (u*-1) v^2 <= v*^2 (-n)
        v_max = isqrt(v_s * v_s * -n // (2 * (u_s - 1)))
    if v_cap is not None:
        v_max = min(v_max, v_cap)
    for v in range(0 if n > 0 else 1, v_max + 1):
        w = n + d * v * v
        if w < 0:
            continue
        u = isqrt(w)
        if u * u == w:
            found.append((u, v))
            if u:
                found.append((-u, v))
    return found


def pell_classes(d: int, n: int, v_cap: int | None = None) -> PellClassSet:
    """Fundamental solutions of ``x^2 - d y^2 = n``, one per class.

    The representative has least non-negative v in its class, ties broken
    toward u > 0.  The whole Nagell rectangle is scanned unless ``v_cap``
    truncates it.
    """
    _check_d(d)
    if n == 0:
        raise ValueError("n must be nonzero")
    unit = fundamental_unit(d)
    reps: list[Pair] = []
    for cand in sorted(_rectangle(d, n, unit, v_cap), key=lambda s: (s[1], s[0] < 0, abs(s[0]))):
        if not any(same_class(cand, r, d, n) for r in reps):
            reps.append(cand)
    return PellClassSet(d, n, unit, tuple(sorted(reps, key=lambda s: (s[1], -s[0]))))
