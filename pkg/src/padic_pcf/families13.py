"""Type-(1,3) families ``[a, overline(a1, a2, a3)]`` for sqrt(a^2 + 1)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cfcore import PCF, QuadPoly, in_variety
from .convergence import ConvergenceReport, LimitResult, is_convergent, limit
from .errors import DegenerateDenominator
from .exact import as_rational, check_prime, format_rational, vp


@dataclass(frozen=True)
class Family13Point:
    a: Fraction
    pcf: PCF
    d: Fraction
    report: ConvergenceReport
    necessary_condition: bool | None
    limit: LimitResult | None

    @property
    def convergent(self) -> bool:
        return self.report.convergent

    def to_json(self) -> dict:
        return {
            "pcf": self.pcf.to_json(),
            "d": format_rational(self.d),
            "inVariety": True,
            "convergence": self.report.to_json(),
            "necessaryCondition": self.necessary_condition,
            "limit": None if self.limit is None else self.limit.to_json(),
        }


def elimination13(F: QuadPoly, b1, a1, a3) -> Fraction:
    """Left side of the relation between b1, a1, a3 on ``V(F)_{1,3}``."""
    A, B, C = F.A, F.B, F.C
    b1, a1, a3 = (as_rational(x) for x in (b1, a1, a3))
    return (
        A * a1 * a1 * b1 * b1 + B * a1 * a1 * b1 + 2 * A * a1 * b1 + A * a3 * a3
        - 2 * A * a3 * b1 + A * b1 * b1 + C * a1 * a1 + B * a1 - B * a3 + B * b1 + A + C
    )


def _finish(a: Fraction, pcf: PCF, necessary: bool | None, precision: int) -> Family13Point:
    d = a * a + 1
    assert in_variety(pcf, QuadPoly(1, 0, -d)), f"{pcf} is not on V(x^2 - {d})"
    report = is_convergent(pcf)
    lim = limit(pcf, precision) if report.convergent else None
    return Family13Point(a, pcf, d, report, necessary, lim)


def family13_zero(a, a1, p: int, precision: int = 8) -> Family13Point:
    """``[a, overline(a1, 0, 2a - a1)]``; convergence is decided by the criterion."""
    check_prime(p)
    a, a1 = as_rational(a), as_rational(a1)
    pcf = PCF(p, (a,), (a1, Fraction(0), 2 * a - a1))
    return _finish(a, pcf, None, precision)


def necessary_value(a, a1) -> Fraction:
    """``(2 a a1^2 + 4 a1 - 2a) / (-a1^2 + 2 a a1 + 1)``, whose valuation must
    be negative for the general family to converge."""
    a, a1 = as_rational(a), as_rational(a1)
    return (2 * a * a1 * a1 + 4 * a1 - 2 * a) / (-a1 * a1 + 2 * a * a1 + 1)


def family13_general(a, a1, p: int, precision: int = 8) -> Family13Point:
    """``[a, overline(a1, 2(a - a1)/(a1^2 - 2 a a1 - 1), a1)]``."""
    check_prime(p)
    a, a1 = as_rational(a), as_rational(a1)
    den = a1 * a1 - 2 * a * a1 - 1
    if den == 0:
        raise DegenerateDenominator(f"a1^2 - 2 a a1 - 1 vanishes at a={a}, a1={a1}")
    pcf = PCF(p, (a,), (a1, 2 * (a - a1) / den, a1))  # NotInO if a2 leaves Z[1/p]
    necessary = vp(necessary_value(a, a1), p) < 0
    return _finish(a, pcf, necessary, precision)


def family13_prime(p: int, k: int, precision: int = 8) -> Family13Point:
    """``[(q+3)/4, overline(2, -(q-5)/(2q), 2)]`` for sqrt((q^2 + 6q + 25)/16),
    with q = p^k when p = 1 mod 4 and q = p^(2k) when p = 3 mod 4."""
    check_prime(p)
    if k < 1:
        raise ValueError("k must be positive")
    q = p**k if p % 4 == 1 else p ** (2 * k)
    a = Fraction(q + 3, 4)
    pcf = PCF(p, (a,), (2, -Fraction(q - 5, 2 * q), 2))
    point = _finish(a, pcf, vp(necessary_value(a, 2), p) < 0, precision)
    assert point.d == Fraction(q * q + 6 * q + 25, 16)
    return point
