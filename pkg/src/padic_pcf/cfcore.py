"""Continuants, continued-fraction matrices and the quadratic polynomial
attached to a periodic continued fraction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .errors import EmptyInput, NotInO, ZeroPolynomial
from .exact import (
    INFINITY,
    PAdicApprox,
    ProjPoint,
    Value,
    as_rational,
    check_prime,
    format_rational,
    in_O,
)


@dataclass(frozen=True)
class Mat2:
    e11: Fraction
    e12: Fraction
    e21: Fraction
    e22: Fraction

    def __post_init__(self):
        for name in ("e11", "e12", "e21", "e22"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def D(cls, c) -> Mat2:
        return cls(c, 1, 1, 0)

    def __matmul__(self, o: Mat2) -> Mat2:
        return Mat2(
            self.e11 * o.e11 + self.e12 * o.e21,
            self.e11 * o.e12 + self.e12 * o.e22,
            self.e21 * o.e11 + self.e22 * o.e21,
            self.e21 * o.e12 + self.e22 * o.e22,
        )

    def det(self) -> Fraction:
        return self.e11 * self.e22 - self.e12 * self.e21

    def trace(self) -> Fraction:
        return self.e11 + self.e22

    def transpose(self) -> Mat2:
        return Mat2(self.e11, self.e21, self.e12, self.e22)

    def inverse(self) -> Mat2:
        det = self.det()
        if det == 0:
            raise ZeroDivisionError("singular matrix")
        return Mat2(self.e22 / det, -self.e12 / det, -self.e21 / det, self.e11 / det)

    def scale(self, lam) -> Mat2:
        lam = as_rational(lam)
        return Mat2(lam * self.e11, lam * self.e12, lam * self.e21, lam * self.e22)

    def act(self, x: Value) -> Value:
        """Moebius action ``x -> (e11 x + e12) / (e21 x + e22)`` on P^1."""
        if x is INFINITY:
            return INFINITY if self.e21 == 0 else self.e11 / self.e21
        if isinstance(x, PAdicApprox):
            num, den = _affine(x, self.e11, self.e12), _affine(x, self.e21, self.e22)
            if not isinstance(den, PAdicApprox):
                return num / den  # den is a nonzero exact constant here
            return num / den if isinstance(num, PAdicApprox) or num else Fraction(0)
        den = self.e21 * x + self.e22
        if den == 0:
            return INFINITY
        return (self.e11 * x + self.e12) / den


def _affine(x: PAdicApprox, a: Fraction, b: Fraction) -> PAdicApprox | Fraction:
    """``a x + b``, exact when ``a`` is zero."""
    return b if a == 0 else x * a + b


J = Mat2(0, 1, 1, 0)


@dataclass(frozen=True)
class QuadPoly:
    """``A x^2 + B x + C`` up to a nonzero scalar."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __post_init__(self):
        for name in ("A", "B", "C"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))

    @property
    def is_zero(self) -> bool:
        return self.A == 0 and self.B == 0 and self.C == 0

    @property
    def discriminant(self) -> Fraction:
        return self.B * self.B - 4 * self.A * self.C

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        return (self.A * x + self.B) * x + self.C

    def derivative(self, x) -> Fraction:
        return 2 * self.A * as_rational(x) + self.B

    def scaled(self, lam) -> QuadPoly:
        lam = as_rational(lam)
        return QuadPoly(lam * self.A, lam * self.B, lam * self.C)

    def proportional_to(self, other: QuadPoly) -> bool:
        """Rank of the 2x3 coefficient matrix is at most one."""
        a, b = (self.A, self.B, self.C), (other.A, other.B, other.C)
        return all(a[i] * b[j] == a[j] * b[i] for i, j in ((0, 1), (0, 2), (1, 2)))

    def primitive(self) -> QuadPoly:
        """The proportional polynomial with coprime integer coefficients."""
        coeffs = (self.A, self.B, self.C)
        lcm = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * lcm) for c in coeffs]
        g = math.gcd(*ints) or 1
        return QuadPoly(*(c // g for c in ints))

    def swapped(self) -> QuadPoly:
        """``C x^2 - B x + A``, the polynomial of the reversed period."""
        return QuadPoly(self.C, -self.B, self.A)

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("A", "B", "C")}

    @classmethod
    def from_json(cls, obj: dict) -> QuadPoly:
        return cls(*(as_rational(str(obj[k])) for k in ("A", "B", "C")))

    def __str__(self) -> str:
        return f"({format_rational(self.A)})x^2 + ({format_rational(self.B)})x + ({format_rational(self.C)})"


@dataclass(frozen=True)
class PCF:
    """``[b_1..b_N, overline(a_1..a_k)]`` with entries in Z[1/p]."""

    p: int
    preperiod: tuple[Fraction, ...]
    period: tuple[Fraction, ...]

    def __post_init__(self):
        check_prime(self.p)
        pre = tuple(as_rational(c) for c in self.preperiod)
        per = tuple(as_rational(c) for c in self.period)
        if not per:
            raise EmptyInput("the period must be nonempty")
        for c in pre + per:
            if not in_O(c, self.p):
                raise NotInO(f"{format_rational(c)} is not in Z[1/{self.p}]")
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def pure(cls, p: int, period: Sequence) -> PCF:
        return cls(p, (), tuple(period))

    @property
    def type(self) -> tuple[int, int]:
        return len(self.preperiod), len(self.period)

    def entries(self, n: int) -> Iterator[Fraction]:
        """The first ``n`` partial quotients of the unrolled sequence."""
        N, k = self.type
        for i in range(n):
            yield self.preperiod[i] if i < N else self.period[(i - N) % k]

    def purely_periodic(self) -> PCF:
        return PCF(self.p, (), self.period)

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "preperiod": [format_rational(c) for c in self.preperiod],
            "period": [format_rational(c) for c in self.period],
        }

    @classmethod
    def from_json(cls, obj: dict) -> PCF:
        return cls(
            int(obj["p"]),
            tuple(as_rational(str(c)) for c in obj.get("preperiod", [])),
            tuple(as_rational(str(c)) for c in obj["period"]),
        )

    def __str__(self) -> str:
        pre = ", ".join(format_rational(c) for c in self.preperiod)
        per = ", ".join(format_rational(c) for c in self.period)
        body = f"{pre}, ({per})" if pre else f"({per})"
        return f"[{body}]_{self.p}"


def continuants(c: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    """``(A_0..A_n, B_0..B_n)`` for the partial quotients ``c_1..c_n``."""
    A = [Fraction(1)]
    B = [Fraction(0)]
    a_prev, b_prev = Fraction(0), Fraction(1)  # A_{-1}, B_{-1}
    for x in c:
        x = as_rational(x)
        a_next = A[-1] * x + a_prev
        b_next = B[-1] * x + b_prev
        a_prev, b_prev = A[-1], B[-1]
        A.append(a_next)
        B.append(b_next)
    return A, B


def cf_matrix(c: Sequence) -> Mat2:
    """``M(c_1..c_n) = [[A_n, A_{n-1}], [B_n, B_{n-1}]]``."""
    if len(c) == 0:
        raise EmptyInput("cf_matrix needs at least one partial quotient")
    A, B = continuants(c)
    return Mat2(A[-1], A[-2], B[-1], B[-2])


def _matrix_or_identity(c: Sequence) -> Mat2:
    return cf_matrix(c) if len(c) else Mat2.identity()


def convergent_at(pcf: PCF, n: int) -> ProjPoint:
    """The n-th convergent ``[A_n : B_n]``."""
    if n < 1:
        raise ValueError("convergents are indexed from 1")
    A, B = continuants(list(pcf.entries(n)))
    return ProjPoint(A[-1], B[-1])


def e_matrix(pcf: PCF) -> Mat2:
    """``M(b) M(a) M(b)^{-1}``; the conjugating factor is the identity when
    there is no preperiod."""
    Mb = _matrix_or_identity(pcf.preperiod)
    return Mb @ cf_matrix(pcf.period) @ Mb.inverse()


def quad_of(pcf: PCF) -> QuadPoly:
    """``E21 x^2 + (E22 - E11) x - E12``, unreduced."""
    E = e_matrix(pcf)
    return QuadPoly(E.e21, E.e22 - E.e11, -E.e12)


class Membership(NamedTuple):
    member: bool
    zero_quad: bool

    @property
    def equations_hold(self) -> bool:
        # the zero Quad satisfies every defining equation trivially
        return self.member or self.zero_quad


def membership(pcf: PCF, F: QuadPoly) -> Membership:
    if F.is_zero:
        raise ZeroPolynomial("V(0) is handled separately; its convergent locus is empty")
    Q = quad_of(pcf)
    if Q.is_zero:
        return Membership(False, True)
    return Membership(Q.proportional_to(F), False)


def in_variety(pcf: PCF, F: QuadPoly) -> bool:
    """True iff ``Quad(pcf)`` is a nonzero multiple of ``F``."""
    return membership(pcf, F).member


def sigma_reverse(point: Sequence, F: QuadPoly) -> tuple[tuple[Fraction, ...], QuadPoly]:
    """Reverse a purely periodic point; ``F`` becomes ``C x^2 - B x + A``."""
    return tuple(as_rational(a) for a in reversed(point)), F.swapped()


def table1_quad(pcf: PCF) -> QuadPoly | None:
    """Closed-form Quad for the seven small types, or None for other types."""
    pre, per = pcf.preperiod, pcf.period
    t = pcf.type
    if t == (0, 1):
        (a1,) = per
        return QuadPoly(1, -a1, -1)
    if t == (1, 1):
        (b1,), (a1,) = pre, per
        return QuadPoly(1, a1 - 2 * b1, b1 * b1 - a1 * b1 - 1)
    if t == (2, 1):
        (b1, b2), (a1,) = pre, per
        return QuadPoly(
            b2 * a1 - b2 * b2 + 1,
            -2 * a1 * b1 * b2 + 2 * b1 * b2 * b2 - a1 - 2 * b1 + 2 * b2,
            a1 * b1 * b1 * b2 - b1 * b1 * b2 * b2 + a1 * b1 + b1 * b1 - 2 * b2 * b1 - 1,
        )
    if t == (0, 2):
        a1, a2 = per
        return QuadPoly(a2, -a1 * a2, -a1)
    if t == (1, 2):
        (b1,), (a1, a2) = pre, per
        return QuadPoly(a1, a2 * a1 - 2 * b1 * a1, -a1 * a2 * b1 + a1 * b1 * b1 - a2)
    if t == (0, 3):
        a1, a2, a3 = per
        return QuadPoly(a2 * a3 + 1, -a1 * a2 * a3 - a1 + a2 - a3, -a2 * a1 - 1)
    if t == (1, 3):
        (b1,), (a1, a2, a3) = pre, per
        return QuadPoly(
            a1 * a2 + 1,
            a1 * a2 * a3 - 2 * a1 * a2 * b1 + a1 - a2 + a3 - 2 * b1,
            -a1 * a2 * a3 * b1 + a1 * a2 * b1 * b1 - a1 * b1 - a2 * a3
            + a2 * b1 - a3 * b1 + b1 * b1 - 1,
        )
    return None
