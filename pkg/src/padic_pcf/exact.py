"""Exact rationals, p-adic valuations, square roots in Q_p and truncated
p-adic numbers.

Rationals are :class:`fractions.Fraction` throughout; ``Fraction`` already
keeps lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import isprime, perfect_power

from .errors import (
    InvalidPrime,
    NoSquareRoot,
    NotInQp,
    PcfError,
    PrecisionExhausted,
    ZeroInput,
    ZeroPolynomial,
)

Rational = Fraction
INF = math.inf

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class _Infinity:
    """The point [1:0] of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` (optional sign, no decimals)."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise PcfError(f"invalid rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise PcfError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=4096)
def _checked_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or p < 3 or not isprime(p):
        raise InvalidPrime(f"{p!r} is not an odd prime")
    return p


def check_prime(p: int) -> int:
    """Return ``p`` if it is an odd prime, else raise :class:`InvalidPrime`."""
    try:
        return _checked_prime(p)
    except TypeError:  # unhashable input
        raise InvalidPrime(f"{p!r} is not an odd prime") from None


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int) -> int | float:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    check_prime(p)
    x = as_rational(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def in_O(x, p: int) -> bool:
    """True iff ``x`` lies in Z[1/p]."""
    check_prime(p)
    den = as_rational(x).denominator
    while den % p == 0:
        den //= p
    return den == 1


def unit_part(x: Fraction, p: int) -> tuple[int, Fraction]:
    """Split nonzero ``x`` as ``p**v * u`` with ``u`` a p-adic unit."""
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("zero has no unit part")
    a = _vp_int(x.numerator, p)
    b = _vp_int(x.denominator, p)
    return a - b, Fraction(x.numerator // p**a, x.denominator // p**b)


def unit_residue(u: Fraction, p: int, k: int) -> int:
    """Residue of the p-adic unit ``u`` modulo ``p**k``."""
    mod = p**k
    return u.numerator * pow(u.denominator, -1, mod) % mod


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(q, s)`` with ``n == q**s``, ``q`` prime, ``s >= 1``; else None."""
    if n < 2:
        return None
    if isprime(n):
        return n, 1
    pp = perfect_power(n)
    if not pp:
        return None
    base, e = int(pp[0]), int(pp[1])
    # perfect_power may return a composite base with a maximal exponent
    inner = prime_power(base)
    if inner is None:
        return None
    return inner[0], inner[1] * e


# -- square roots modulo p and p-adic lifting ---------------------------------


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Tonelli-Shanks square root of ``a`` modulo the odd prime ``p``."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        raise NoSquareRoot(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def hensel_sqrt(a: int, r: int, p: int, k: int) -> int:
    """Lift a root ``r`` of ``x**2 = a (mod p)`` to a root modulo ``p**k``.

    Requires ``p`` odd and ``a`` a unit so that ``2r`` is invertible; the
    precision doubles at each Newton step.
    """
    known = 1
    while known < k:
        known = min(2 * known, k)
        mod = p**known
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return r % p**k


# -- truncated p-adic numbers --------------------------------------------------


@dataclass(frozen=True, eq=False)
class PAdicApprox:
    """``p**valuation * unit`` with ``unit`` known modulo ``p**precision``.

    Arithmetic with other approximations or with exact rationals tracks the
    absolute precision; an operation that cancels every known digit raises
    :class:`PrecisionExhausted`.
    """

    p: int
    valuation: int
    unit: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise PrecisionExhausted("precision must be positive")
        mod = self.p**self.precision
        object.__setattr__(self, "unit", self.unit % mod)
        if self.unit % self.p == 0:
            raise ValueError("unit digits must be coprime to p")

    @classmethod
    def from_rational(cls, x, p: int, precision: int) -> PAdicApprox:
        v, u = unit_part(as_rational(x), p)
        return cls(p, v, unit_residue(u, p, precision), precision)

    @property
    def abs_precision(self) -> int:
        return self.valuation + self.precision

    def truncate(self, precision: int) -> PAdicApprox:
        if precision > self.precision:
            raise PrecisionExhausted(
                f"requested {precision} digits, only {self.precision} known"
            )
        return PAdicApprox(self.p, self.valuation, self.unit, precision)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PAdicApprox):
            return NotImplemented
        if self.p != other.p or self.valuation != other.valuation:
            return False
        mod = self.p ** min(self.precision, other.precision)
        return (self.unit - other.unit) % mod == 0

    def __hash__(self) -> int:
        return hash((self.p, self.valuation))

    def congruent(self, x, digits: int | None = None) -> bool:
        """True iff the rational ``x`` matches this value in its leading
        ``digits`` unit digits (default: all known digits)."""
        digits = self.precision if digits is None else min(digits, self.precision)
        x = as_rational(x)
        if x == 0:
            return False
        v, u = unit_part(x, self.p)
        return v == self.valuation and (
            unit_residue(u, self.p, digits) - self.unit
        ) % self.p**digits == 0

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other) -> PAdicApprox | Fraction:
        if isinstance(other, PAdicApprox):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return as_rational(other)

    def __neg__(self) -> PAdicApprox:
        return PAdicApprox(self.p, self.valuation, -self.unit, self.precision)

    def __add__(self, other) -> PAdicApprox:
        other = self._coerce(other)
        p = self.p
        if isinstance(other, Fraction):
            if other == 0:
                return self
            ov, ou = unit_part(other, p)
            oabs = INF
        else:
            ov, ou, oabs = other.valuation, other.unit, other.abs_precision
        absprec = min(self.abs_precision, oabs)
        low = min(self.valuation, ov)
        k = absprec - low
        if k <= 0:
            raise PrecisionExhausted("no digits survive the addition")
        mod = p**k
        if isinstance(ou, Fraction):
            ou = unit_residue(ou, p, max(k - (ov - low), 1)) if ov - low < k else 0
        s = (self.unit * p ** (self.valuation - low) + ou * p ** (ov - low)) % mod
        if s == 0:
            raise PrecisionExhausted("cancellation consumed all known digits")
        w = _vp_int(s, p)
        return PAdicApprox(p, low + w, s // p**w, k - w)

    __radd__ = __add__

    def __sub__(self, other) -> PAdicApprox:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PAdicApprox:
        return (-self) + other

    def __mul__(self, other) -> PAdicApprox:
        other = self._coerce(other)
        p = self.p
        if isinstance(other, Fraction):
            if other == 0:
                raise PrecisionExhausted("product with exact zero")
            ov, ou = unit_part(other, p)
            prec = self.precision
            ou = unit_residue(ou, p, prec)
        else:
            ov, ou = other.valuation, other.unit
            prec = min(self.precision, other.precision)
        return PAdicApprox(p, self.valuation + ov, self.unit * ou, prec)

    __rmul__ = __mul__

    def inverse(self) -> PAdicApprox:
        mod = self.p**self.precision
        return PAdicApprox(
            self.p, -self.valuation, pow(self.unit, -1, mod), self.precision
        )

    def __truediv__(self, other) -> PAdicApprox:
        other = self._coerce(other)
        if isinstance(other, Fraction):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return self * (1 / other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> PAdicApprox:
        return self.inverse() * self._coerce(other)

    def __pow__(self, n: int) -> PAdicApprox:
        if n < 0:
            return self.inverse() ** (-n)
        mod = self.p**self.precision
        return PAdicApprox(
            self.p, self.valuation * n, pow(self.unit, n, mod), self.precision
        )

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "valuation": str(self.valuation),
            "unitDigits": str(self.unit),
            "precision": str(self.precision),
        }

    @classmethod
    def from_json(cls, obj: dict) -> PAdicApprox:
        return cls(
            int(obj["p"]),
            int(obj["valuation"]),
            int(obj["unitDigits"]),
            int(obj["precision"]),
        )


Value = Union[Fraction, PAdicApprox, _Infinity]


def sqrt_padic(x, p: int, precision: int) -> PAdicApprox:
    """Square root of ``x`` in Q_p to ``precision`` unit digits.

    The canonical root has unit digit modulo ``p`` in ``[1, (p-1)/2]``.
    Raises :class:`NoSquareRoot` when ``x`` is not a square in Q_p.
    """
    check_prime(p)
    x = as_rational(x)
    if x == 0:
        raise ZeroInput("square root of zero is not a unit approximation")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    v, u = unit_part(x, p)
    if v % 2:
        raise NoSquareRoot(f"{x} has odd {p}-adic valuation")
    a = unit_residue(u, p, precision)
    r0 = sqrt_mod_prime(a % p, p)  # raises NoSquareRoot
    if r0 > (p - 1) // 2:
        r0 = p - r0
    return PAdicApprox(p, v // 2, hensel_sqrt(a, r0, p, precision), precision)


def is_qp_square(x, p: int) -> bool:
    try:
        sqrt_padic(x, p, 1)
    except NoSquareRoot:
        return False
    return True


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def quad_roots_padic(F, p: int, precision: int) -> list[Value]:
    """Both roots of ``A x^2 + B x + C`` in P^1(Q_p), with multiplicity.

    ``F`` is any object with rational attributes ``A``, ``B``, ``C``.
    Rational roots come back exact, ``INFINITY`` marks the point [1:0], and
    irrational roots are :class:`PAdicApprox` values with ``precision``
    digits.  Raises :class:`NotInQp` when the discriminant is not a square
    in Q_p.
    """
    check_prime(p)
    A, B, C = (as_rational(F.A), as_rational(F.B), as_rational(F.C))
    if A == 0 and B == 0 and C == 0:
        raise ZeroPolynomial("the zero polynomial has no roots")
    if A == 0:
        if B == 0:
            return [INFINITY, INFINITY]
        return [-C / B, INFINITY]
    disc = B * B - 4 * A * C
    exact = rational_sqrt(disc)
    if exact is not None:
        return [(-B + exact) / (2 * A), (-B - exact) / (2 * A)]
    if not is_qp_square(disc, p):
        raise NotInQp(f"discriminant {disc} is not a square in Q_{p}")
    work = precision + 2
    for _ in range(8):
        s = sqrt_padic(disc, p, work)
        try:
            roots = [(s - B) / (2 * A), (-s - B) / (2 * A)]
        except PrecisionExhausted:
            roots = None
        if roots and all(r.precision >= precision for r in roots):
            return [r.truncate(precision) for r in roots]
        work *= 2
    raise PrecisionExhausted("could not separate the roots")


# -- projective points ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjPoint:
    """A point [x:y] of P^1(Q); equality is up to a nonzero scalar."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_rational(self.x))
        object.__setattr__(self, "y", as_rational(self.y))
        if self.x == 0 and self.y == 0:
            raise ValueError("[0:0] is not a projective point")

    @property
    def is_infinity(self) -> bool:
        return self.y == 0

    def value(self) -> Fraction | _Infinity:
        return INFINITY if self.y == 0 else self.x / self.y

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.x * other.y == other.x * self.y

    def __hash__(self) -> int:
        return hash(self.value())

    def __repr__(self) -> str:
        return f"[{format_rational(self.x)}:{format_rational(self.y)}]"


def value_to_json(v: Value):
    if isinstance(v, PAdicApprox):
        return v.to_json()
    if v is INFINITY:
        return "inf"
    return format_rational(v)
