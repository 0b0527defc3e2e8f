"""Integral points and convergent loci of PCF varieties for small types.

Each ``locus*`` function returns a :class:`LocusResult`.  Closed-form
classifications are marked ``complete``; bounded scans are not, since the
finiteness they rely on is not effective.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ._parallel import chunked, pmap
from .cfcore import PCF, QuadPoly, membership
from .convergence import LimitResult, is_convergent, limit
from .errors import NotInO, RootInput, ZeroLeadingCoeff, ZeroPolynomial
from .exact import INF, as_rational, check_prime, format_rational, in_O, rational_sqrt, vp

DEFAULT_HEIGHT = 1000
DEFAULT_VALDEPTH = 12


@dataclass(frozen=True)
class FamilyDescriptor:
    """A one-parameter set of points kept symbolic, e.g. ``(a1, 0)``."""

    description: str
    convergent: bool = False

    def to_json(self) -> dict:
        return {"family": self.description, "convergent": self.convergent}


@dataclass(frozen=True)
class LocusPoint:
    point: tuple[Fraction, ...]
    pcf: PCF
    convergent: bool
    limit: LimitResult | None

    def to_json(self) -> dict:
        return {
            "point": [format_rational(c) for c in self.point],
            "convergent": self.convergent,
            "limit": None if self.limit is None else self.limit.to_json(),
        }


@dataclass(frozen=True)
class LocusResult:
    type: tuple[int, int]
    points: tuple[LocusPoint, ...] = ()
    families: tuple[FamilyDescriptor, ...] = ()
    complete: bool = True
    notes: tuple[str, ...] = field(default=())

    @property
    def convergent_points(self) -> list[LocusPoint]:
        return [pt for pt in self.points if pt.convergent]

    def coords(self, convergent_only: bool = False) -> list[tuple[Fraction, ...]]:
        return [pt.point for pt in self.points if pt.convergent or not convergent_only]

    def to_json(self) -> dict:
        return {
            "type": list(self.type),
            "complete": self.complete,
            "points": [pt.to_json() for pt in self.points],
            "families": [f.to_json() for f in self.families],
            "notes": list(self.notes),
        }


def make_point(
    p: int, preperiod_len: int, coords: Sequence, F: QuadPoly | None = None, precision: int = 8
) -> LocusPoint:
    """Build the PCF of a variety point, run the criterion and take the limit.

    When ``F`` is given, the point is checked against the variety equations.
    """
    coords = tuple(as_rational(c) for c in coords)
    pcf = PCF(p, coords[:preperiod_len], coords[preperiod_len:])
    if F is not None:
        assert membership(pcf, F).equations_hold, f"{pcf} is not on V({F})"
    conv = is_convergent(pcf).convergent
    return LocusPoint(coords, pcf, conv, limit(pcf, precision) if conv else None)


def _result(
    t: tuple[int, int], points, families=(), complete: bool = True, notes=()
) -> LocusResult:
    unique = {pt.point: pt for pt in points}
    ordered = tuple(unique[k] for k in sorted(unique))
    return LocusResult(t, ordered, tuple(families), complete, tuple(notes))


def _require_nonzero(F: QuadPoly) -> None:
    if F.is_zero:
        raise ZeroPolynomial("F = 0: every PCF lies on V(0) and none converges to its roots")


def integer_coefficients(F: QuadPoly) -> tuple[int, int, int]:
    """The primitive integer triple proportional to ``F``, first nonzero of
    (B, A, C) made positive."""
    G = F.primitive()
    ints = [int(G.A), int(G.B), int(G.C)]
    lead = next(c for c in (ints[1], ints[0], ints[2]) if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return ints[0], ints[1], ints[2]


# -- type (0,1) ------------------------------------------------------------------


def locus01(F: QuadPoly, p: int, precision: int = 8) -> LocusResult:
    """``V(F)_{0,1}(O)`` is ``{-B/A}`` exactly when ``A = -C != 0`` and
    ``B/A`` is in O; it converges iff ``|B|_p > |A|_p``."""
    _require_nonzero(F)
    check_prime(p)
    A, B, C = F.A, F.B, F.C
    if not (A != 0 and A == -C and in_O(B / A, p)):
        return _result((0, 1), [])
    pt = make_point(p, 0, (-B / A,), F, precision)
    assert pt.convergent == (vp(B, p) < vp(A, p))
    notes = []
    if rational_sqrt(F.discriminant) is not None:
        if pt.convergent:
            alpha = -vp(pt.point[0], p)
            notes.append(
                f"reducible: roots {{±1/{p}^{alpha}, ∓{p}^{alpha}}}, convergent locus {{±(1-{p}^{2 * alpha})/{p}^{alpha}}}"
            )
        else:
            notes.append("reducible: roots are units of O, no convergent point")
    return _result((0, 1), [pt], notes=notes)


# -- type (1,1) ------------------------------------------------------------------


def locus11(F: QuadPoly, p: int, precision: int = 8) -> LocusResult:
    """Points ``(b1, 2 b1 + B/A)`` and ``(-B/A - b1, -2 b1 - B/A)`` with b1 a
    rational root of ``F(x) + A``."""
    _require_nonzero(F)
    check_prime(p)
    A, B, C = F.A, F.B, F.C
    if A == 0 or not (in_O(B / A, p) and in_O(C / A, p)):
        return _result((1, 1), [])
    disc = B * B - 4 * A * (A + C)
    root = rational_sqrt(disc)
    if root is None:
        return _result((1, 1), [])
    b1 = (-B + root) / (2 * A)
    pts = [
        make_point(p, 1, (b1, 2 * b1 + B / A), F, precision),
        make_point(p, 1, (-B / A - b1, -2 * b1 - B / A), F, precision),
    ]
    expected = disc != 0 and vp(disc, p) < 2 * vp(A, p)
    assert all(pt.convergent == expected for pt in pts)
    return _result((1, 1), pts)


# -- type (2,1) ------------------------------------------------------------------


def _split_b(B: int, p: int) -> tuple[int, int] | None:
    """``(alpha, beta)`` with ``B = p^beta (p^(2 alpha) + 1)``, if any."""
    beta = vp(B, p)
    rest = B // p**beta
    if rest < 2:
        return None
    q = rest - 1
    alpha2 = vp(q, p)
    if p**alpha2 != q or alpha2 % 2:
        return None
    return alpha2 // 2, beta


def _locus21_linear(F: QuadPoly, p: int, precision: int) -> LocusResult:
    _, B, C = integer_coefficients(F)
    split = _split_b(B, p)
    if split is None:
        return _result((2, 1), [])
    alpha, beta = split
    pb = p**beta
    if alpha == 0:
        # B = 2 p^beta, C odd; both points have a1 = 0
        pts = [
            make_point(p, 2, (Fraction(-(C + pb), 2 * pb), 1, 0), F, precision),
            make_point(p, 2, (Fraction(-(C - pb), 2 * pb), -1, 0), F, precision),
        ]
        assert not any(pt.convergent for pt in pts)
        return _result((2, 1), pts)
    modulus = p ** (2 * alpha) + 1
    choices = [e for e in (1, -1) if (C + e * p ** (alpha + beta)) % modulus == 0]
    if not choices:
        return _result((2, 1), [])
    notes = []
    if len(choices) > 1:
        notes.append(f"diagnostic: two decompositions of C for alpha={alpha}, beta={beta}")
    pts = []
    for eps in choices:
        k = (C + eps * p ** (alpha + beta)) // modulus
        b1 = Fraction(-k, pb)
        pa = Fraction(p**alpha)
        a1 = eps * (pa - 1 / pa)
        pts.append(make_point(p, 2, (b1, eps * pa, a1), F, precision))
        pts.append(make_point(p, 2, (b1, eps / pa, -a1), F, precision))
    assert all(pt.convergent for pt in pts)
    return _result((2, 1), pts, notes=notes)


def _scan_values(height: int, valdepth: int, p: int, signed_exponent: bool) -> list[Fraction]:
    """Distinct rationals ``m / p^j`` with ``|m| <= height`` and
    ``0 <= j <= valdepth`` (or ``|j| <= valdepth`` when ``signed_exponent``)."""
    js = range(-valdepth if signed_exponent else 0, valdepth + 1)
    values = {Fraction(m) / Fraction(p) ** j for m in range(-height, height + 1) for j in js}
    return sorted(values)


def _a1_from(A, B, b1, b2) -> Fraction:
    num = 2 * A * b1 * b2 * b2 + B * b2 * b2 - 2 * A * b1 + 2 * A * b2 - B
    den = 2 * A * b1 * b2 + B * b2 + A
    assert den != 0, "the a1 denominator never vanishes on the variety"
    return num / den


def _scan21_chunk(args) -> list[tuple[Fraction, Fraction, Fraction]]:
    F, p, b2s = args
    A, B, C = F.A, F.B, F.C
    found = []
    for b2 in b2s:
        s = b2 * b2 + 1
        qa = A * s
        qb = 2 * A * b2 + B * s
        qc = A + B * b2 + C * s
        root = rational_sqrt(qb * qb - 4 * qa * qc)
        if root is None:
            continue
        for b1 in {(-qb + root) / (2 * qa), (-qb - root) / (2 * qa)}:
            if not in_O(b1, p):
                continue
            a1 = _a1_from(A, B, b1, b2)
            if in_O(a1, p):
                found.append((b1, b2, a1))
    return found


def locus21(
    F: QuadPoly,
    p: int,
    height: int = DEFAULT_HEIGHT,
    valdepth: int = DEFAULT_VALDEPTH,
    precision: int = 8,
    workers: int | None = None,
) -> LocusResult:
    """Type (2,1).  ``A = 0`` is classified in closed form; otherwise b2 is
    scanned over ``m / p^j`` and b1 solved from the quadratic relation."""
    _require_nonzero(F)
    check_prime(p)
    A, B = F.A, F.B
    if A == 0 and B == 0:
        return _result((2, 1), [])
    if A == 0:
        return _locus21_linear(F, p, precision)
    disc = F.discriminant
    if disc <= 0 or disc == 4 * A * A:
        return _result((2, 1), [])
    values = _scan_values(height, valdepth, p, signed_exponent=True)
    chunks = chunked(values, 4 * (workers or 1))
    triples = [t for part in pmap(_scan21_chunk, [(F, p, c) for c in chunks], workers) for t in part]
    pts = []
    for triple in triples:
        pt = make_point(p, 2, triple, F, precision)
        assert pt.convergent == (vp(triple[2], p) < 0)
        pts.append(pt)
    return _result((2, 1), pts, complete=False)


# -- type (0,2) ------------------------------------------------------------------


def locus02(F: QuadPoly, p: int, precision: int = 8) -> LocusResult:
    _require_nonzero(F)
    check_prime(p)
    A, B, C = F.A, F.B, F.C
    if A == 0 and B == 0:
        return _result((0, 2), [], [FamilyDescriptor("(a1, 0) for a1 in O")])
    if A != 0 and B == 0 and C == 0:
        return _result((0, 2), [], [FamilyDescriptor("(0, a2) for a2 in O")])
    origin = make_point(p, 0, (0, 0), F, precision)
    if not (A * B * C != 0 and in_O(B / A, p) and in_O(B / C, p)):
        return _result((0, 2), [origin])
    pt = make_point(p, 0, (-B / A, B / C), F, precision)
    assert pt.convergent == (2 * vp(B, p) < vp(A, p) + vp(C, p))
    notes = ["A = -C: the convergent point has type (0,1)"] if A == -C and pt.convergent else []
    return _result((0, 2), [origin, pt], notes=notes)


def reducible02_form(point: Sequence, p: int) -> bool:
    """Whether ``a1 a2 = ±(p^k - 1)^2 / (4^eps p^k)`` for some k > 0 and
    eps in {0, 1}."""
    a1, a2 = (as_rational(c) for c in point)
    x = abs(a1 * a2)
    if x == 0:
        return False
    k = -vp(x, p)
    if k <= 0:
        return False
    return any(x * 4**eps * p**k == (p**k - 1) ** 2 for eps in (0, 1))


# -- type (1,2) ------------------------------------------------------------------


def _points12(F: QuadPoly, p: int, b1: Fraction) -> list[tuple[Fraction, ...]]:
    A, B = F.A, F.B
    Fb, dF = F(b1), F.derivative(b1)
    if dF == 0:
        return []
    if not (in_O(dF / Fb, p) and in_O(B / A, p)):
        return []
    if not 2 * vp(dF, p) < vp(A, p) + vp(Fb, p):
        return []
    return [(b1, -dF / Fb, dF / A), (-b1 - B / A, dF / Fb, -dF / A)]


def locus12_at(F: QuadPoly, p: int, b1, precision: int = 8) -> LocusResult:
    """The convergent points of type (1,2) with first preperiod entry b1 and
    their images under ``(b1, a1, a2) -> (-b1 - B/A, -a1, -a2)``."""
    _require_nonzero(F)
    check_prime(p)
    b1 = as_rational(b1)
    if F.A == 0:
        raise ZeroLeadingCoeff("A = 0: no convergent points of type (1,2)")
    if not in_O(b1, p):
        raise NotInO(f"{format_rational(b1)} is not in Z[1/{p}]")
    if F(b1) == 0:
        raise RootInput(f"{format_rational(b1)} is a root of F")
    pts = [make_point(p, 1, c, F, precision) for c in _points12(F, p, b1)]
    assert all(pt.convergent for pt in pts)
    return _result((1, 2), pts)


def _scan12_chunk(args) -> list[tuple[Fraction, ...]]:
    F, p, b1s = args
    found = []
    for b1 in b1s:
        if F(b1) != 0:
            found.extend(_points12(F, p, b1))
    return found


def locus12_scan(
    F: QuadPoly,
    p: int,
    height: int = DEFAULT_HEIGHT,
    valdepth: int = DEFAULT_VALDEPTH,
    precision: int = 8,
    workers: int | None = None,
) -> LocusResult:
    """Components of ``V(F)_{1,2}`` plus a bounded scan for convergent points."""
    _require_nonzero(F)
    check_prime(p)
    A, B, C = F.A, F.B, F.C
    if A == 0:
        fam = "(b1, 0, a2) for b1, a2 in O" if B == 0 else "(b1, 0, 0) for b1 in O"
        return _result((1, 2), [], [FamilyDescriptor(fam)], complete=False)
    families = [FamilyDescriptor("(b1, 0, 0) for b1 in O")]
    if F.discriminant == 0:
        BA = B / A
        if in_O(BA / 2, p):
            families.append(FamilyDescriptor(f"({format_rational(-BA / 2)}, a1, 0) for a1 in O"))
            families.append(
                FamilyDescriptor(
                    f"((±x p^u + {format_rational(-BA)})/2, ∓4/(x p^u), ±x p^u) for x in {{2, 4}}, u in Z"
                )
            )
        elif in_O(BA, p):
            families.append(
                FamilyDescriptor(f"((±p^u + {format_rational(-BA)})/2, ∓4 p^-u, ±p^u) for u in Z")
            )
        return _result((1, 2), [], families, complete=False)
    families.append(FamilyDescriptor("(b1, -F'(b1)/F(b1), F'(b1)/A) for b1 in O with F(b1) != 0"))
    if not in_O(B / A, p):
        return _result((1, 2), [], families, complete=False)
    # |F'(b1)|^2 > |A| |F(b1)| forces |b1| <= max(|B/A|, |C/A|^(1/2))
    floor_v = min(vp(B / A, p), Fraction(vp(C / A, p)) / 2 if C else INF)
    candidates = [
        b for b in _scan_values(height, valdepth, p, signed_exponent=False) if vp(b, p) >= floor_v
    ]
    chunks = chunked(candidates, 4 * (workers or 1))
    coords = [c for part in pmap(_scan12_chunk, [(F, p, ch) for ch in chunks], workers) for c in part]
    pts = [make_point(p, 1, c, F, precision) for c in coords]
    assert all(pt.convergent for pt in pts)
    return _result((1, 2), pts, families, complete=False)


LOCUS_TYPES = {(0, 1), (1, 1), (2, 1), (0, 2), (1, 2)}


def locus(
    t: tuple[int, int],
    F: QuadPoly,
    p: int,
    height: int = DEFAULT_HEIGHT,
    valdepth: int = DEFAULT_VALDEPTH,
    precision: int = 8,
    workers: int | None = None,
) -> LocusResult:
    """Dispatch on the type ``(N, k)``."""
    if t == (0, 1):
        return locus01(F, p, precision)
    if t == (1, 1):
        return locus11(F, p, precision)
    if t == (2, 1):
        return locus21(F, p, height, valdepth, precision, workers)
    if t == (0, 2):
        return locus02(F, p, precision)
    if t == (1, 2):
        return locus12_scan(F, p, height, valdepth, precision, workers)
    raise ValueError(f"unsupported type {t}; expected one of {sorted(LOCUS_TYPES)}")
