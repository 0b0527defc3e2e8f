"""p-adic convergence of periodic continued fractions and their limits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .cfcore import (
    PCF,
    Mat2,
    _matrix_or_identity,
    cf_matrix,
    continuants,
    convergent_at,
    e_matrix,
    quad_of,
)
from .errors import NotConvergent, PrecisionExhausted
from .exact import (
    INF,
    INFINITY,
    PAdicApprox,
    ProjPoint,
    Value,
    format_rational,
    quad_roots_padic,
    value_to_json,
    vp,
)


@dataclass(frozen=True)
class TraceTooSmall:
    def to_json(self):
        return "trace"


@dataclass(frozen=True)
class ShiftCondition:
    index: int

    def to_json(self):
        return {"shift": self.index}


@dataclass(frozen=True)
class ConvergenceReport:
    convergent: bool
    trace: Fraction
    trace_valuation: int | float
    failed_condition: TraceTooSmall | ShiftCondition | None

    def to_json(self) -> dict:
        tv = self.trace_valuation
        return {
            "convergent": self.convergent,
            "trace": format_rational(self.trace),
            "traceValuation": None if tv == INF else tv,
            "failedCondition": (
                "none" if self.failed_condition is None else self.failed_condition.to_json()
            ),
        }


def cyclic_shifts(period) -> list[tuple[Fraction, ...]]:
    """``(a_j, ..., a_{j+k-1})`` for j = 1..k, indices modulo k."""
    period = tuple(period)
    return [period[j:] + period[:j] for j in range(len(period))]


def is_convergent(pcf: PCF) -> ConvergenceReport:
    """Decide p-adic convergence from the period alone.

    (i) the trace ``A_k + B_{k-1}`` must have negative valuation;
    (ii) for every cyclic shift whose matrix has a zero (2,1) entry, the
    (2,2) entry must have positive valuation.
    """
    p = pcf.p
    T = cf_matrix(pcf.period)
    trace = T.trace()
    tv = vp(trace, p)
    if tv >= 0:
        return ConvergenceReport(False, trace, tv, TraceTooSmall())
    for j, shift in enumerate(cyclic_shifts(pcf.period), start=1):
        Tj = T if j == 1 else cf_matrix(shift)
        if Tj.e21 == 0 and not vp(Tj.e22, p) > 0:
            return ConvergenceReport(False, trace, tv, ShiftCondition(j))
    return ConvergenceReport(True, trace, tv, None)


@dataclass(frozen=True)
class LimitResult:
    kind: str  # "rational" | "infinity" | "padic"
    value: Value

    def to_json(self) -> dict:
        return {"kind": self.kind, "value": value_to_json(self.value)}


def _result(v: Value) -> LimitResult:
    if v is INFINITY:
        return LimitResult("infinity", v)
    if isinstance(v, PAdicApprox):
        return LimitResult("padic", v)
    return LimitResult("rational", v)


def _is_dominant(E: Mat2, root: Value, p: int) -> bool:
    # (beta, 1) is an eigenvector with eigenvalue E21*beta + E22;
    # (1, 0) is one with eigenvalue E11 when E21 == 0
    if root is INFINITY:
        return E.e21 == 0 and vp(E.e11, p) < 0
    if isinstance(root, PAdicApprox):
        try:
            mu = root * E.e21 + E.e22 if E.e21 != 0 else None
        except PrecisionExhausted:
            return False
        return mu is not None and mu.valuation < 0
    return vp(E.e21 * root + E.e22, p) < 0


def _period_limit(pcf: PCF, work: int) -> Value:
    p = pcf.p
    E = cf_matrix(pcf.period)
    Q = quad_of(pcf.purely_periodic())
    assert not Q.is_zero, "a convergent period never has a zero Quad"
    roots = quad_roots_padic(Q, p, work)
    dominant = [r for r in roots if _is_dominant(E, r, p)]
    if len(dominant) != 1:
        raise PrecisionExhausted("could not isolate the dominant fixed point")
    return dominant[0]


def limit(pcf: PCF, precision: int = 8) -> LimitResult:
    """The p-adic limit of a convergent PCF.

    The period's limit is the fixed point of its matrix attached to the
    dominant eigenvalue; the preperiod then acts by its Moebius map.
    Irrational limits are returned to ``precision`` unit digits.
    """
    if not is_convergent(pcf).convergent:
        raise NotConvergent(f"{pcf} does not converge {pcf.p}-adically")
    Mb = _matrix_or_identity(pcf.preperiod)
    last_error = None
    for work in (precision + 2, 4 * precision + 2):
        try:
            v = Mb.act(_period_limit(pcf, work))
            if isinstance(v, PAdicApprox):
                v = v.truncate(precision)
            return _result(v)
        except PrecisionExhausted as exc:
            last_error = exc
    raise PrecisionExhausted(str(last_error))


def limit_is_root(pcf: PCF, result: LimitResult, digits: int) -> bool:
    """Check that ``result`` is a fixed point of the Moebius map of E.

    Rational limits are checked exactly.  A p-adic limit r is replaced by
    its exact truncation R; with Quad scaled to coprime integers,
    ``v(Quad(R)) >= digits - 2|v(r)|`` must hold.
    """
    E = e_matrix(pcf)
    v = result.value
    if v is INFINITY:
        return E.e21 == 0
    if not isinstance(v, PAdicApprox):
        return E.act(v) == v
    Q = quad_of(pcf).primitive()
    R = Fraction(v.p) ** v.valuation * v.unit
    return vp(Q(R), v.p) >= min(digits, v.precision) - 2 * abs(v.valuation)


# -- independent numeric cross-check --------------------------------------------


def chordal_valuation(P: ProjPoint, Q: ProjPoint, p: int) -> int | float:
    """Valuation of the chordal distance between two points of P^1(Q_p).

    ``v(x y' - x' y) - min(v(x), v(y)) - min(v(x'), v(y'))``; larger means
    closer, and the result is ``inf`` for equal points.
    """
    cross = P.x * Q.y - Q.x * P.y
    if cross == 0:
        return INF
    return vp(cross, p) - min(vp(P.x, p), vp(P.y, p)) - min(vp(Q.x, p), vp(Q.y, p))


class OracleVerdict(NamedTuple):
    consistent: bool
    witness: ProjPoint
    min_distance: int | float


def oracle_converges(pcf: PCF, precision: int, window: tuple[int, int]) -> OracleVerdict:
    """Heuristic convergence check from exact convergents.

    The full convergents from index N on are the images of the periodic
    part's convergents under one fixed Moebius map, a homeomorphism of
    P^1(Q_p), so the periodic part is tested instead: a preperiod with very
    negative valuations would otherwise squeeze a divergent tail into a tiny
    disc.  The first half of ``window`` is burn-in; consecutive convergents
    in the second half must agree to ``precision`` digits in the chordal
    metric.  This never consults the convergence criterion and does not
    decide convergence; it is an independent witness against it.
    """
    n0, n1 = window
    if not n1 > n0 >= 1:
        raise ValueError("window must satisfy n1 > n0 >= 1")
    A, B = continuants(list(pcf.period[i % len(pcf.period)] for i in range(n1)))
    start = (n0 + n1) // 2
    pts = [ProjPoint(A[n], B[n]) for n in range(start, n1 + 1)]
    dist = min(chordal_valuation(P, Q, pcf.p) for P, Q in zip(pts, pts[1:]))
    return OracleVerdict(dist >= precision, convergent_at(pcf, n1), dist)
