"""``pcf`` command-line front end.

Exit codes: 0 success, 1 invalid input, 2 empty by theory (F = 0, roots
outside Q_p, no limit), 3 internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import families13, loci, pell, radical03
from ._parallel import default_workers
from .cfcore import PCF, QuadPoly, membership, quad_of, table1_quad
from .convergence import is_convergent, limit, oracle_converges
from .errors import (
    NoNegativePell,
    NotConvergent,
    NotInQp,
    PcfError,
    PrecisionExhausted,
    ZeroLeadingCoeff,
    ZeroPolynomial,
)
from .exact import check_prime, format_rational, is_qp_square, parse_rational

EXIT_OK, EXIT_INPUT, EXIT_EMPTY, EXIT_INTERNAL = 0, 1, 2, 3
STRUCTURALLY_EMPTY = (ZeroPolynomial, NotInQp, NotConvergent, NoNegativePell, ZeroLeadingCoeff)


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- argument parsing helpers ---------------------------------------------------


def _rational(flag: str, text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{flag}: invalid rational {text!r}") from None


def _rational_list(flag: str, text: str | None) -> list[Fraction]:
    if text is None or not text.strip():
        return []
    return [_rational(flag, part) for part in text.split(",")]


def _prime(flag: str, value: int) -> int:
    try:
        return check_prime(value)
    except PcfError:
        raise InputError(f"{flag}: {value} is not an odd prime") from None


def _poly(text: str) -> QuadPoly:
    coeffs = _rational_list("--poly", text)
    if len(coeffs) != 3:
        raise InputError("--poly: expected three coefficients A,B,C")
    return QuadPoly(*coeffs)


def _pcf(args) -> PCF:
    p = _prime("--p", args.p)
    period = _rational_list("--period", args.period)
    if not period:
        raise InputError("--period: the period must be nonempty")
    try:
        return PCF(p, _rational_list("--preperiod", args.preperiod), period)
    except PcfError as exc:
        raise InputError(f"--period/--preperiod: {exc}") from None


def _workers(args) -> int:
    return args.threads if args.threads is not None else default_workers()


# -- subcommands ------------------------------------------------------------------


def cmd_check(args) -> tuple[dict, int]:
    return is_convergent(_pcf(args)).to_json(), EXIT_OK


def cmd_limit(args) -> tuple[dict, int]:
    pcf = _pcf(args)
    return {"pcf": pcf.to_json(), "limit": limit(pcf, args.prec).to_json()}, EXIT_OK


def cmd_quad(args) -> tuple[dict, int]:
    pcf = _pcf(args)
    q = quad_of(pcf)
    closed = table1_quad(pcf)
    return {
        "quad": q.to_json(),
        "table1": None if closed is None else closed.to_json(),
        "table1Agrees": None if closed is None else closed == q,
    }, EXIT_OK


def cmd_member(args) -> tuple[dict, int]:
    m = membership(_pcf(args), _poly(args.poly))
    return {"member": m.member, "zeroQuad": m.zero_quad}, EXIT_OK


def _type(text: str) -> tuple[int, int]:
    try:
        n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--type: expected N,k, got {text!r}") from None
    return n, k


def cmd_locus(args) -> tuple[dict, int]:
    t = _type(args.type)
    F = _poly(args.poly)
    p = _prime("--p", args.p)
    if args.b1 is not None:
        if t != (1, 2):
            raise InputError("--b1 applies to type 1,2 only")
        result = loci.locus12_at(F, p, _rational("--b1", args.b1), args.prec)
    elif t == (0, 3):
        result = radical03.degenerate03(F, p, args.index_bound, args.prec)
    elif t in loci.LOCUS_TYPES:
        result = loci.locus(t, F, p, args.height, args.valdepth, args.prec, _workers(args))
    else:
        raise InputError(f"--type: unsupported type {args.type}")
    disc = F.discriminant
    if disc != 0 and not is_qp_square(disc, p):
        # roots outside Q_p: no convergent point of any type
        return result.to_json(), EXIT_EMPTY, f"discriminant {format_rational(disc)} is not a square in Q_{p}"
    return result.to_json(), EXIT_OK


def _solutions(rows) -> dict:
    return {"complete": False, "solutions": [r.to_json() for r in rows]}


def cmd_search03(args) -> tuple[dict, int]:
    p = None if args.p is None else _prime("--p", args.p)
    rows = radical03.search03(
        args.d, p, args.max_index, args.max_class_scan, args.prec, args.p_limit, _workers(args)
    )
    return _solutions(rows), EXIT_OK


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"missing required flag(s): {', '.join(missing)}")


def _family13(args) -> dict:
    if args.prime is not None:
        _need(args, "k")
        return families13.family13_prime(_prime("--prime", args.prime), args.k, args.prec).to_json()
    _need(args, "a", "a1", "p")
    a, a1 = _rational("--a", args.a), _rational("--a1", args.a1)
    p = _prime("--p", args.p)
    if args.zero:
        return families13.family13_zero(a, a1, p, args.prec).to_json()
    return families13.family13_general(a, a1, p, args.prec).to_json()


def cmd_family(args) -> tuple[dict, int]:
    if args.kind == "a2plus1":
        _need(args, "a", "max_n")
        a = _rational("--a", args.a)
        if a.denominator != 1:
            raise InputError("--a: must be a positive integer")
        return _solutions(radical03.family_a2plus1(int(a), args.max_n, args.prec)), EXIT_OK
    if args.kind == "negpell":
        _need(args, "d", "max_n")
        return _solutions(radical03.family_neg_pell(args.d, args.max_n, args.prec)), EXIT_OK
    return _family13(args), EXIT_OK


def cmd_family13(args) -> tuple[dict, int]:
    return _family13(args), EXIT_OK


def cmd_pell(args) -> tuple[dict, int]:
    if args.n is not None:
        return pell.pell_classes(args.d, args.n).to_json(), EXIT_OK
    a0, period = pell.sqrt_cf(args.d)
    unit = pell.fundamental_unit(args.d)
    neg = pell.neg_pell(args.d)
    return {
        "d": str(args.d),
        "sqrtCf": {"a0": str(a0), "period": [str(q) for q in period]},
        "unit": [str(unit.u_star), str(unit.v_star)],
        "negPell": None if neg is None else [str(neg[0]), str(neg[1])],
    }, EXIT_OK


def cmd_oracle(args) -> tuple[dict, int]:
    pcf = _pcf(args)
    try:
        n0, n1 = (int(x) for x in args.window.split(","))
    except ValueError:
        raise InputError(f"--window: expected n0,n1, got {args.window!r}") from None
    verdict = oracle_converges(pcf, args.prec, (n0, n1))
    w = verdict.witness
    return {
        "consistent": verdict.consistent,
        "minDistance": None if verdict.min_distance == float("inf") else verdict.min_distance,
        "witness": [format_rational(w.x), format_rational(w.y)],
    }, EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcf", description="p-adic periodic continued fractions")
    parser.add_argument("--threads", type=int, default=None, help="worker processes (default: $PCF_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=fn)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--prec", type=int, default=8, help="p-adic digits for limits")
        return sp

    def pcf_flags(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--period", required=True, help='comma-separated, e.g. "1,-1/3,3"')
        sp.add_argument("--preperiod", default=None)

    pcf_flags(add("check", cmd_check, "decide p-adic convergence"))
    pcf_flags(add("limit", cmd_limit, "p-adic limit of a convergent PCF"))
    pcf_flags(add("quad", cmd_quad, "the quadratic polynomial of a PCF"))
    sp = add("member", cmd_member, "membership in V(F)")
    pcf_flags(sp)
    sp.add_argument("--poly", required=True, help="A,B,C")

    sp = add("locus", cmd_locus, "points and convergent locus of V(F)_{N,k}")
    sp.add_argument("--type", required=True, help="N,k")
    sp.add_argument("--poly", required=True, help="A,B,C")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--height", type=int, default=loci.DEFAULT_HEIGHT)
    sp.add_argument("--valdepth", type=int, default=loci.DEFAULT_VALDEPTH)
    sp.add_argument("--b1", default=None, help="single-b1 query for type 1,2")
    sp.add_argument("--index-bound", type=int, default=3, help="family sampling for type 0,3")

    sp = add("search03", cmd_search03, "type (0,3) expansions of sqrt(d)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--max-index", type=int, default=radical03.DEFAULT_MAX_INDEX)
    sp.add_argument("--max-class-scan", type=int, default=None)
    sp.add_argument("--p-limit", type=int, default=None)

    def family13_flags(sp):
        sp.add_argument("--a", default=None)
        sp.add_argument("--a1", default=None)
        sp.add_argument("--p", type=int, default=None)
        sp.add_argument("--zero", action="store_true", help="use the a2 = 0 family")
        sp.add_argument("--prime", type=int, default=None)
        sp.add_argument("--k", type=int, default=None)

    sp = add("family", cmd_family, "explicit families of expansions")
    sp.add_argument("--kind", required=True, choices=["a2plus1", "negpell", "family13"])
    sp.add_argument("--d", type=int, default=None)
    sp.add_argument("--max-n", type=int, default=None)
    family13_flags(sp)

    family13_flags(add("family13", cmd_family13, "type (1,3) families for sqrt(a^2+1)"))

    sp = add("pell", cmd_pell, "Pell equation data")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, default=None)

    sp = add("oracle", cmd_oracle, "numeric convergence cross-check")
    pcf_flags(sp)
    sp.add_argument("--window", default="10,60")
    return parser


def render(obj, as_json: bool) -> str:
    if as_json:
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "\n".join(f"{k}: {json.dumps(v)}" for k, v in obj.items())
    return json.dumps(obj)


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
        obj, code, *note = args.func(args)
    except InputError as exc:
        print(f"pcf: error: {exc}", file=err)
        return EXIT_INPUT
    except STRUCTURALLY_EMPTY as exc:
        print(f"pcf: empty by theory: {exc}", file=err)
        return EXIT_EMPTY
    except (AssertionError, PrecisionExhausted) as exc:
        print(f"pcf: internal error: {exc}", file=err)
        return EXIT_INTERNAL
    except (PcfError, ValueError) as exc:
        print(f"pcf: error: {exc}", file=err)
        return EXIT_INPUT
    for line in note:
        print(f"pcf: empty by theory: {line}", file=err)
    print(render(obj, args.json), file=out)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
