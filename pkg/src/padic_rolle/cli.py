"""Command-line front end.

Every invocation prints one JSON document on stdout (sorted keys, rationals
as ``"num/den"`` strings) and exits with 0 on success, 1 on a domain error
(a mathematical precondition fails) and 2 on a parse or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, getcontext
from fractions import Fraction
from pathlib import Path

from . import __version__
from .covering import analyze_covering, section_radius_check, section_series, surjectivity_witness
from .diffsys import DiffSystem, gauge_transform, generic_radius, iterate_system, matrix_from_json, solution_at_point
from .errors import DomainError
from .expr import max_degree, parse_poly_expr, parse_ratfunc
from .newton import build_polygon, tail_slope_estimate
from .rolle import rolle_verify
from .series import GaussPoint, PSeries, RatFunc
from .valuation import PrimeContext, format_rational, key_inequality_check, parse_rational

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Bad command-line input; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _ctx(args, data: dict | None = None) -> PrimeContext:
    prime = getattr(args, "prime", None)
    if data is not None and "prime" in data:
        if prime is not None and prime != int(data["prime"]):
            raise UsageError(f"--prime {prime} disagrees with prime {data['prime']} in input file")
        prime = int(data["prime"])
    if prime is None:
        raise UsageError("--prime is required")
    return PrimeContext(prime)


def _check_degree(n: int, what: str):
    cap = max_degree()
    if n > cap:
        raise UsageError(f"{what} has degree {n}, above PADIC_ROLLE_MAX_DEGREE={cap}")


def _load_series(path: str, args) -> PSeries:
    data = _load_json(path)
    ctx = _ctx(args, data)
    try:
        s = PSeries.from_json({**data, "prime": ctx.p})
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a series document ({exc})") from None
    _check_degree(s.trunc - 1, "series")
    return s


def _series_input(args) -> PSeries:
    if args.series_file:
        return _load_series(args.series_file, args)
    ctx = _ctx(args)
    f = parse_poly_expr(args.poly, ctx)
    if isinstance(f, RatFunc):
        raise UsageError("--poly must be a polynomial")
    trunc = args.trunc if args.trunc else max(len(f), 2)
    return PSeries(ctx, list(f), trunc)


def _load_system(path: str, args) -> DiffSystem:
    data = _load_json(path)
    _ctx(args, data)
    try:
        return DiffSystem.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: not a system document ({exc})") from None


def _phi(args) -> RatFunc:
    return parse_ratfunc(args.phi, _ctx(args))


# -- subcommands -----------------------------------------------------------


def cmd_polygon(args):
    if args.series_file:
        np = build_polygon(_load_series(args.series_file, args))
    else:
        ctx = _ctx(args)
        f = parse_poly_expr(args.poly, ctx)
        if isinstance(f, RatFunc):
            raise UsageError("--poly must be a polynomial")
        np = build_polygon(f, ctx)
    if args.emit_polygon_tsv:
        Path(args.emit_polygon_tsv).write_text(np.to_tsv())
    return np.to_json()


def cmd_rolle(args):
    return rolle_verify(_series_input(args)).to_json()


def cmd_radius(args):
    f = _series_input(args)
    window = args.window or max(2, -(-f.trunc // 4))
    est = tail_slope_estimate(f, min(window, f.trunc - 1))
    return {
        "certified_max_prefix": format_rational(est.certified_max_prefix),
        "window_estimate": None if est.window_estimate is None else format_rational(est.window_estimate),
        "achieving_index": est.achieving_index,
        "window": min(window, f.trunc - 1),
        "trunc": f.trunc,
    }


def cmd_generic_radius(args):
    sys_ = _load_system(args.system_file, args)
    return generic_radius(sys_, GaussPoint(args.gauss_s), args.order).to_json()


def cmd_gauge(args):
    sys_ = _load_system(args.system_file, args)
    data = _load_json(args.gauge_file)
    if int(data.get("prime", sys_.ctx.p)) != sys_.ctx.p:
        raise UsageError("gauge matrix and system use different primes")
    rows = data.get("P", data.get("G"))
    if rows is None:
        raise UsageError(f"{args.gauge_file}: expected key 'P'")
    res = gauge_transform(sys_, matrix_from_json(sys_.ctx, rows), GaussPoint(args.gauss_s))
    return {"system": res.system.to_json(), "unimodular": res.unimodular}


def cmd_solve_at(args):
    sys_ = _load_system(args.system_file, args)
    its = iterate_system(sys_, args.order)
    Y = solution_at_point(sys_, args.at, args.order, its)
    window = min(max(2, -(-(args.order + 1) // 4)), args.order)
    tails = []
    for row in Y:
        out = []
        for y in row:
            try:
                est = tail_slope_estimate(y, window) if y.trunc > window >= 2 else None
            except DomainError:
                est = None
            out.append(
                None
                if est is None
                else {
                    "certified_max_prefix": format_rational(est.certified_max_prefix),
                    "window_estimate": None if est.window_estimate is None else format_rational(est.window_estimate),
                }
            )
        tails.append(out)
    return {
        "at": format_rational(args.at),
        "order": args.order,
        "solution": [[y.to_json() for y in row] for row in Y],
        "tail_estimates": tails,
    }


def cmd_section(args):
    phi = _phi(args)
    target = RatFunc.variable(phi.ctx) if args.inverse else None
    s = section_series(phi, args.center, args.branch, args.trunc, target=target)
    verdict = None
    report = analyze_covering(phi)
    if args.inverse and report.good_reduction_etale:
        v = section_radius_check(s, report)
        verdict = {
            "within_bound": v.within_bound,
            "bound_log": format_rational(v.bound_log),
            "max_slope": None if v.max_slope is None else format_rational(v.max_slope),
            "achieving_index": v.achieving_index,
            "margin": None if v.margin is None else format_rational(v.margin),
        }
    if args.emit_slopes_tsv:
        Path(args.emit_slopes_tsv).write_text(s.to_tsv())
    return {"section": s.to_json(), "compose_check": s.check(), "radius_check": verdict}


def cmd_covering(args):
    return analyze_covering(_phi(args)).to_json()


def cmd_surjective(args):
    w = surjectivity_witness(_phi(args), args.target)
    return {
        "target": format_rational(args.target),
        "preimage_in_open_unit_disk": w.hit,
        "side": None if w.side is None else {"slope": format_rational(w.side.slope), "length": w.side.length},
        "polygon": w.polygon.to_json(),
    }


def cmd_key_inequality(args):
    ctx = _ctx(args)
    if args.max < 2:
        raise UsageError("--max must be at least 2")
    counterexample = None
    equality = []
    for n in range(2, args.max + 1):
        k = key_inequality_check(n, ctx)
        if not k.holds:
            counterexample = {"n": n, "k": k.k, "m": k.m, "lhs": k.lhs, "rhs": k.rhs}
            break
        if k.equality:
            equality.append(n)
    return {
        "prime": ctx.p,
        "max": args.max,
        "all_hold": counterexample is None,
        "counterexample": counterexample,
        "equality_cases": equality,
    }


# -- plumbing --------------------------------------------------------------


def _approx(payload: dict, p: int, digits: int) -> dict:
    """Decimal radii ``p**-v`` for every rational field whose key mentions ``log``."""
    getcontext().prec = digits + 5
    lnp = Decimal(p).ln()
    out = {}

    def walk(obj, path):
        if isinstance(obj, dict):
            for k, v in obj.items():
                sub = f"{path}.{k}" if path else k
                if "log" in k and isinstance(v, str) and v != "inf":
                    val = parse_rational(v)
                    r = (-(Decimal(val.numerator) / Decimal(val.denominator)) * lnp).exp()
                    out[sub] = format(r, f".{digits}g")
                else:
                    walk(v, sub)
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(v, f"{path}[{i}]")

    walk(payload, "")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="padic-rolle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--approx", type=int, metavar="DIGITS", help="add non-canonical decimal radii")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        return p

    def series_args(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--series-file")
        src.add_argument("--poly", help="polynomial expression in T")
        p.add_argument("--trunc", type=int, help="truncation order for --poly")

    p = add("polygon", cmd_polygon, "Newton polygon of a polynomial or series")
    p.add_argument("--prime", type=int)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly")
    src.add_argument("--series-file")
    p.add_argument("--emit-polygon-tsv", metavar="PATH")

    p = add("rolle", cmd_rolle, "etaleness and injectivity radius of a series")
    p.add_argument("--prime", type=int)
    series_args(p)

    p = add("radius", cmd_radius, "convergence log-radius estimate of a series")
    p.add_argument("--prime", type=int)
    series_args(p)
    p.add_argument("--window", type=int)

    p = add("generic-radius", cmd_generic_radius, "generic radius of a differential system")
    p.add_argument("--prime", type=int)
    p.add_argument("--system-file", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--gauss-s", type=_rational, default=Fraction(0))

    p = add("gauge", cmd_gauge, "gauge-transform a system")
    p.add_argument("--prime", type=int)
    p.add_argument("--system-file", required=True)
    p.add_argument("--gauge-file", required=True)
    p.add_argument("--gauss-s", type=_rational, default=Fraction(0))

    p = add("solve-at", cmd_solve_at, "fundamental solution matrix at a rational point")
    p.add_argument("--prime", type=int)
    p.add_argument("--system-file", required=True)
    p.add_argument("--at", type=_rational, required=True)
    p.add_argument("--order", type=int, required=True)

    p = add("section", cmd_section, "local section of a covering")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--center", type=_rational, required=True)
    p.add_argument("--branch", type=_rational, required=True)
    p.add_argument("--trunc", type=int, required=True)
    p.add_argument("--inverse", action="store_true", help="solve phi(w) = T instead of phi(w) = phi(T)")
    p.add_argument("--emit-slopes-tsv", metavar="PATH")

    p = add("covering", cmd_covering, "critical data and good reduction of phi")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--phi", required=True)

    p = add("surjective", cmd_surjective, "preimage of a target in the open unit disk")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--target", type=_rational, required=True)

    p = add("key-inequality", cmd_key_inequality, "check ord_p(n) <= (n-1)/(p-1) for 2 <= n <= max")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max", type=int, required=True)
    return parser


def run(argv) -> tuple:
    """Parse and dispatch; returns ``(exit_code, json_document_or_None)``."""
    try:
        args = build_parser().parse_args(argv)
        payload = args.func(args)
        if args.approx is not None:
            if args.approx < 1:
                raise UsageError("--approx needs a positive digit count")
            p = getattr(args, "prime", None) or _prime_of(payload)
            payload["approx_noncanonical"] = _approx(payload, p, args.approx) if p else {}
        return EXIT_OK, payload
    except SystemExit as exc:  # --help / --version already printed their text
        return (EXIT_OK if exc.code in (0, None) else EXIT_USAGE), None
    except DomainError as exc:
        return EXIT_DOMAIN, {"error": str(exc), "kind": type(exc).__name__}
    except (ValueError, KeyError, TypeError) as exc:
        return EXIT_USAGE, {"error": str(exc), "kind": type(exc).__name__}


def _prime_of(payload):
    if isinstance(payload, dict):
        if isinstance(payload.get("prime"), int):
            return payload["prime"]
        payload = list(payload.values())
    if isinstance(payload, list):
        for v in payload:
            found = _prime_of(v)
            if found:
                return found
    return None


def main(argv=None) -> int:
    code, payload = run(sys.argv[1:] if argv is None else argv)
    if payload is not None:
        print(dumps(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
