"""Command-line front end.

Usage:
    cesaro-norm norm --p 4/3                     exact norm of C - I on l^p
    cesaro-norm mp --p 3                         t_p, m_p and r = 1/t_p
    cesaro-norm table --from 1.1 --to 10 --step 0.1
    cesaro-norm extremal --p 4 --m 1000 --N 1000000
    cesaro-norm section --p 4 --N 4096 --starts 8
    cesaro-norm verify all
    cesaro-norm continuous --p 4
    cesaro-norm interp --p0 3 --p 3.5 --p1 4

Exit codes: 0 all checks passed, 1 a numeric check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, InvalidOperation

from . import __version__
from .estimation import NormEstimate, interpolation_spot_check, section_lower_bound
from .exceptions import DomainError, NumericError
from .exponents import Exponent, as_E
from .extremal import (
    ExtremalReport,
    continuous_report,
    discrete_ratio,
    dual_continuous_check,
    quadrature_check_continuous,
)
from .inequalities import SUITES, CheckReport, run_suite
from .minimizer import norm_formula, solve_tp, transpose_norm
from .operators import KINDS, write_vector
from .reporting import FORMATS, render

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

NORM_FIELDS = ("p", "branch", "norm", "t_p", "m_p", "r")
MP_FIELDS = ("p", "t_p", "m_p", "r", "residual", "iterations")
TABLE_FIELDS = ("p", "norm", "t_p", "m_p", "dual", "transpose_norm")
CONTINUOUS_FIELDS = ("p", "r", "integral_x", "integral_z", "ratio", "analytic_limit", "gap",
                     "quadrature_discrepancy", "dual_max_ratio")
INTERP_FIELDS = ("p0", "p", "p1", "theta", "norm_p0", "norm_p", "norm_p1", "interpolated",
                 "holds", "transpose_holds", "section_p")


class UsageError(Exception):
    pass


def _exponent(text):
    try:
        return Exponent.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _decimal(text):
    try:
        return Decimal(text)
    except InvalidOperation as exc:
        raise argparse.ArgumentTypeError(f"not a decimal number: {text!r}") from exc


def _hex(text):
    try:
        return int(text, 16)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a hexadecimal seed: {text!r}") from exc


def _tolerance(text):
    try:
        tol = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not 1e-15 <= tol <= 1e-2:
        raise argparse.ArgumentTypeError("tolerance must lie in [1e-15, 1e-2]")
    return tol


def _positive_int(text):
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _map(fn, items, threads):
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    workers = threads if threads > 0 else (os.cpu_count() or 1)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --- commands -------------------------------------------------------------------


def norm_record(e):
    rec = {"p": e.p, "t_p": None, "m_p": None, "r": None}
    if e.is_infinite:
        rec.update(branch="infinity", norm=2.0)
    elif e.p <= 2:
        rec.update(branch="reciprocal", norm=norm_formula(e.exact if e.exact is not None else e.p))
    else:
        res = solve_tp(e.p)
        rec.update(branch="minimum", norm=res.norm, t_p=res.t_p, m_p=res.m_p, r=res.r)
    return rec


def cmd_norm(args):
    return [norm_record(args.p)], NORM_FIELDS, True


def _p_range(args):
    if args.p is not None:
        return [args.p]
    start, stop, step = args.start, args.stop, args.step
    if start is None or stop is None:
        raise UsageError("give --p or both --from and --to")
    if step <= 0 or start >= stop:
        raise UsageError("need --from < --to and --step > 0")
    out = []
    k = 0
    while start + k * step <= stop:
        out.append(Exponent.parse(str(start + k * step)))
        k += 1
    return out


def cmd_mp(args):
    ps = _p_range(args)
    for e in ps:
        if e.is_infinite or e.p <= 2:
            raise DomainError(f"m_p needs 2 < p < inf, got {e}")
    rows = _map(lambda e: solve_tp(e.p).to_dict(), ps, args.threads)
    return rows, MP_FIELDS, True


def table_record(e):
    rec = norm_record(e)
    q = e.dual
    return {
        "p": e.p, "norm": rec["norm"], "t_p": rec["t_p"], "m_p": rec["m_p"],
        "dual": q, "transpose_norm": transpose_norm(e.exact if e.exact is not None else e.p),
    }


def cmd_table(args):
    ps = _p_range(args)
    if any(e.is_infinite for e in ps):
        raise UsageError("table rows need finite p")
    return _map(table_record, ps, args.threads), TABLE_FIELDS, True


def cmd_extremal(args):
    rep = discrete_ratio(args.p.p, args.m, args.N)
    ok = rep.gap >= -1e-9 * rep.analytic_limit
    return [rep.to_dict()], ExtremalReport.FIELDS, ok


def cmd_section(args):
    if args.p.is_infinite:
        raise DomainError("section estimates need finite p")
    est = section_lower_bound(args.kind, args.p.p, args.N, args.starts, args.max_iter, args.tol,
                              args.seed)
    if args.trace:
        write_vector(args.trace, est.ratio_trace)
    ok = est.lower_bound <= est.analytic * (1 + 1e-9)
    return [est.to_dict()], NormEstimate.FIELDS, ok


def cmd_verify(args):
    p_values = [str(e) for e in args.p] if args.p else None
    if p_values and args.suite in ("lemma1", "lemma2", "mvt", "all"):
        for e in args.p:
            as_E(e)
    suites = SUITES if args.suite == "all" else (args.suite,)
    chunks = _map(lambda s: run_suite(s, p_values, args.points), list(suites), args.threads)
    reports = [r for chunk in chunks for r in chunk]
    failed = sum(not r.passed for r in reports)
    summary = {"checks": len(reports), "passed": len(reports) - failed, "failed": failed}
    return [r.to_dict() for r in reports], CheckReport.FIELDS, failed == 0, summary


def cmd_continuous(args):
    rep = continuous_report(args.p.p)
    quad = quadrature_check_continuous(args.p.p, args.panels, args.T)
    dual = dual_continuous_check(args.p.p, seed=args.seed)
    rec = {
        "p": rep.p, "r": rep.r, "integral_x": rep.sum_x_p, "integral_z": rep.sum_z_p,
        "ratio": rep.ratio_p, "analytic_limit": rep.analytic_limit, "gap": rep.gap,
        "quadrature_discrepancy": quad, "dual_max_ratio": dual,
    }
    ok = abs(rep.ratio_p / rep.analytic_limit - 1) <= 1e-11 and quad <= 1e-6 and dual <= 1 + 1e-9
    return [rec], CONTINUOUS_FIELDS, ok


def cmd_interp(args):
    rep = interpolation_spot_check(args.p0.p, args.p.p, args.p1.p, args.N)
    return [rep.to_dict()], INTERP_FIELDS, rep.holds and rep.transpose_holds


COMMANDS = {
    "norm": cmd_norm, "mp": cmd_mp, "table": cmd_table, "extremal": cmd_extremal,
    "section": cmd_section, "verify": cmd_verify, "continuous": cmd_continuous,
    "interp": cmd_interp,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None,
                        help="output format (default: text for norm/mp, csv otherwise)")
    common.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    common.add_argument("--seed", type=_hex, default=0x5EED, help="hex seed for randomized steps")
    common.add_argument("--threads", type=int, default=1, help="worker threads (0 = auto)")

    parser = argparse.ArgumentParser(prog="cesaro-norm", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", parents=[common], help="operator norm of C - I on l^p")
    sp.add_argument("--p", type=_exponent, required=True, help='exponent: "4/3", "3", "inf"')

    for name, helptext in (("mp", "t_p and m_p for p > 2"), ("table", "table of norms over a p range")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--p", type=_exponent, default=None)
        sp.add_argument("--from", dest="start", type=_decimal,
                        default=Decimal("1.1") if name == "table" else None)
        sp.add_argument("--to", dest="stop", type=_decimal,
                        default=Decimal("10") if name == "table" else None)
        sp.add_argument("--step", type=_decimal, default=Decimal("0.1"))

    sp = sub.add_parser("extremal", parents=[common], help="discrete extremal ratio certificate")
    sp.add_argument("--p", type=_exponent, required=True)
    sp.add_argument("--m", type=_positive_int, required=True)
    sp.add_argument("--N", type=_positive_int, default=None, help="truncation (default 1000*m)")

    sp = sub.add_parser("section", parents=[common], help="finite-section lower bound")
    sp.add_argument("--p", type=_exponent, required=True)
    sp.add_argument("--N", type=_positive_int, required=True)
    sp.add_argument("--kind", choices=KINDS, default="cesaro")
    sp.add_argument("--starts", type=_positive_int, default=8)
    sp.add_argument("--max-iter", type=_positive_int, default=10_000)
    sp.add_argument("--tol", type=_tolerance, default=1e-12)
    sp.add_argument("--trace", default=None, help="dump the best ratio trace to PATH")

    sp = sub.add_parser("verify", parents=[common], help="grid checks of the inequalities")
    sp.add_argument("suite", choices=SUITES + ("all",))
    sp.add_argument("--p", type=_exponent, action="append", default=None,
                    help="exponent in E as a/b (repeatable)")
    sp.add_argument("--points", type=_positive_int, default=100_000)

    sp = sub.add_parser("continuous", parents=[common], help="continuous extremal function checks")
    sp.add_argument("--p", type=_exponent, required=True)
    sp.add_argument("--panels", type=_positive_int, default=10_000)
    sp.add_argument("--T", type=float, default=1e3)

    sp = sub.add_parser("interp", parents=[common], help="interpolation spot check")
    sp.add_argument("--p0", type=_exponent, required=True)
    sp.add_argument("--p", type=_exponent, required=True)
    sp.add_argument("--p1", type=_exponent, required=True)
    sp.add_argument("--N", type=_positive_int, default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.format or ("text" if args.command in ("norm", "mp") else "csv")
    try:
        result = COMMANDS[args.command](args)
    except (DomainError, UsageError) as exc:
        print(f"cesaro-norm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"cesaro-norm {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAILED
    records, fields, ok = result[:3]
    summary = result[3] if len(result) > 3 else None
    text = render(records, fields, fmt, summary)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if summary is not None:
        print(f"{summary['passed']}/{summary['checks']} checks passed", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
