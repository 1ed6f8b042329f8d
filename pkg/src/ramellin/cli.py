"""Command-line interface: ``ramellin {verify,eval,kernel,table,primes}``.

Exit codes: 0 when no asserted check fails, 1 on any FAIL, 2 on a
configuration error (usage goes to stderr).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import re
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from . import identities as ids
from . import primes as nt
from .mellin import QuadratureConfig
from .series import Binomial, Parity, Power, SeriesKernel, Strategy, Zeta, eval_kernel, kernel_table, table_csv

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def decimal(text: str) -> float:
    """Locale-independent decimal parser; rejects '1,5', 'inf', 'nan', etc."""
    if not _DECIMAL.match(text.strip()):
        raise argparse.ArgumentTypeError(f"not a plain decimal number: {text!r}")
    return float(text)


def integer(text: str) -> int:
    if not re.match(r"^[+-]?\d+$", text.strip()):
        # allow 1e6 style only when it denotes an integer
        value = decimal(text)
        if value != int(value):
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        return int(value)
    return int(text)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse's own behaviour, made explicit: usage + exit 2
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


PARAM_FLAGS = ("s", "a", "v", "c", "p", "k", "t", "n")

EVAL_DEFAULTS = {
    "RMT_1_2": {"phi": "power", "c": 1.0, "s": 0.5},
    "BINOMIAL_1_7": {"n": 1.5, "a": 0.5, "v": 4.0},
    "SIN_2_3": {"a": 1.0, "s": 0.5},
    "COS_2_4": {"a": 1.0, "s": 0.5},
    "SINE_MASTER_2_1": {"phi": "power", "c": 1.0, "s": 0.5},
    "COSINE_MASTER_2_2": {"phi": "power", "c": 1.0, "s": 0.5},
    "ZETA_SINE_2_5": {"s": 0.25},
    "ZETA_COSINE_2_6": {"s": 0.25},
    "COR22_I_2_8": {},
    "COR22_II_2_9": {},
    "HURWITZ_2_10": {"s": 0.5, "c": 3.0, "a": 2.0},
    "HURWITZ_TAYLOR_2_11": {"c": 2.0, "a": 2.0, "t": 0.5},
    "PK_SINE_2_16": {"phi": "power", "c": 1.0, "s": 0.8, "p": 3.0, "k": 2.0},
    "K_SINE_2_17": {"phi": "power", "c": 1.0, "s": 0.8, "k": 2.0},
    "PK_COS_2_19": {"phi": "power", "c": 1.0, "s": 0.8, "p": 3.0, "k": 2.0},
    "K_COS_2_20": {"phi": "power", "c": 1.0, "s": 0.8, "k": 2.0},
    "PRIME_LOGSUM_MOBIUS": {"s": 3.0, "K": 30, "up_to": 10**6},
    "PRIME_KERNEL_SUM": {"up_to": 10**5},
    "A_N_FORMAL": {"n": 1, "K": 10},
    "PRIME_POWER_DIVERGENCE": {"n": 1, "up_to": 10**4},
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header field")
    common.add_argument("--quad-abs-tol", type=decimal)
    common.add_argument("--quad-rel-tol", type=decimal)
    common.add_argument("--split-point", type=decimal)

    params = argparse.ArgumentParser(add_help=False)
    for name in PARAM_FLAGS:
        params.add_argument(f"--{name}", type=decimal)
    params.add_argument("--phi", choices=("power", "binomial", "zeta"))
    params.add_argument("--K", type=integer, help="Moebius truncation")
    params.add_argument("--up-to", type=integer, dest="up_to")

    parser = _Parser(prog="ramellin", description="Mellin-transform identity checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=ids.SUITES, default="all")
    v.add_argument("--s", type=decimal, help="override s in every case that has one")
    v.add_argument("--tol", type=decimal, help="override the pass tolerance")
    v.add_argument("--strict-report", action="store_true", help="list REPORT_ONLY cases on stderr")

    e = sub.add_parser("eval", parents=[common, params], help="verify a single identity")
    e.add_argument("--identity", required=True)
    e.add_argument("--tol", type=decimal)
    e.add_argument("--strict-report", action="store_true")

    def kernel_flags(p):
        p.add_argument("--phi", choices=("power", "binomial", "zeta"), default="power")
        p.add_argument("--c", type=decimal, default=1.0)
        p.add_argument("--a", type=decimal, default=1.0)
        p.add_argument("--v", type=decimal, default=1.0)
        p.add_argument("--parity", choices=[x.value for x in Parity], default="FULL")
        p.add_argument("--p", type=decimal, default=1.0)
        p.add_argument("--k", type=decimal, default=1.0)
        p.add_argument("--strategy", choices=[x.value for x in Strategy], default="AUTO")

    kp = sub.add_parser("kernel", parents=[common], help="evaluate a kernel at one point")
    kernel_flags(kp)
    kp.add_argument("--x", type=decimal, required=True)

    tp = sub.add_parser("table", parents=[common], help="CSV table x,value,abs_err,flags")
    kernel_flags(tp)
    tp.add_argument("--x-min", type=decimal, default=0.0)
    tp.add_argument("--x-max", type=decimal, required=True)
    tp.add_argument("--step", type=decimal)
    tp.add_argument("--num", type=integer)

    pp = sub.add_parser("primes", parents=[common], help="prime-sum diagnostics")
    pp.add_argument("--op", required=True,
                    choices=("count", "direct", "mobius", "f", "cn", "an", "lhs", "divergence"))
    pp.add_argument("--s", type=decimal)
    pp.add_argument("--n", type=integer)
    pp.add_argument("--K", type=integer, default=30)
    pp.add_argument("--x", type=decimal)
    pp.add_argument("--up-to", type=integer, dest="up_to")
    pp.add_argument("--primes-limit", type=integer, default=10**6)
    return parser


def _quad_cfg(args) -> QuadratureConfig:
    kw = {}
    if args.quad_abs_tol is not None:
        kw["abs_tol"] = args.quad_abs_tol
    if args.quad_rel_tol is not None:
        kw["rel_tol"] = args.quad_rel_tol
    if args.split_point is not None:
        kw["split_point"] = args.split_point
    try:
        return QuadratureConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _timestamp(args) -> Optional[str]:
    if args.no_timestamp:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_output(suite: str, reports, args) -> int:
    if args.format == "csv":
        text = ids.reports_to_csv(reports)
    else:
        text = ids.reports_to_json(suite, reports, _timestamp(args))
    _emit(text, args)
    if getattr(args, "strict_report", False):
        flagged = [r for r in reports if r.status in (ids.Status.REPORT_ONLY, ids.Status.DIVERGENT)]
        if flagged:
            print("not asserted (REPORT_ONLY / DIVERGENT):", file=sys.stderr)
            for r in flagged:
                print(f"  {r.status.value:<11} {r.id} {json.dumps(r.case.params, sort_keys=True)}", file=sys.stderr)
    return 1 if any(r.status is ids.Status.FAIL for r in reports) else 0


def _validated(cases):
    for c in cases:
        try:
            ids.validate_case(c)
        except ids.CaseConfigError as exc:
            raise ConfigError(str(exc)) from exc
    return cases


def cmd_verify(args) -> int:
    cases = ids.suite_cases(args.suite, _quad_cfg(args))
    if args.s is not None:
        cases = ids.override_s(cases, args.s)
    if args.tol is not None:
        cases = [replace(c, tol=args.tol) for c in cases]
    reports = ids.run_cases(_validated(cases))
    return _report_output(args.suite, reports, args)


def cmd_eval(args) -> int:
    if args.identity not in ids.ALL_IDS:
        raise ConfigError(f"unknown identity {args.identity!r}")
    params = dict(EVAL_DEFAULTS[args.identity])
    for name in PARAM_FLAGS:
        value = getattr(args, name)
        if value is not None:
            params[name] = int(value) if name == "n" and args.identity in ids.PRIME_IDS else value
    if args.phi is not None:
        params["phi"] = args.phi
    if args.K is not None:
        params["K"] = args.K
    if args.up_to is not None:
        params["up_to"] = args.up_to
    case = ids.IdentityCase(args.identity, params, _quad_cfg(args), tol=args.tol)
    reports = ids.run_cases(_validated([case]))
    return _report_output("eval", reports, args)


def _kernel_from(args) -> SeriesKernel:
    if args.phi == "power":
        phi = Power(args.c)
    elif args.phi == "binomial":
        phi = Binomial(args.a, args.v)
    else:
        phi = Zeta()
    return SeriesKernel(phi, Parity(args.parity), args.p, args.k, Strategy(args.strategy))


def cmd_kernel(args) -> int:
    try:
        kernel = _kernel_from(args)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not (math.isfinite(args.x) and args.x >= 0):
        raise ConfigError("--x must be a finite number >= 0")
    r = eval_kernel(kernel, args.x)
    if args.format == "csv":
        _emit(table_csv([(args.x, r)]), args)
    else:
        doc = {"kernel": kernel.describe(), "x": args.x,
               "value": ids.json_number(r.value), "abs_err": ids.json_number(r.abs_err_estimate),
               "flags": sorted(f.value for f in r.flags)}
        _emit(json.dumps(doc, indent=2) + "\n", args)
    return 0


def grid(x_min: float, x_max: float, step: Optional[float], num: Optional[int]) -> np.ndarray:
    if not (x_min >= 0 and x_max >= x_min):
        raise ConfigError("need 0 <= x-min <= x-max")
    if num is not None:
        if num < 1:
            raise ConfigError("--num must be >= 1")
        return np.linspace(x_min, x_max, num)
    if step is None or not step > 0:
        raise ConfigError("give --step > 0 or --num")
    count = int(math.floor((x_max - x_min) / step + 1e-9)) + 1
    return x_min + step * np.arange(count)


def cmd_table(args) -> int:
    """Kernel plot data on a grid, always CSV."""
    try:
        kernel = _kernel_from(args)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    xs = grid(args.x_min, args.x_max, args.step, args.num)
    _emit(table_csv(kernel_table(kernel, xs)), args)
    return 0


def _prime_case(op: str, params: dict, value: float, status: ids.Status, notes: str, extra: dict):
    case = ids.IdentityCase(f"primes:{op}", params)
    return ids.IdentityReport(case, value, math.nan, math.nan, math.nan, status, notes, extra)


def cmd_primes(args) -> int:
    op = args.op
    if op in ("count", "direct", "lhs", "divergence"):
        try:
            tables = nt.build_tables(args.primes_limit)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    up_to = args.up_to if args.up_to is not None else args.primes_limit
    if op in ("direct", "lhs", "divergence") and up_to > args.primes_limit:
        raise ConfigError("--up-to exceeds --primes-limit")

    def need(name):
        value = getattr(args, name)
        if value is None:
            raise ConfigError(f"--{name} is required for --op {op}")
        return value

    R = ids.Status.REPORT_ONLY
    if op == "count":
        x = need("x")
        try:
            value = nt.prime_count(tables, x)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        rep = _prime_case(op, {"x": x}, value, R, "", {})
    elif op == "direct":
        s = need("s")
        r = nt.prime_log_sum_direct(tables, s, up_to)
        rep = _prime_case(op, {"s": s, "up_to": up_to}, r.value,
                          ids.Status.DIVERGENT if r.divergent else R, r.notes,
                          {"primes_used": r.primes_used, "tail_estimate": r.tail_estimate})
    elif op == "mobius":
        s = need("s")
        r = nt.prime_log_sum_mobius(s, args.K)
        if not math.isfinite(r.value):
            raise ConfigError(f"prime_log_sum_mobius needs s > 1 ({r.notes})")
        rep = _prime_case(op, {"s": s, "K": args.K}, r.value, R, "",
                          {"mobius_terms_used": r.mobius_terms_used, "tail_estimate": r.tail_estimate})
    elif op == "f":
        s = need("s")
        r = nt.f_analytic(s, args.K)
        if not r.ok:
            raise ConfigError("f requires s > 1")
        rep = _prime_case(op, {"s": s, "K": args.K}, r.value, R, "truncated Moebius series",
                          {"abs_err_estimate": r.abs_err_estimate})
    elif op == "cn":
        n = need("n")
        rep = _prime_case(op, {"n": n}, nt.c_n(n).value, R, "", {})
    elif op == "an":
        n = need("n")
        r = nt.a_n_formal(n, args.K)
        rep = _prime_case(op, {"n": n, "K": args.K}, r.value,
                          R if math.isfinite(r.value) else ids.Status.DIVERGENT, r.notes, {"formal": True})
    elif op == "lhs":
        r = nt.theorem22_lhs(tables, up_to)
        rep = _prime_case(op, {"up_to": up_to}, r.value, ids.Status.DIVERGENT, r.notes,
                          {"formal": True, "checkpoints": [list(c) for c in r.checkpoints]})
    else:
        n = need("n")
        r = nt.divergence_diagnostic(tables, n, up_to)
        rep = _prime_case(op, {"n": n, "up_to": up_to}, r.value, ids.Status.DIVERGENT, r.notes,
                          {"formal": True, "growth_exponent": r.growth_exponent,
                           "checkpoints": [list(c) for c in r.checkpoints]})
    return _report_output("primes", [rep], args)


COMMANDS = {"verify": cmd_verify, "eval": cmd_eval, "kernel": cmd_kernel,
            "table": cmd_table, "primes": cmd_primes}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, ids.CaseConfigError) as exc:
        parser.print_usage(sys.stderr)
        print(f"ramellin: configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
