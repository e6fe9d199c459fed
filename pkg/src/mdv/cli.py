"""Command-line front end: ``mdv verify``, ``mdv compute``, ``mdv list-suites``.

Exit codes: 0 when every check passes (noted discrepancies allowed),
1 when any check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from . import diffops as do
from . import sl2
from . import weyl as wl
from .expr import ParseError, parse_expression
from .report import emit
from .suites import ALL, SUITES, InvalidParams, SuiteParams, UnknownSuite, run_suite

SUBJECTS = (
    "v-table",
    "filtration-dims",
    "distinguished-matrices",
    "pbw-normal-form",
    "weyl-normal-form",
    "symbol",
)


class UsageError(Exception):
    pass


class UnknownSubject(UsageError):
    pass


def _need_n(args) -> int:
    if args.n is None:
        raise UsageError(f"--n is required for subject {args.subject}")
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    return args.n


def _weyl_env(side: str):
    if side == wl.LINE:
        return {"x": wl.WeylOp.x(side), "D": wl.WeylOp.d(side)}
    return {"xh": wl.WeylOp.x(side), "Dh": wl.WeylOp.d(side)}


def compute(args) -> str:
    subject = args.subject
    if subject == "v-table":
        return " ".join(map(str, do.v_table(_need_n(args))))
    if subject == "filtration-dims":
        return " ".join(map(str, do.filtration_dims(_need_n(args))))
    if subject == "distinguished-matrices":
        mats = [d.to_json() for d in do.distinguished(_need_n(args))]
        return "\n".join(json.dumps(m) for m in mats)
    if subject == "pbw-normal-form":
        text = args.expr or "h^2 + 2*(e*f + f*e)"
        u = parse_expression(text, {"e": sl2.E, "h": sl2.H, "f": sl2.F}, sl2.PBWOp.one())
        return str(u)
    if subject == "weyl-normal-form":
        text = args.expr or ("D*x" if args.side == wl.LINE else "Dh*xh")
        return str(parse_expression(text, _weyl_env(args.side), wl.WeylOp.one(args.side)))
    if subject == "symbol":
        n = _need_n(args)
        if args.expr:
            ops = [(args.expr, _descend(args.expr, n))]
        else:
            ops = [(f"delta{i}", d) for i, d in enumerate(do.distinguished(n))]
        lines = []
        for label, op in ops:
            if op.is_zero():
                lines.append(f"{label}: zero operator")
            else:
                s = do.symbol_of(op)
                lines.append(f"{label}: order {s.order} symbol {s.value}")
        return "\n".join(lines)
    raise UnknownSubject(f"unknown subject {subject!r}; choose from {', '.join(SUBJECTS)}")


def _descend(text: str, n: int) -> do.Endo:
    u = parse_expression(text, _weyl_env(wl.LINE), wl.WeylOp.one(wl.LINE))
    try:
        return wl.descend_to_On(u, n)
    except wl.NotDescendable as exc:
        raise UsageError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mdv", description="Exact verification of symbol and sl2 identities.")
    parser.add_argument("--version", action="version", version=f"mdv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--n-min", type=int, default=0)
    v.add_argument("--n-max", type=int, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trunc", type=int, default=12)
    v.add_argument("--degree-bound", type=int, default=8)
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--out", default=None, help="output path (default stdout)")
    v.add_argument("--timing", action="store_true", help="record wall-clock time in the report")

    c = sub.add_parser("compute", help="print one computed object")
    c.add_argument("--subject", required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--expr", default=None, help="expression for the normal-form and symbol subjects")
    c.add_argument("--side", choices=(wl.LINE, wl.DUAL), default=wl.LINE)

    sub.add_parser("list-suites", help="print the available suite names")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    if args.command == "list-suites":
        print("\n".join(SUITES + (ALL,)))
        return 0

    if args.command == "compute":
        try:
            print(compute(args))
        except (UsageError, ParseError) as exc:
            print(f"mdv: {exc}", file=sys.stderr)
            return 2
        return 0

    try:
        params = SuiteParams(args.suite, args.n_min, args.n_max, args.seed, args.trunc, args.degree_bound)
    except (UnknownSuite, InvalidParams) as exc:
        print(f"mdv: {exc}", file=sys.stderr)
        return 2
    report = run_suite(params, timing=args.timing)
    try:
        emit(report, args.format, args.out)
    except OSError as exc:
        print(f"mdv: cannot write report: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
