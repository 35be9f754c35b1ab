"""Command-line interface.

Exit codes: 0 when every claim matches its expected status, 1 when some
claim does not, 2 for bad flags, unreadable inputs or out-of-range sizes.
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .algebra import check_axioms
from .construction import CapError, InterpretationConfig, build_A, build_B, build_C, check_params
from .exactmath import PRIMES
from .identities import METHODS, ParseError, parse_poly
from .pipeline import CSV_FIELDS, audit, identity_claim, ordinal, verify_theorem1
from .report import Report
from .serialize import FormatError, load_algebra, save_algebra


class UsageError(Exception):
    """Bad input detected after argument parsing (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if p not in PRIMES:
        raise argparse.ArgumentTypeError(f"p must be one of {', '.join(map(str, PRIMES))}")
    return p


def _nat(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _interp(text: str) -> InterpretationConfig:
    try:
        return InterpretationConfig.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _emit(report: Report, args) -> int:
    if args.out:
        report.write(args.out, args.timings)
    if args.json:
        sys.stdout.write(report.to_json(args.timings))
    else:
        print("\n".join(report.summary_lines()))
    return report.exit_code


def _add_output(sp):
    sp.add_argument("--out", help="write the JSON report to this path")
    sp.add_argument("--json", action="store_true", help="print the JSON report instead of a summary")
    sp.add_argument("--timings", action="store_true", help="include elapsed_ms per claim (breaks byte-stability)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lievar", description="Exact verification of nilpotent Lie algebra constructions over GF(p).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("verify-theorem1", help="check every computational claim at one (p, n)")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--interp", type=_interp, default=InterpretationConfig(), help="even|odd,mu|lambda")
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--kmax", type=_nat, help="largest k for the independence family (default 2p+n)")
    sp.add_argument("--trials", type=_nat, default=1000, help="trials for the random method")
    sp.add_argument("--cap", type=_nat, default=500, help="largest dim A_n to build")
    _add_output(sp)

    sp = sub.add_parser("check", help="check one identity on an algebra file")
    sp.add_argument("--algebra", required=True, help="sca-v1 JSON file")
    sp.add_argument("--poly", required=True, help="identity text, or @file")
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--trials", type=_nat, default=1000)
    sp.add_argument("--expect", choices=("holds", "fails"), help="expected verdict; a mismatch exits 1")
    _add_output(sp)

    sp = sub.add_parser("ordinal", help="ordinal function values and T-ideal comparison")
    sp.add_argument("--remark", type=int, choices=(4, 5), required=True)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--rank", type=_nat, nargs="+", required=True)
    sp.add_argument("--which", choices=("v", "w", "both", "base"), default="both")
    sp.add_argument("--compare", action="store_true", help="compare T(V) and T(W) at each rank")
    sp.add_argument("--method", choices=("auto", "generic", "fast"), default="auto")
    sp.add_argument("--budget", type=float, default=7200.0, help="seconds before remaining work is skipped")
    sp.add_argument("--cap", type=_nat, default=2000, help="largest relatively free algebra to build")
    sp.add_argument("--csv", help="write a CSV table to this path")
    _add_output(sp)

    sp = sub.add_parser("export", help="write an algebra as canonical JSON")
    sp.add_argument("--construction", choices=("A", "B", "C"), required=True)
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--interp", type=_interp, default=InterpretationConfig())
    sp.add_argument("--cap", type=_nat, default=500)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("audit", help="run the main claims under every reading of the derivations")
    sp.add_argument("--p", type=_prime, required=True)
    sp.add_argument("--n", type=_nat, required=True)
    sp.add_argument("--cap", type=_nat, default=500)
    _add_output(sp)
    return ap


def _read_poly_text(arg: str) -> str:
    if arg.startswith("@"):
        try:
            return Path(arg[1:]).read_text(encoding="utf-8").strip()
        except OSError as e:
            raise UsageError(f"cannot read {arg[1:]}: {e.strerror}") from None
    return arg


def cmd_verify_theorem1(args) -> int:
    report = verify_theorem1(args.p, args.n, args.interp, args.method, args.seed, args.kmax, args.trials, args.cap)
    return _emit(report, args)


def cmd_check(args) -> int:
    try:
        A = load_algebra(args.algebra)
    except FormatError as e:
        raise UsageError(f"{args.algebra}: {e}") from None
    ax = check_axioms(A)
    if not ax.ok:
        raise UsageError(f"{args.algebra}: not a valid {A.kind} algebra ({ax.axiom} fails)")
    kind = "lie" if A.kind == "lie" else "assoc"
    text = _read_poly_text(args.poly)
    try:
        f = parse_poly(text, A.p, kind)
    except ParseError as e:
        raise UsageError(f"cannot parse identity: {e}") from None
    expected = {"holds": "verified", "fails": "refuted", None: None}[args.expect]
    claim = identity_claim("check.identity", f"{f} = 0", A, f, args.method, expected=expected,
                           seed=args.seed, trials=args.trials)
    report = Report(
        "check",
        {"algebra": Path(args.algebra).name, "dim": A.dim, "p": A.p, "poly": str(f), "method": args.method,
         "seed": args.seed, "trials": args.trials, "expect": args.expect},
        [claim],
    )
    return _emit(report, args)


def cmd_ordinal(args) -> int:
    try:
        report, rows = ordinal(args.remark, args.p, args.rank, args.which, args.compare, args.method,
                               args.budget, args.cap)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
    return _emit(report, args)


def cmd_export(args) -> int:
    check_params(args.p, args.n, args.cap)
    if args.construction == "A":
        A = build_A(args.p, args.n, args.cap)
    elif args.construction == "B":
        A = build_B(args.p, args.n, args.interp, cap=args.cap)
    else:
        A = build_C(args.p, args.n, args.interp, cap=args.cap)[0]
    save_algebra(A, args.out)
    print(f"wrote {args.construction}_{args.n} over GF({args.p}), dim {A.dim}, to {args.out}")
    return 0


def cmd_audit(args) -> int:
    report = audit(args.p, args.n, args.cap)
    if not args.json:
        for row in report.extra["table"]:
            print("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
    return _emit(report, args)


COMMANDS = {
    "verify-theorem1": cmd_verify_theorem1,
    "check": cmd_check,
    "ordinal": cmd_ordinal,
    "export": cmd_export,
    "audit": cmd_audit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CapError, UsageError) as e:
        print(f"lievar: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
