"""Command line: ``isoquant verify <suite>``, ``isoquant scan <name>``, ``isoquant table fock-rosly``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import fock_rosly as fr
from .verify import SCANS, SUITES, ConfigError, RunConfig, run_scan, run_verify

VERIFY_HEADER = ("check", "residual", "tol", "status", "ms")
SCAN_HEADER = ("check", "kappa", "residual", "ratio", "status")
TABLE_HEADER = ("f", "g", "bracket")

BRACKET_NOTE = (
    "note: the j-j term of the coordinate bracket uses d f1/d j_a * d f2/d j_b * j_c; "
    "the typeset formula repeats f1, which vanishes identically and cannot give {j1, j2} = j3"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name, float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad tolerance {value!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jmax", type=float, default=2.0, help="largest spin in random states")
    common.add_argument("--band-limit", type=int, default=12, help="quadrature band limit L")
    common.add_argument("--kappa-start", type=float, default=0.1)
    common.add_argument("--halvings", type=int, default=7)
    common.add_argument("--tol", type=_tol, action="append", default=[], metavar="NAME=VALUE")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write the table here instead of stdout")
    common.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical output)")

    parser = _Parser(prog="isoquant", description="Numerical checks for the iso(3) bialgebra and its quantum double.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    s = sub.add_parser("scan", parents=[common], help="run a kappa convergence scan")
    s.add_argument("name", choices=sorted(SCANS))
    t = sub.add_parser("table", parents=[common], help="print a bracket table")
    t.add_argument("name", choices=("fock-rosly",))
    return parser


def _number(x) -> str:
    return "" if x is None else repr(float(x))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _linear_form(coeffs: dict[str, float]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for name, c in sorted(coeffs.items()):
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c):g}*"
        parts.append(f"{sign}{mag}{name}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def render(args, cfg: RunConfig) -> tuple[str, bool]:
    if args.command == "verify":
        reports = run_verify(args.suite, cfg)
        ok = all(r.status == "pass" for r in reports)
        if args.format == "json":
            return json.dumps([r.as_dict() for r in reports], indent=2) + "\n", ok
        rows = [(r.check, _number(r.residual), _number(r.tol), r.status, _number(r.ms)) for r in reports]
        return _csv(VERIFY_HEADER, rows), ok
    if args.command == "scan":
        table = run_scan(args.name, cfg)
        ok = table[-1].status == "pass"
        if args.format == "json":
            return json.dumps([r.as_dict() for r in table], indent=2) + "\n", ok
        rows = [(r.check, _number(r.kappa), _number(r.residual), _number(r.ratio), r.status) for r in table]
        return _csv(SCAN_HEADER, rows), ok
    table = [(a, b, _linear_form(c)) for a, b, c in fr.coordinate_bracket_table()]
    if args.format == "json":
        return json.dumps([dict(zip(TABLE_HEADER, row)) for row in table], indent=2) + "\n", True
    return _csv(TABLE_HEADER, table), True


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            seed=args.seed,
            jmax=args.jmax,
            band_limit=args.band_limit,
            kappa_start=args.kappa_start,
            halvings=args.halvings,
            tol=dict(args.tol),
            timing=args.timing,
        )
        if getattr(args, "suite", None) == "fock-rosly" or getattr(args, "name", None) == "fock-rosly":
            print(BRACKET_NOTE, file=sys.stderr)
        text, ok = render(args, cfg)
    except ConfigError as exc:
        print(f"isoquant: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
