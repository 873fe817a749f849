"""Command-line front end: ``zeno-screen <subcommand> [--param value]...``.

Exit codes: 0 on success, 1 on usage errors (bad flags, out-of-range
parameters, malformed config), 2 on numerical or validation failures.
Parameter precedence is CLI flags over config-file entries over built-in
defaults; the config file holds ``key=value`` lines with ``#`` comments.
"""

from __future__ import annotations

import argparse
import sys

from . import reporting
from .lindblad import IntegrationError
from .protocols import TruncationLeakError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 1
        raise UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="zeno-screen",
        description="Erasure-screened qubit storage: sweeps, reports and validation.",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    descriptions = {
        "free-decay": "free-space decay baseline: closed form vs integrated dynamics",
        "screen-atom": "atomic qubit screened by an erased cavity: fidelity families",
        "sweep-n": "minimal erasure count to hold a fidelity target, per coupling",
        "screen-field": "photonic qubit screened while internally evolving",
        "validate": "cross-validate the simulation against the closed forms",
    }
    for name in reporting.SUBCOMMANDS:
        p = sub.add_parser(name, help=descriptions[name], description=descriptions[name])
        for param, kind, default, help_text in reporting.PARAM_SPECS[name]:
            flag = "--" + param.replace("_", "-")
            shown = (
                help_text
                if default is reporting.REQUIRED
                else f"{help_text} (default: {_show_default(default)})"
            )
            if param.startswith("debug_"):
                shown = argparse.SUPPRESS
            p.add_argument(flag, dest=param, default=None, metavar=_metavar(kind), help=shown)
        p.add_argument(
            "--out",
            default=None,
            help="output path (required except for validate)",
        )
        p.add_argument(
            "--format",
            choices=("csv", "svg", "both"),
            default="csv",
            help="artifact format (default: csv)",
        )
        p.add_argument("--config", default=None, help="key=value config file")
    return parser


def _show_default(default) -> str:
    if isinstance(default, list):
        return ",".join(str(v) for v in default)
    if isinstance(default, float):
        return f"{default:.6g}"
    return str(default) if default != "" else "none"


def _metavar(kind: str) -> str:
    if kind.startswith("choice:"):
        return "{" + kind.split(":", 1)[1] + "}"
    return {"int_list": "N,N,...", "float_list": "X,X,...", "int": "N", "str": "PATH"}.get(
        kind, "X"
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise UsageError("a subcommand is required (try --help)")
        config_values = (
            reporting.parse_config_file(args.config) if args.config is not None else {}
        )
        cli_values = {
            name: getattr(args, name)
            for name, *_ in reporting.PARAM_SPECS[args.subcommand]
        }
        if args.subcommand != "validate" and args.out is None:
            raise UsageError(f"{args.subcommand} requires --out")
        spec = reporting.build_runspec(
            args.subcommand, cli_values, config_values, args.out, args.format
        )
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if spec.subcommand == "validate":
            code, report, table = reporting.cmd_validate(spec)
            sys.stdout.write(report)
            reporting.emit(table, spec)
            return code
        command = {
            "free-decay": reporting.cmd_free_decay,
            "screen-atom": reporting.cmd_screen_atom,
            "sweep-n": reporting.cmd_sweep_n,
            "screen-field": reporting.cmd_screen_field,
        }[spec.subcommand]
        table = command(spec)
        reporting.emit(table, spec)
        return 0
    except (ValueError, IntegrationError, TruncationLeakError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
