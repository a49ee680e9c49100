####################################################################################################
#                                           __main__.py                                            #
####################################################################################################
#                                                                                                  #
# Purpose: Console entry point for the ``shiftdiag`` command. One subcommand per pipeline stage:   #
#                                                                                                  #
#            analyze <file> [--format json|markdown] [--lenient]                                   #
#            dsep <file> --a <ids> --b <ids> [--given <ids>]                                        #
#            simulate <file> --cpts <file> --samples <n> --seed <u64> [--evidence k=v,...]          #
#                     [--out <csv>]                                                                #
#            verify <file> --cpts <file> [--delta <f>] [--format json|markdown]                    #
#            export-dot <file>                                                                     #
#            independencies <file> [--max-cond <n>]                                                #
#                                                                                                  #
#          Machine output goes to stdout, diagnostics to stderr. Exit codes: 0 clean,              #
#          1 findings needing attention, 2 input error (never a traceback for malformed input).   #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

import argparse
import functools
import sys
from typing import TextIO

# own
from shiftdiag.core import parameter_registry as _pr
from shiftdiag.core.errors import ShiftDiagError
from shiftdiag.core.logs import level_from_flags, setup_log
from shiftdiag.core.report import ExitStatus


def _ids(text: str) -> list[str]:
    items = [item.strip() for item in text.split(",")]
    if not all(items):
        raise ShiftDiagError(f"empty node id in '{text}'", "INVALID_ARGUMENT")
    return items


def _evidence(text: str | None) -> dict[str, str]:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise ShiftDiagError(f"evidence item '{item}' is not of the form node=state", "INVALID_ARGUMENT")
        out[key.strip()] = value.strip()
    return out


class _Parser(argparse.ArgumentParser):
    """ArgumentParser writing usage, help and version text to the given streams."""

    def __init__(self, *args, out: TextIO | None = None, err: TextIO | None = None, **kwargs):
        super().__init__(*args, **kwargs)
        self._out, self._err = out, err

    def _print_message(self, message, file=None):
        if file is None or file is sys.stdout:
            file = self._out or sys.stdout
        elif file is sys.stderr:
            file = self._err or sys.stderr
        super()._print_message(message, file)


def _add_settings(parser: argparse.ArgumentParser, *names: str) -> None:
    flags = _pr.cli_settings()
    for name in names:
        parser.add_argument(flags[name], dest=name, type=type(_pr.get(name).default), default=None,
                            help=_pr.help_text(name))


def _build_parser(out: TextIO | None = None, err: TextIO | None = None) -> argparse.ArgumentParser:
    from shiftdiag import __version__

    parser = _Parser(
        out=out, err=err,
        prog="shiftdiag",
        description="Analyze causal diagrams of imaging datasets for dataset shift and selection bias.",
    )
    parser.add_argument("--version", action="version", version=f"shiftdiag {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress (INFO) to stderr.")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only log errors.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND",
                                parser_class=functools.partial(_Parser, out=out, err=err))

    p = sub.add_parser("analyze", help="Classify direction, shifts and selections; print the report.")
    p.add_argument("file")
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--lenient", action="store_true",
                   help="Downgrade incoming edges on domain indicators to warnings.")

    p = sub.add_parser("dsep", help="Decide d-separation of two node sets and print witness paths.")
    p.add_argument("file")
    p.add_argument("--a", required=True, type=str, help="Comma-separated node ids.")
    p.add_argument("--b", required=True, type=str, help="Comma-separated node ids.")
    p.add_argument("--given", default="", type=str, help="Comma-separated conditioning node ids.")

    p = sub.add_parser("simulate", help="Sample a dataset from a .cpt model as CSV.")
    p.add_argument("file")
    p.add_argument("--cpts", required=True)
    p.add_argument("--samples", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--evidence", default=None, help="Comma-separated node=state pairs.")
    p.add_argument("--out", default=None, help="CSV path (default: stdout).")

    p = sub.add_parser("verify", help="Analyze, then check every finding against a .cpt model.")
    p.add_argument("file")
    p.add_argument("--cpts", required=True)
    _add_settings(p, "shift_delta")
    p.add_argument("--format", choices=("json", "markdown"), default="json")

    p = sub.add_parser("export-dot", help="Print the diagram as a DOT digraph.")
    p.add_argument("file")

    p = sub.add_parser("independencies", help="List the independencies the diagram implies.")
    p.add_argument("file")
    _add_settings(p, "max_conditioning")
    return parser


# ----------------------------- commands --------------------------------------

def _cmd_analyze(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.core.exporters import render_report
    from shiftdiag.core.shiftdiag import ShiftDiag

    pipeline = ShiftDiag(settings, mode="lenient" if args.lenient else "strict")
    pipeline.load(args.file)
    report = pipeline.analyze()
    out.write(render_report(report, args.format))
    return report.exit_status


def _cmd_dsep(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.dsl.parser import load_diagram
    from shiftdiag.graph.dseparation import d_separated

    diagram = load_diagram(args.file)
    given = _ids(args.given) if args.given.strip() else []
    result = d_separated(diagram, _ids(args.a), _ids(args.b), given, settings.witness_cap)
    out.write("separated\n" if result.separated else "connected\n")
    for path in result.witnesses:
        out.write(f"  {path.render()}\n")
    if result.truncated:
        out.write(f"  ... (more open paths; first {len(result.witnesses)} shown)\n")
    return ExitStatus.CLEAN


def _cmd_simulate(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.bn.cpt_format import load_model
    from shiftdiag.bn.sampling import dataset_to_csv, sample
    from shiftdiag.dsl.parser import load_diagram

    model = load_model(load_diagram(args.file), args.cpts, settings)
    dataset = sample(model, args.samples, args.seed, _evidence(args.evidence), settings)
    text = dataset_to_csv(dataset, args.out)
    if args.out is None:
        out.write(text)
    return ExitStatus.CLEAN


def _cmd_verify(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.core.exporters import render_report
    from shiftdiag.core.shiftdiag import ShiftDiag

    pipeline = ShiftDiag(settings)
    pipeline.load(args.file)
    report = pipeline.verify(args.cpts)
    out.write(render_report(report, args.format))
    return report.exit_status


def _cmd_export_dot(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.dsl.parser import load_diagram
    from shiftdiag.dsl.writer import export_dot

    out.write(export_dot(load_diagram(args.file)))
    return ExitStatus.CLEAN


def _cmd_independencies(args, out: TextIO, settings) -> ExitStatus:
    from shiftdiag.dsl.parser import load_diagram
    from shiftdiag.graph.dseparation import implied_independencies

    for statement in implied_independencies(load_diagram(args.file), settings.max_conditioning):
        out.write(f"{statement}\n")
    return ExitStatus.CLEAN


_COMMANDS = {
    "analyze": _cmd_analyze,
    "dsep": _cmd_dsep,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "export-dot": _cmd_export_dot,
    "independencies": _cmd_independencies,
}


def run_cli(argv: list[str] | None = None, stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> ExitStatus:
    """Parse ``argv``, run one subcommand and return its exit status."""
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        args = _build_parser(out, err).parse_args(argv)
    except SystemExit as exc:   # argparse usage errors, --help, --version
        code = exc.code if isinstance(exc.code, int) else ExitStatus.INPUT_ERROR
        return ExitStatus(code) if code in (0, 1, 2) else ExitStatus.INPUT_ERROR

    setup_log(level_from_flags(args.verbose, args.quiet), stream=err)
    try:
        flags = {name: getattr(args, name, None) for name in _pr.cli_settings()}
        settings = _pr.DEFAULT_SETTINGS.override(**flags)
        return _COMMANDS[args.command](args, out, settings)
    except ShiftDiagError as exc:
        for line in exc.details():
            err.write(f"error: {line}\n")
        return ExitStatus.INPUT_ERROR
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return ExitStatus.INPUT_ERROR
    except OSError as exc:
        target = exc.filename if exc.filename is not None else ""
        err.write(f"error: cannot access '{target}': {exc.strerror or exc}\n")
        return ExitStatus.INPUT_ERROR


def main(argv: list[str] | None = None) -> int:
    """Console-script entry point for the ``shiftdiag`` command."""
    return int(run_cli(argv))


if __name__ == "__main__":
    raise SystemExit(main())
