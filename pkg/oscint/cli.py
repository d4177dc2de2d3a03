"""Command-line front end."""
from __future__ import annotations

import argparse
import asyncio
import csv
import json
import logging
import math
import sys
from typing import Any, Dict, List, Optional, Sequence, TextIO

from . import __version__
from .config import EvalConfig, resolve_config
from .const import (
    CONF_J,
    CONF_K,
    CONF_MAX_SEGMENTS,
    CONF_PHASE_STEP,
    CONF_T,
    CONF_TOL,
    CONF_WINDOW_HI,
    CONF_WINDOW_LO,
    CONF_WINDOW_POINTS,
    DOMAIN,
    EXIT_NONCONVERGENCE,
    EXIT_OK,
    EXIT_USAGE,
    FORMAT_CSV,
    FORMAT_HUMAN,
    FORMAT_JSON,
    ORACLE_DEFAULT_TOL,
    OUTPUT_FORMATS,
    REVERSION_FAMILIES,
)
from .exceptions import ConvergenceError, OscintError
from .general_kernel import ProblemSpec, evaluate
from .poly_core import parse_polynomial
from .reversion import ReversionMethod
from .tables import (
    PART_CHOICES,
    PART_IMAG,
    TABLE_ALL,
    TABLE_CHOICES,
    check_specs,
    curve_column,
    curve_extrema,
    curve_rows,
    default_check_specs,
    format_complex,
    neumann_table,
    reproduce_tables,
    reversion_table,
)

_LOGGER = logging.getLogger(__name__)

_VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)

# Flag destination -> EvalConfig key
_CONFIG_FLAGS = {
    "K": CONF_K,
    "T": CONF_T,
    "J": CONF_J,
    "tol": CONF_TOL,
    "window_lo": CONF_WINDOW_LO,
    "window_hi": CONF_WINDOW_HI,
    "window_points": CONF_WINDOW_POINTS,
    "phase_step": CONF_PHASE_STEP,
    "max_segments": CONF_MAX_SEGMENTS,
}


class UsageError(OscintError):
    """Bad command line."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _upper_limit(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        value = float(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from err
    if math.isnan(value) or value < 0:
        raise argparse.ArgumentTypeError(f"upper limit must be >= 0, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Construct the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=OUTPUT_FORMATS, default=FORMAT_HUMAN, help="output format"
    )
    common.add_argument("--config", help="key=value file overriding the defaults")
    common.add_argument("-v", "--verbose", action="count", default=0)
    tuning = common.add_argument_group("evaluation settings")
    tuning.add_argument("--K", type=int, dest="K", help="q-iteration depth")
    tuning.add_argument("--T", type=int, dest="T", help="asymptotic series order")
    tuning.add_argument("--J", type=int, dest="J", help="complete-integral terms")
    tuning.add_argument("--tol", type=float, help="target tolerance")
    tuning.add_argument("--window-lo", type=float, dest="window_lo")
    tuning.add_argument("--window-hi", type=float, dest="window_hi")
    tuning.add_argument("--window-points", type=int, dest="window_points")
    tuning.add_argument("--phase-step", type=float, dest="phase_step")
    tuning.add_argument("--max-segments", type=int, dest="max_segments")

    parser = _Parser(
        prog=DOMAIN, description="Generalized Fresnel integrals of polynomial phase."
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    commands = parser.add_subparsers(
        dest="command", required=True, parser_class=_Parser
    )

    sub = commands.add_parser("eval", parents=[common], help="int_0^u p e^{i phi}")
    sub.add_argument("--p", required=True, help="amplitude polynomial")
    sub.add_argument("--phi", required=True, help="phase polynomial")
    sub.add_argument("--u", required=True, type=_upper_limit, help="upper limit or inf")

    sub = commands.add_parser(
        "complete", parents=[common], help="int_0^inf p e^{i phi}"
    )
    sub.add_argument("--p", required=True)
    sub.add_argument("--phi", required=True)

    sub = commands.add_parser(
        "neumann-table", parents=[common], help="exact Neumann coefficients"
    )
    sub.add_argument("--n", type=int, required=True, choices=(2, 3, 4, 5))
    sub.add_argument("--terms", type=int, default=11)

    sub = commands.add_parser(
        "reversion-table", parents=[common], help="series reversion coefficients"
    )
    sub.add_argument("--family", required=True, choices=sorted(REVERSION_FAMILIES))
    sub.add_argument("--order", type=int, default=10)
    sub.add_argument("--k", type=int, default=1, help="k of the x+kx^2 family")
    sub.add_argument(
        "--method",
        choices=[method.value for method in ReversionMethod],
        default=ReversionMethod.MULTINOMIAL.value,
    )

    sub = commands.add_parser(
        "paper-tables", parents=[common], help="reproduce the reference tables"
    )
    sub.add_argument("--which", choices=TABLE_CHOICES, default=TABLE_ALL)

    sub = commands.add_parser("curve", parents=[common], help="I(u) samples")
    sub.add_argument("--p", required=True)
    sub.add_argument("--phi", required=True)
    sub.add_argument("--u-max", type=float, required=True, dest="u_max")
    sub.add_argument("--samples", type=int, default=200)
    sub.add_argument("--part", choices=PART_CHOICES, default=PART_IMAG)
    sub.add_argument("--extrema", action="store_true", help="report extrema instead")

    sub = commands.add_parser(
        "check", parents=[common], help="compare with adaptive quadrature"
    )
    sub.add_argument("--p")
    sub.add_argument("--phi")
    sub.add_argument("--u", type=_upper_limit, action="append")
    sub.add_argument("--oracle-tol", type=float, default=ORACLE_DEFAULT_TOL)
    return parser


def write_rows(
    rows: Sequence[Dict[str, Any]], fmt: str, stream: Optional[TextIO] = None
) -> None:
    """Emit rows as an aligned table, CSV with header, or a JSON array."""
    stream = stream or sys.stdout
    if fmt == FORMAT_JSON:
        json.dump(list(rows), stream, indent=2)
        stream.write("\n")
        return
    if not rows:
        return
    columns = list(rows[0])
    if fmt == FORMAT_CSV:
        writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    cells = [[str(row[c]) for c in columns] for row in rows]
    widths = [
        max(len(column), *(len(line[i]) for line in cells))
        for i, column in enumerate(columns)
    ]
    stream.write("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip() + "\n")
    for line in cells:
        text = "  ".join(c.ljust(w) for c, w in zip(line, widths))
        stream.write(text.rstrip() + "\n")


def _value_rows(value: complex, error: float, method: str) -> List[Dict[str, Any]]:
    return [{"re": value.real, "im": value.imag, "error": error, "method": method}]


def _emit_value(
    args: argparse.Namespace, value: complex, error: float, method: str
) -> None:
    if args.format == FORMAT_HUMAN:
        sys.stdout.write(format_complex(value) + "\n")
        _LOGGER.info("error estimate %.3g via %s", error, method)
        return
    write_rows(_value_rows(value, error, method), args.format)


def _cmd_eval(args: argparse.Namespace, config: EvalConfig) -> int:
    spec = ProblemSpec(parse_polynomial(args.p), parse_polynomial(args.phi), args.u)
    result = evaluate(spec, config)
    _emit_value(args, result.value, result.error_estimate, result.method)
    return EXIT_OK


def _cmd_complete(args: argparse.Namespace, config: EvalConfig) -> int:
    spec = ProblemSpec(parse_polynomial(args.p), parse_polynomial(args.phi), math.inf)
    result = evaluate(spec, config)
    _emit_value(args, result.value, result.error_estimate, result.method)
    return EXIT_OK


def _cmd_neumann(args: argparse.Namespace, config: EvalConfig) -> int:
    write_rows(neumann_table(args.n, args.terms), args.format)
    return EXIT_OK


def _cmd_reversion(args: argparse.Namespace, config: EvalConfig) -> int:
    rows = reversion_table(args.family, args.order, args.method, args.k)
    write_rows(rows, args.format)
    return EXIT_OK


def _cmd_tables(args: argparse.Namespace, config: EvalConfig) -> int:
    checks = asyncio.run(reproduce_tables(args.which, config))
    write_rows([check.as_row() for check in checks], args.format)
    failed = [check for check in checks if not check.ok]
    for check in failed:
        _LOGGER.error(
            "%s %s deviates by %.3g", check.table, check.label, check.deviation
        )
    return EXIT_NONCONVERGENCE if failed else EXIT_OK


def _cmd_curve(args: argparse.Namespace, config: EvalConfig) -> int:
    p = parse_polynomial(args.p)
    phi = parse_polynomial(args.phi)
    rows = curve_rows(p, phi, args.u_max, args.samples, config)
    if args.extrema:
        extrema = curve_extrema(p, phi, rows, args.part)
        write_rows(
            [
                {"u": u, "phi": float(phi(u)), "phi_over_pi": float(phi(u)) / math.pi}
                for u in extrema
            ],
            args.format,
        )
        return EXIT_OK
    write_rows(curve_column(rows, args.part), args.format)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace, config: EvalConfig) -> int:
    if args.p or args.phi or args.u:
        if not (args.p and args.phi and args.u):
            raise UsageError("check needs --p, --phi and at least one --u together")
        p = parse_polynomial(args.p)
        phi = parse_polynomial(args.phi)
        specs = [ProblemSpec(p, phi, u) for u in args.u]
    else:
        specs = default_check_specs()
    rows = asyncio.run(check_specs(specs, config, args.oracle_tol))
    write_rows([row.as_row() for row in rows], args.format)
    return EXIT_OK if all(row.ok for row in rows) else EXIT_NONCONVERGENCE


_COMMANDS = {
    "eval": _cmd_eval,
    "complete": _cmd_complete,
    "neumann-table": _cmd_neumann,
    "reversion-table": _cmd_reversion,
    "paper-tables": _cmd_tables,
    "curve": _cmd_curve,
    "check": _cmd_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        sys.stderr.write(f"{DOMAIN}: error: {err}\n")
        return EXIT_USAGE
    except SystemExit as err:
        return int(err.code or 0)

    level = _VERBOSITY[min(args.verbose, len(_VERBOSITY) - 1)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        flags = {key: getattr(args, dest) for dest, key in _CONFIG_FLAGS.items()}
        config = resolve_config(flags, args.config)
        return _COMMANDS[args.command](args, config)
    except ConvergenceError as err:
        _LOGGER.error("%s", err)
        if err.diagnostics:
            _LOGGER.info("diagnostics: %s", err.diagnostics)
        return EXIT_NONCONVERGENCE
    except OscintError as err:
        sys.stderr.write(f"{DOMAIN}: error: {err}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
