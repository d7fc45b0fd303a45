"""
Command-line front door: solve, compare and oracle subcommands.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from . import __version__
from .exceptions import SCFInputError
from .grid.constants import PhysicalConstants
from .output.results_writer import load_summary
from .output.run_executor import EXIT_BAD_INPUT, EXIT_CONVERGED, RunExecutor
from .reference.coulomb import CoulombLevel, compare_levels, reduced_mass
from .scf.config import validate_config
from .utils.logging import configure_logging

logger = logging.getLogger("scfhydrogen")

__all__ = ["main", "build_parser", "validate_config"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scfhydrogen",
        description="Self-consistent proton + electron eigenstates compared with Coulomb hydrogen.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="Run the SCF solver on a config file.")
    solve.add_argument("config", metavar="CONFIG", help="flat YAML config file")
    solve.add_argument("--out", default="results", metavar="DIR", help="output directory")
    solve.add_argument("--dry-run", action="store_true", help="validate and print resolved parameters only")
    solve.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    solve.add_argument("--verbose", action="store_true", help="log eigensolver details")
    solve.add_argument("--log-file", default=None, metavar="PATH")

    compare = subparsers.add_parser("compare", help="Compare a summary.json with the Coulomb spectrum.")
    compare.add_argument("summary", metavar="SUMMARY", help="summary.json of a converged run")
    compare.add_argument("--nmax", type=int, default=3, metavar="N", help="number of Coulomb levels")

    oracle = subparsers.add_parser("oracle", help="Print analytic reference values.")
    oracle_kinds = oracle.add_subparsers(dest="kind", required=True)
    coulomb = oracle_kinds.add_parser("coulomb", help="Coulomb level -m/(2n^2)")
    coulomb.add_argument("--n", type=int, required=True, metavar="K", help="principal quantum number")
    coulomb.add_argument("--mass", type=float, default=1.0, metavar="M", help="(reduced) mass in electron masses")
    return parser


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _error(message: str) -> None:
    print(f"scfhydrogen: {message}", file=sys.stderr)


def _run_solve(args: argparse.Namespace) -> int:
    level = logging.WARNING if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    configure_logging(level=level, log_file=args.log_file)
    result = RunExecutor(args.out).execute(args.config, dry_run=args.dry_run)
    if result.exit_code != EXIT_CONVERGED:
        _error(f"{result.outcome}: {result.message}" if result.message else result.outcome)
    return result.exit_code


def _section(mapping: dict, key: str) -> dict:
    value = mapping.get(key)
    return value if isinstance(value, dict) else {}


def _run_compare(args: argparse.Namespace) -> int:
    configure_logging(level=logging.WARNING)
    try:
        summary = load_summary(args.summary)
    except (OSError, json.JSONDecodeError) as e:
        _error(f"cannot read {args.summary}: {e}")
        return EXIT_BAD_INPUT
    if not isinstance(summary, dict):
        _error(f"{args.summary} is not a run summary (expected a JSON object)")
        return EXIT_BAD_INPUT
    if summary.get("E_p") is None or summary.get("E_e") is None:
        _error(f"{args.summary} holds no levels (outcome: {summary.get('outcome')})")
        return EXIT_BAD_INPUT
    mass_p = _section(summary, "config").get("mass_p", PhysicalConstants().mass_p)
    moments = _section(_section(summary, "comparison"), "moments")
    try:
        report = compare_levels(
            summary["E_p"],
            summary["E_e"],
            reduced_mass(mass_p, 1.0),
            args.nmax,
            mean_r=moments.get("mean_r"),
            mean_r2=moments.get("mean_r2"),
        )
    except (SCFInputError, TypeError, ValueError) as e:
        _error(f"{args.summary}: {e}")
        return EXIT_BAD_INPUT
    _emit_json(report.to_dict())
    return EXIT_CONVERGED


def _run_oracle(args: argparse.Namespace) -> int:
    if not args.mass > 0:
        _error(f"mass must be positive, got {args.mass}")
        return EXIT_BAD_INPUT
    try:
        level = CoulombLevel.of(args.n, args.mass)
    except SCFInputError as e:
        _error(str(e))
        return EXIT_BAD_INPUT
    _emit_json({"n": level.n, "mass": level.reduced_mass, "energy": level.energy})
    return EXIT_CONVERGED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve":
        return _run_solve(args)
    if args.command == "compare":
        return _run_compare(args)
    return _run_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
