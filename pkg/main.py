#!/usr/bin/env python3
"""
Monogamy Audit
Main application entry point.

Computes bipartite entanglement measures of small multi-qudit states and
audits product-form and summation-form monogamy inequalities against them.
"""
import sys
import argparse
import traceback
from typing import List, Optional

from pydantic import ValidationError

from cli.commands import (
    EXIT_ERROR,
    EXIT_INPUT_ERROR,
    EXIT_VALIDATION_ERROR,
    run_command,
)
from cli.run_config import RunConfig
from config import ConfigManager, set_config
from models.errors import PartitionError, StateInputError, StateValidationError
from states.catalog import BUILTIN_RECIPES
from utils.logging_utils import log_system_event, setup_logging


def _add_state_arguments(parser: argparse.ArgumentParser):
    parser.add_argument(
        '--state',
        help=f"Builtin state ({', '.join(BUILTIN_RECIPES)}) or path to a state JSON file"
    )
    parser.add_argument('--partition', help="Bipartition as side A : side B, e.g. 0:12")
    parser.add_argument('--first', dest='first_subsystem', type=int, help="Subsystem playing A (default 0)")


def _add_nu_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--nu-min', type=float, help="Smallest power (>= 2)")
    parser.add_argument('--nu-max', type=float, help="Largest power")
    parser.add_argument('--nu-step', type=float, help="Power step")
    parser.add_argument('--nu', dest='nu_values', type=float, nargs='+', help="Explicit powers, overriding the range")


def _add_output_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--out', help="Write the result to this path instead of stdout")
    parser.add_argument('--format', choices=['csv', 'json'], help="Output format")


def _add_tolerance_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--tolerance', type=float, help="Relative tolerance of bound comparisons")
    parser.add_argument('--absolute-tolerance', type=float, help="Absolute tolerance floor")


def _add_roof_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--seed', type=int, help="Seed for random draws and optimizer restarts")
    parser.add_argument('--restarts', type=int, help="Convex-roof optimizer restarts (overrides config)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Entanglement measures and monogamy-inequality audits",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py measure --state w3 --partition 0:12
  python main.py audit --state gsd-example2 --measure cren --nu 2 3 4
  python main.py figure fig2 --format csv
  python main.py random-audit --samples 1000 --nu 2 3 5
  python main.py counterexamples --nu 2 3 4 10
  python main.py croof --state ou --keep 0 1
        """
    )
    parser.add_argument('--config', help="Path to a YAML configuration file")
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help="Logging level (overrides config)")
    parser.add_argument('--log-file', action='store_true', help="Also log to a timestamped file")

    subparsers = parser.add_subparsers(dest='command', required=True)

    measure = subparsers.add_parser('measure', help="Concurrence, negativity and CREN across a partition")
    _add_state_arguments(measure)
    _add_output_arguments(measure)
    _add_roof_arguments(measure)

    audit = subparsers.add_parser('audit', help="Audit every monogamy bound of one state")
    _add_state_arguments(audit)
    audit.add_argument('--measure', choices=['concurrence', 'cren'], help="Measure kind (default concurrence)")
    audit.add_argument('--b1', type=int, help="Subsystem playing B1")
    audit.add_argument('--allow-mixed', action='store_true', default=None, help="Accept mixed input states")
    _add_nu_arguments(audit)
    _add_tolerance_arguments(audit)
    _add_output_arguments(audit)
    _add_roof_arguments(audit)

    figure = subparsers.add_parser('figure', help="Curve data of the worked examples")
    figure.add_argument('figure', choices=['fig1', 'fig2'])
    figure.add_argument('--paper-values', dest='quoted_values', action='store_true', default=None,
                        help="fig1 only: use the quoted component values verbatim")
    _add_nu_arguments(figure)
    _add_output_arguments(figure)

    random_audit = subparsers.add_parser('random-audit', help="Audit Haar-random pure states")
    random_audit.add_argument('--samples', type=int, help="Number of random states")
    random_audit.add_argument('--dims', type=int, nargs='+', help="Register dimensions (default 2 2 2)")
    random_audit.add_argument('--measure', choices=['concurrence', 'cren'], help="Measure kind")
    random_audit.add_argument('--workers', type=int, help="Worker processes")
    _add_nu_arguments(random_audit)
    _add_tolerance_arguments(random_audit)
    _add_output_arguments(random_audit)
    _add_roof_arguments(random_audit)

    counterexamples = subparsers.add_parser('counterexamples', help="Check the CKW counterexamples")
    _add_nu_arguments(counterexamples)
    _add_output_arguments(counterexamples)
    _add_roof_arguments(counterexamples)

    croof = subparsers.add_parser('croof', help="Convex-roof bracket of a reduced state")
    _add_state_arguments(croof)
    croof.add_argument('--keep', type=int, nargs='+', help="Subsystems kept in the reduced state")
    croof.add_argument('--objective', choices=['negativity', 'concurrence'], help="Pure-state measure")
    _add_output_arguments(croof)
    _add_roof_arguments(croof)

    return parser


GLOBAL_FLAGS = ('config', 'log_level', 'log_file', 'command')


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    manager = ConfigManager(args.config)
    config = manager.load_config()
    if args.log_level:
        config.logging.level = args.log_level
    set_config(config)
    logger = setup_logging(config.logging.level, args.log_file or config.logging.log_to_file,
                           config.logging.log_directory)
    log_system_event("STARTUP", f"command {args.command}", logger=logger)

    flags = {key: value for key, value in vars(args).items() if key not in GLOBAL_FLAGS}
    try:
        run_config = RunConfig.from_sources(args.command, flags, config)
        return run_command(run_config, config)
    except StateInputError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (StateValidationError, PartitionError, ValidationError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_VALIDATION_ERROR
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_ERROR
    except Exception as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        print("Traceback:", file=sys.stderr)
        traceback.print_exc()
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
