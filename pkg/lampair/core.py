"""Main CLI interface for lampair"""

import importlib.metadata
import sys
from argparse import ArgumentParser, RawDescriptionHelpFormatter
from typing import List, Optional

from .checker import execute_checks, list_checks
from .config import load_settings
from .discovery import find_scenario_files
from .errors import LampairError, ScenarioParseError
from .logger import setup_logging
from .parser import read_scenario
from .reports import render_text, write_reports


def create_parser() -> ArgumentParser:
    """Create and configure the argument parser.

    Returns:
        ArgumentParser: Configured argument parser with all CLI options
    """
    parser = ArgumentParser(
        prog="lampair",
        description=(
            "lampair - exact λ-pairings of divergence-measure fields and "
            "BV functions.\n"
            "Runs declarative scenarios of identity checks and writes "
            "text, JSON and CSV reports."
        ),
        epilog=(
            "Examples:\n"
            "  lampair run                     # Run the bundled scenarios\n"
            "  lampair run scenario.json       # Run one scenario\n"
            "  lampair run scenarios/ --jobs 4 # Run a directory of them\n"
            "  lampair validate scenario.json  # Parse only\n"
            "  lampair list-checks             # Show registered checks\n"
            "\nLogging and verbosity:\n"
            "  lampair -v run                  # Show progress\n"
            "  lampair --log run               # Log to logs/lampair.log"
        ),
        formatter_class=RawDescriptionHelpFormatter,
    )
    # Version
    parser.add_argument(
        "--version", action="store_true", help="Show version and exit"
    )

    # Global options
    parser.add_argument(
        "--config",
        help="TOML settings file (default: lampair.toml or pyproject.toml)",
        metavar="FILE",
    )
    parser.add_argument(
        "--log",
        action="store_true",
        help="Enable logging to logs/lampair.log",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Show detailed progress information",
    )

    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    run = commands.add_parser(
        "run", help="Run scenarios and write reports"
    )
    run.add_argument(
        "path",
        nargs="?",
        help="Scenario file or directory (default: bundled scenarios)",
        metavar="PATH",
    )
    run.add_argument(
        "--tolerance",
        type=float,
        help="Tolerance for quadrature and mollifier checks",
    )
    run.add_argument(
        "--out", help="Report directory (default: reports)", metavar="DIR"
    )
    run.add_argument(
        "--jobs", type=int, help="Checks run in parallel per scenario"
    )

    validate = commands.add_parser(
        "validate", help="Parse scenarios without running checks"
    )
    validate.add_argument(
        "path",
        nargs="?",
        help="Scenario file or directory (default: bundled scenarios)",
        metavar="PATH",
    )

    commands.add_parser("list-checks", help="List registered checks")

    return parser


def _list_checks() -> int:
    for name, anchor, description in list_checks():
        print(f"{name:<20} [{anchor}] {description}")
    return 0


def _validate(paths: List[str], cantor_depth: int) -> int:
    failures = 0
    for path in paths:
        try:
            scenario = read_scenario(path, cantor_depth)
        except ScenarioParseError as e:
            print(f"INVALID {path}: {e}")
            failures += 1
            continue
        print(f"OK {path} ({scenario.name}, {len(scenario.checks)} checks)")
    return 2 if failures else 0


def _run(paths: List[str], settings) -> int:
    failed = []
    for path in paths:
        scenario = read_scenario(path, settings.cantor_depth)
        result = execute_checks(scenario, settings)
        print(render_text(result), end="")
        write_reports(result, settings.out_dir)
        if not result.passed:
            failed.append(scenario.name)
    print(f"\nReports written to: {settings.out_dir}")
    if failed:
        print(f"FAILED: {', '.join(failed)}")
        return 1
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for lampair CLI.

    Returns:
        int: Exit code (0 success, 1 check or I/O failure, 2 parse
        error, 3 unsupported construct, 130 interrupted)
    """
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.version:
        try:
            version = importlib.metadata.version("lampair")
            print(f"lampair version {version}")
            return 0
        except importlib.metadata.PackageNotFoundError:
            print("lampair version unknown (package not installed)")
            return 1

    if args.command is None:
        parser.print_help()
        return 0

    logger = setup_logging(args.verbose, args.log)
    if args.log:
        logger.info("lampair started")

    try:
        if args.command == "list-checks":
            return _list_checks()

        settings = load_settings(args.config)
        paths = find_scenario_files(args.path)
        if not paths:
            print("No scenario files found.")
            return 1

        if args.command == "validate":
            return _validate(paths, settings.cantor_depth)

        settings = settings.with_overrides(
            tolerance=args.tolerance, out_dir=args.out, jobs=args.jobs
        )
        if settings.jobs < 1:
            print("ERROR: --jobs must be positive")
            return 1
        return _run(paths, settings)

    except ScenarioParseError as e:
        print(f"ERROR: {e}")
        logger.error(f"Scenario parse error: {e}")
        return e.exit_code
    except LampairError as e:
        print(f"ERROR: {e}")
        logger.error(str(e))
        return e.exit_code
    except (FileNotFoundError, OSError) as e:
        print(f"ERROR: {e}")
        return 1
    except KeyboardInterrupt:
        print("\nWARNING: Run interrupted by user")
        return 130
    except Exception as e:
        print(f"ERROR: Unexpected error: {e}")
        logger.exception("Unexpected error")
        return 1


if __name__ == "__main__":
    sys.exit(main())
