"""Command-line interface for the verification engine."""

import argparse
import logging
import sys
from pathlib import Path

from sugra_bv_verifier.database import ResultDatabase
from sugra_bv_verifier.errors import ConfigError
from sugra_bv_verifier.field_content import sample_configuration
from sugra_bv_verifier.fixtures import dump_configuration, dump_rank_table
from sugra_bv_verifier.models import RunConfig
from sugra_bv_verifier.runner import EXIT_CONFIG_ERROR, EXIT_OK, emit_report, run_suite
from sugra_bv_verifier.server import DEFAULT_DB_PATH
from sugra_bv_verifier.structure_maps import diagram_descriptors, isomorphism_descriptors, rank_certify
from sugra_bv_verifier.suites import SUITES

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)


def _database_path(args: argparse.Namespace) -> Path:
    return Path(args.database) if args.database else DEFAULT_DB_PATH


def cmd_run(args: argparse.Namespace) -> int:
    """Run verification suites and print the report.

    Args:
        args: Parsed command-line arguments.

    Returns:
        Exit code (0 all required checks pass, 1 a residual failed, 2 bad configuration).
    """
    config = RunConfig(
        suites=args.suite,
        seed=args.seed,
        cases=args.cases,
        odd_generators=args.odd_generators,
        jet_order=args.jet_order,
        format=args.format,
        fail_fast=args.fail_fast,
        q_psi_variant=args.q_psi_variant,
        disable_l_correction=args.disable_l_correction,
        timing=args.timing,
        profile=args.profile,
    )
    try:
        exit_code, results = run_suite(config)
    except ConfigError as exc:
        logger.error("Configuration rejected: %s", exc)
        return EXIT_CONFIG_ERROR

    sys.stdout.write(emit_report(results, config.format))
    if args.store:
        db_path = _database_path(args)
        db_path.parent.mkdir(parents=True, exist_ok=True)
        run_id = ResultDatabase(db_path).record_run(config, exit_code, results)
        logger.info("Stored run %d in %s", run_id, db_path)
    return exit_code


def cmd_stats(args: argparse.Namespace) -> int:
    """Show stored run statistics.

    Args:
        args: Parsed command-line arguments.

    Returns:
        Exit code (0 for success, 1 for failure).
    """
    db_path = _database_path(args)

    if not db_path.exists():
        logger.error("Database not found: %s", db_path)
        logger.info("Run 'sugra-bv-verify run --store' to record a run")
        return 1

    database = ResultDatabase(db_path)
    logger.info("Total stored runs: %d", database.get_run_count())
    latest = database.list_runs(limit=1)
    if latest:
        run = latest[0]
        logger.info(
            "Latest run %d (%s): %d checks, %d failed, exit code %d",
            run.run_id,
            run.created_at,
            run.total_checks,
            run.failed_checks,
            run.exit_code,
        )
    return 0


def cmd_dump_config(args: argparse.Namespace) -> int:
    """Write a configuration fixture for a seed.

    Args:
        args: Parsed command-line arguments.

    Returns:
        Exit code (0 for success, 2 for bad parameters).
    """
    try:
        config = sample_configuration(
            args.seed, jet_order=args.jet_order, odd_generators=args.odd_generators, profile=args.profile
        )
    except ConfigError as exc:
        logger.error("Configuration rejected: %s", exc)
        return EXIT_CONFIG_ERROR
    text = dump_configuration(config)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("Wrote fixture to %s", args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_ranks(args: argparse.Namespace) -> int:
    """Print the certified rank table of the coframe maps.

    Args:
        args: Parsed command-line arguments.

    Returns:
        Exit code (0 when every map has its expected pattern, 1 otherwise).
    """
    e = sample_configuration(args.seed, jet_order=0).e
    rows = [rank_certify(d, e) for d in (*diagram_descriptors(), *isomorphism_descriptors())]
    sys.stdout.write(dump_rank_table(rows, args.seed))
    mismatched = [r.name for r in rows if not r.matches]
    if mismatched:
        logger.error("Unexpected rank pattern for %s", ", ".join(mismatched))
        return 1
    return EXIT_OK


def main() -> int:
    """Main entry point for CLI.

    Returns:
        Exit code.
    """
    parser = argparse.ArgumentParser(
        prog="sugra-bv-verify",
        description="Exact-arithmetic checks of the BV supergravity identities",
    )
    parser.add_argument(
        "--database",
        "-d",
        help="Path to SQLite database file",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable debug logging",
    )

    subparsers = parser.add_subparsers(dest="command", required=True)

    # Run command
    run_parser = subparsers.add_parser("run", help="Run verification suites")
    run_parser.add_argument(
        "--suite",
        "-s",
        action="append",
        default=None,
        help=f"Suite to run, repeatable (default: all). One of: all, {', '.join(SUITES)}",
    )
    run_parser.add_argument("--seed", type=int, default=0, help="Run seed (default: 0)")
    run_parser.add_argument("--cases", type=int, default=5, help="Random cases per suite (default: 5)")
    run_parser.add_argument(
        "--odd-generators", type=int, default=12, help="Size of the Grassmann algebra (default: 12, max: 32)"
    )
    run_parser.add_argument("--jet-order", type=int, default=2, help="Coordinate degree of the jets (default: 2)")
    run_parser.add_argument("--format", choices=["json", "text"], default="json", help="Report format")
    run_parser.add_argument("--fail-fast", action="store_true", help="Stop at the first failing row")
    run_parser.add_argument(
        "--q-psi-variant",
        choices=["appendixB", "section4"],
        default="appendixB",
        help="Quadratic gravitino term to use (default: appendixB)",
    )
    run_parser.add_argument(
        "--disable-l-correction",
        action="store_true",
        help="Drop the connection correction term; the master equation should then fail",
    )
    run_parser.add_argument("--timing", action="store_true", help="Record per-row elapsed time")
    run_parser.add_argument(
        "--profile", choices=["sparse", "dense"], default="sparse", help="Sampling profile (default: sparse)"
    )
    run_parser.add_argument("--store", action="store_true", help="Record the run in the database")
    run_parser.set_defaults(func=cmd_run)

    # Stats command
    stats_parser = subparsers.add_parser("stats", help="Show stored run statistics")
    stats_parser.set_defaults(func=cmd_stats)

    # Dump-config command
    dump_parser = subparsers.add_parser("dump-config", help="Write a configuration fixture for a seed")
    dump_parser.add_argument("--seed", type=int, default=0, help="Sampling seed (default: 0)")
    dump_parser.add_argument("--jet-order", type=int, default=2, help="Coordinate degree of the jets (default: 2)")
    dump_parser.add_argument("--odd-generators", type=int, default=12, help="Size of the Grassmann algebra")
    dump_parser.add_argument("--profile", choices=["sparse", "dense"], default="sparse", help="Sampling profile")
    dump_parser.add_argument("--output", "-o", help="Fixture path (default: stdout)")
    dump_parser.set_defaults(func=cmd_dump_config)

    # Ranks command
    ranks_parser = subparsers.add_parser("ranks", help="Print the certified rank table")
    ranks_parser.add_argument("--seed", type=int, default=0, help="Seed of the sampled vielbein (default: 0)")
    ranks_parser.set_defaults(func=cmd_ranks)

    args = parser.parse_args()
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    if args.command == "run" and args.suite is None:
        args.suite = ["all"]
    result: int = args.func(args)
    return result


if __name__ == "__main__":
    sys.exit(main())
