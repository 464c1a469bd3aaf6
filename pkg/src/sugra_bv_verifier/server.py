"""FastMCP server exposing the verification suites."""

import json
import logging
from pathlib import Path

from fastmcp import FastMCP

from sugra_bv_verifier.database import ResultDatabase
from sugra_bv_verifier.errors import VerifierError
from sugra_bv_verifier.field_content import sample_configuration
from sugra_bv_verifier.models import RunConfig
from sugra_bv_verifier.runner import run_suite
from sugra_bv_verifier.structure_maps import diagram_descriptors, isomorphism_descriptors, rank_certify
from sugra_bv_verifier.suites import SUITES

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

DEFAULT_DB_PATH = Path(__file__).parent.parent.parent / "data" / "sugra_bv_runs.db"

mcp = FastMCP(name="sugra-bv-verifier")

_database: ResultDatabase | None = None

MAX_CASES = 20


def get_database() -> ResultDatabase:
    """Get or initialise the database instance.

    Returns:
        ResultDatabase instance.
    """
    global _database
    if _database is None:
        db_path = Path(DEFAULT_DB_PATH)
        db_path.parent.mkdir(parents=True, exist_ok=True)
        _database = ResultDatabase(db_path)
    return _database


def _list_suites_impl() -> str:
    return json.dumps(
        {
            "suites": [
                {
                    "name": s.name,
                    "description": s.description,
                    "min_odd_generators": s.min_odd_generators,
                    "min_jet_order": s.min_jet_order,
                    "seeded": s.seeded,
                }
                for s in SUITES.values()
            ]
        },
        indent=2,
    )


def _run_verification_impl(
    suites: list[str] | None = None,
    seed: int = 0,
    cases: int = 1,
    odd_generators: int = 12,
    jet_order: int = 2,
    q_psi_variant: str = "appendixB",
    disable_l_correction: bool = False,
) -> str:
    """Core implementation of run_verification.

    Returns:
        JSON summary of the stored run with its failing rows.
    """
    config = RunConfig(
        suites=suites or ["all"],
        seed=seed,
        cases=min(max(1, cases), MAX_CASES),
        odd_generators=odd_generators,
        jet_order=jet_order,
        q_psi_variant=q_psi_variant,
        disable_l_correction=disable_l_correction,
    )
    try:
        exit_code, results = run_suite(config)
    except VerifierError as exc:
        return json.dumps(
            {
                "error": str(exc),
                "suggestion": "Use list_suites to see suite names and their minimum algebra sizes.",
            }
        )
    run_id = get_database().record_run(config, exit_code, results)
    logger.info("Stored run %d with %d checks", run_id, len(results))
    return json.dumps(
        {
            "run_id": run_id,
            "exit_code": exit_code,
            "check_count": len(results),
            "failed": [r.to_dict() for r in results if not r.passed],
        },
        indent=2,
    )


def _get_run_impl(run_id: int, suite: str | None = None, failed_only: bool = False) -> str:
    db = get_database()
    summary = db.get_run(run_id)
    if not summary:
        return json.dumps(
            {
                "error": f"Run not found: {run_id}",
                "suggestion": "Use run_verification to create a run.",
            }
        )
    checks = db.get_checks(run_id, suite=suite, failed_only=failed_only)
    return json.dumps(
        {
            "run_id": summary.run_id,
            "config": summary.config,
            "exit_code": summary.exit_code,
            "created_at": summary.created_at,
            "total_checks": summary.total_checks,
            "failed_checks": summary.failed_checks,
            "witness_checks": summary.witness_checks,
            "checks": [c.to_dict() for c in checks],
        },
        indent=2,
    )


def _certify_ranks_impl(seed: int = 0) -> str:
    e = sample_configuration(seed, jet_order=0).e
    rows = [rank_certify(d, e).to_dict() for d in (*diagram_descriptors(), *isomorphism_descriptors())]
    return json.dumps({"seed": seed, "maps": rows}, indent=2)


@mcp.tool()
def list_suites() -> str:
    """List the verification suites with the algebra size each one needs.

    Returns:
        JSON list of suites with name, description, minimum odd generators and
        minimum jet order.
    """
    return _list_suites_impl()


@mcp.tool()
def run_verification(
    suites: list[str] | None = None,
    seed: int = 0,
    cases: int = 1,
    odd_generators: int = 12,
    jet_order: int = 2,
    q_psi_variant: str = "appendixB",
    disable_l_correction: bool = False,
) -> str:
    """Run verification suites on seeded random configurations and store the result.

    Args:
        suites: Suite names (default: all). See list_suites.
        seed: Run seed; case seeds are derived from it.
        cases: Random cases per suite (default: 1, max: 20).
        odd_generators: Size of the Grassmann algebra (at most 32).
        jet_order: Coordinate degree of the sampled jets.
        q_psi_variant: Quadratic gravitino term, 'appendixB' or 'section4'.
        disable_l_correction: Drop the correction term of the connection, which should
                              make the master equation fail.

    Returns:
        JSON with the stored run id, exit code and every failing row.
    """
    return _run_verification_impl(
        suites, seed, cases, odd_generators, jet_order, q_psi_variant, disable_l_correction
    )


@mcp.tool()
def get_run(run_id: int, suite: str | None = None, failed_only: bool = False) -> str:
    """Read a stored run.

    Args:
        run_id: Identifier returned by run_verification.
        suite: Optional suite filter.
        failed_only: Return only rows that fail the run.

    Returns:
        JSON with run parameters, counts and check rows, or an error message.
    """
    return _get_run_impl(run_id, suite, failed_only)


@mcp.tool()
def certify_ranks(seed: int = 0) -> str:
    """Certify the ranks of the coframe maps at a random invertible vielbein.

    Args:
        seed: Seed of the sampled vielbein.

    Returns:
        JSON rank table with domain and codomain dimensions, rank and whether the
        injectivity and surjectivity pattern matches the expected one.
    """
    return _certify_ranks_impl(seed)


def run_server() -> None:
    """Run the MCP server with STDIO transport."""
    mcp.run(transport="stdio")


if __name__ == "__main__":
    run_server()
