"""Run selected suites over seeded cases and render the report stream."""

from __future__ import annotations

import hashlib
import json
import logging
import time

from sugra_bv_verifier.bv_engine import EngineOptions, QPsiVariant
from sugra_bv_verifier.errors import ConfigError, VerifierError
from sugra_bv_verifier.models import CheckResult, Residual, ResidualReport, RunConfig, Status
from sugra_bv_verifier.suites import SUITES, CaseContext

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG_ERROR = 2

DEGREE_TWO_GAP_CHECKS = frozenset(f"cme.{name}.deg2" for name in ("omega", "psi", "c"))
DEGREE_TWO_GAP_NOTE = "Q squared at antifield degree 2 on omega, psi and c is reported but not verified"


def case_seed(run_seed: int, suite: str, index: int) -> int:
    """Stable 63-bit seed for one case of one suite."""
    digest = hashlib.blake2b(f"{run_seed}:{suite}:{index}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def engine_options(config: RunConfig) -> EngineOptions:
    """Engine switches selected by a run configuration."""
    return EngineOptions(
        q_psi_variant=QPsiVariant(config.q_psi_variant),
        l_correction=not config.disable_l_correction,
    )


def _result(suite: str, seed: int, row: Residual, elapsed_ms: int) -> CheckResult:
    return CheckResult(
        suite=suite,
        case_seed=seed,
        check_id=row.check_id,
        anchor=row.anchor,
        status=row.status,
        required=row.required,
        witness=row.witness,
        elapsed_ms=elapsed_ms,
        note=row.note,
        expect_witness=row.expect_witness,
    )


def _log_row(result: CheckResult) -> None:
    if result.passed:
        if result.status is Status.WITNESS and not result.expect_witness:
            logger.warning("%s/%s reported a witness (not required)", result.suite, result.check_id)
        return
    logger.error("%s/%s failed on case %d", result.suite, result.check_id, result.case_seed)


def run_suite(config: RunConfig) -> tuple[int, list[CheckResult]]:
    """Execute the selected suites.

    Args:
        config: Run parameters.

    Returns:
        Exit code (0 when every required row passes, 1 otherwise) and the ordered results.

    Raises:
        ConfigError: If the configuration is rejected before any work starts.
    """
    names = config.validate()
    options = engine_options(config)
    results: list[CheckResult] = []
    for name in names:
        suite = SUITES[name]
        cases = config.cases if suite.seeded else 1
        logger.info("Running %s over %d case(s)", name, cases)
        for index in range(cases):
            seed = case_seed(config.seed, name, index)
            ctx = CaseContext(seed, config.odd_generators, config.jet_order, config.profile, options)
            start = time.perf_counter()
            try:
                rows = suite.run(ctx)
            except ConfigError:
                raise
            except VerifierError as exc:
                logger.error("%s case %d raised %s", name, seed, exc)
                results.append(_error_result(name, seed, suite.description, str(exc)))
                if config.fail_fast:
                    return EXIT_FAILURE, results
                continue
            elapsed = int((time.perf_counter() - start) * 1000) if config.timing else 0
            report = ResidualReport(name, seed, rows, elapsed)
            per_row = report.elapsed_ms // max(len(report.residuals), 1)
            logger.debug("%s case %d: %d rows in %d ms", name, seed, len(rows), elapsed)
            for row in report.residuals:
                result = _result(report.suite, report.case_seed, row, per_row)
                results.append(result)
                _log_row(result)
                if config.fail_fast and not result.passed:
                    return EXIT_FAILURE, results
        logger.info("Finished %s", name)
    if "cme" in names:
        logger.warning("Scope: %s", DEGREE_TWO_GAP_NOTE)
    failed = sum(1 for r in results if not r.passed)
    logger.info("Ran %d checks, %d failed", len(results), failed)
    return (EXIT_FAILURE if failed else EXIT_OK), results


def _error_result(suite: str, seed: int, anchor: str, message: str) -> CheckResult:
    """A failed row for a case whose evaluation raised."""
    return CheckResult(
        suite=suite,
        case_seed=seed,
        check_id=f"{suite}.error",
        anchor=anchor,
        status=Status.WITNESS,
        required=True,
        note=message,
    )


def emit_report(results: list[CheckResult], fmt: str = "json") -> str:
    """Render results as JSON lines or a text table.

    Args:
        results: Ordered check results.
        fmt: ``json`` for one object per line, ``text`` for a summary table.

    Returns:
        The report; identical inputs give identical text.
    """
    if fmt == "json":
        return "".join(json.dumps(r.to_dict()) + "\n" for r in results)
    header = f"{'suite':<18} {'case':>20} {'check':<42} {'status':<10} {'pass':<4} note"
    lines = [header, "-" * len(header)]
    for r in results:
        verdict = "ok" if r.passed else "FAIL"
        lines.append(
            f"{r.suite:<18} {r.case_seed:>20} {r.check_id:<42} {r.status!s:<10} {verdict:<4} {r.note or ''}".rstrip()
        )
    if any(r.check_id in DEGREE_TWO_GAP_CHECKS for r in results):
        lines.append(f"scope: {DEGREE_TWO_GAP_NOTE}")
    failed = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results)} checks, {failed} failed")
    return "\n".join(lines) + "\n"
