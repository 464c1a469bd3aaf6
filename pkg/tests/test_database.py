"""Tests for database operations."""

import tempfile
from collections.abc import Iterator
from pathlib import Path

import pytest

from sugra_bv_verifier.database import ResultDatabase
from sugra_bv_verifier.models import CheckResult, RunConfig, Status, Witness


@pytest.fixture
def temp_db() -> Iterator[ResultDatabase]:
    """Create a temporary database for testing."""
    with tempfile.NamedTemporaryFile(suffix=".db", delete=False) as f:
        db_path = Path(f.name)
    db = ResultDatabase(db_path)
    yield db
    db_path.unlink()


def _results() -> list[CheckResult]:
    return [
        CheckResult("flip", 2**62 + 5, "flip:n=1:odd/odd", "Majorana flip relations", Status.EXACT_ZERO, True),
        CheckResult(
            "cme",
            17,
            "cme.e.deg0",
            "Q squared, antifield degree 0",
            Status.WITNESS,
            True,
            witness=Witness("cme.e.deg0", "0", [1, 0, 0, 0], [1, 4], "-1/3"),
            note="sample note",
        ),
        CheckResult(
            "negative_controls",
            17,
            "negative.no_l_correction",
            "Negative control",
            Status.WITNESS,
            True,
            witness=Witness("negative.no_l_correction", "2", [0, 0, 0, 0], [3], "1"),
            expect_witness=True,
        ),
    ]


def test_record_and_get_run(temp_db: ResultDatabase) -> None:
    """Test a recorded run is summarised with its counts."""
    run_id = temp_db.record_run(RunConfig(seed=3), 1, _results())
    summary = temp_db.get_run(run_id)

    assert summary is not None
    assert summary.exit_code == 1
    assert summary.config["seed"] == 3
    assert summary.total_checks == 3
    assert summary.failed_checks == 1
    assert summary.witness_checks == 2


def test_get_missing_run(temp_db: ResultDatabase) -> None:
    """Test an unknown run identifier returns None."""
    assert temp_db.get_run(99) is None


def test_checks_keep_order_and_witness(temp_db: ResultDatabase) -> None:
    """Test stored rows come back in order with their witnesses."""
    run_id = temp_db.record_run(RunConfig(), 1, _results())
    checks = temp_db.get_checks(run_id)

    assert [c.check_id for c in checks] == [r.check_id for r in _results()]
    assert checks[0].case_seed == 2**62 + 5
    assert checks[1].witness is not None
    assert checks[1].witness.monomial == [1, 4]
    assert checks[1].note == "sample note"
    assert checks[2].expect_witness
    assert checks[2].passed


def test_check_filters(temp_db: ResultDatabase) -> None:
    """Test filtering by suite and by failure."""
    run_id = temp_db.record_run(RunConfig(), 1, _results())

    assert [c.suite for c in temp_db.get_checks(run_id, suite="flip")] == ["flip"]
    assert [c.check_id for c in temp_db.get_checks(run_id, failed_only=True)] == ["cme.e.deg0"]


def test_list_runs_newest_first(temp_db: ResultDatabase) -> None:
    """Test runs are listed most recent first."""
    first = temp_db.record_run(RunConfig(seed=1), 0, [])
    second = temp_db.record_run(RunConfig(seed=2), 0, [])

    assert [s.run_id for s in temp_db.list_runs()] == [second, first]
    assert temp_db.list_runs(limit=1)[0].total_checks == 0


def test_clear_and_count(temp_db: ResultDatabase) -> None:
    """Test clearing removes every run."""
    temp_db.record_run(RunConfig(), 0, _results())
    assert temp_db.get_run_count() == 1

    temp_db.clear()

    assert temp_db.get_run_count() == 0
