"""Tests for the MCP tool implementations."""

import json
import tempfile
from collections.abc import Iterator
from pathlib import Path

import pytest

from sugra_bv_verifier import server
from sugra_bv_verifier.database import ResultDatabase


@pytest.fixture
def temp_db(monkeypatch: pytest.MonkeyPatch) -> Iterator[ResultDatabase]:
    """Point the server at a temporary database."""
    with tempfile.NamedTemporaryFile(suffix=".db", delete=False) as f:
        db_path = Path(f.name)
    db = ResultDatabase(db_path)
    monkeypatch.setattr(server, "_database", db)
    yield db
    db_path.unlink()


def test_list_suites() -> None:
    """Test every suite is listed with its requirements."""
    suites = json.loads(server._list_suites_impl())["suites"]
    names = [s["name"] for s in suites]
    assert "cme" in names
    assert next(s for s in suites if s["name"] == "fierz")["min_odd_generators"] == 8


def test_run_and_fetch(temp_db: ResultDatabase) -> None:
    """Test a run is stored and can be fetched back."""
    result = json.loads(server._run_verification_impl(["gamma_identities"], odd_generators=6, jet_order=0))
    assert result["exit_code"] == 0
    assert result["failed"] == []

    fetched = json.loads(server._get_run_impl(result["run_id"]))
    assert fetched["total_checks"] == result["check_count"]
    assert fetched["config"]["suites"] == ["gamma_identities"]
    assert temp_db.get_run_count() == 1


def test_run_rejects_bad_config(temp_db: ResultDatabase) -> None:
    """Test configuration errors come back as an error with a suggestion."""
    result = json.loads(server._run_verification_impl(["unknown"]))
    assert "error" in result
    assert "list_suites" in result["suggestion"]
    assert temp_db.get_run_count() == 0


def test_get_missing_run(temp_db: ResultDatabase) -> None:
    """Test an unknown run identifier gives an error."""
    del temp_db
    assert "error" in json.loads(server._get_run_impl(42))


def test_certify_ranks() -> None:
    """Test the rank table covers the diagram and the isomorphisms."""
    table = json.loads(server._certify_ranks_impl(seed=3))
    assert table["seed"] == 3
    assert len(table["maps"]) == 25
    assert all(row["matches"] for row in table["maps"])
