"""Tests for the command-line interface."""

import json
import tempfile
from pathlib import Path

import pytest

from sugra_bv_verifier import cli
from sugra_bv_verifier.database import ResultDatabase
from sugra_bv_verifier.fixtures import load_configuration, load_rank_table


def _main(monkeypatch: pytest.MonkeyPatch, *argv: str) -> int:
    monkeypatch.setattr("sys.argv", ["sugra-bv-verify", *argv])
    return cli.main()


def test_run_prints_json_lines(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    """Test the run command writes one JSON object per check."""
    code = _main(monkeypatch, "run", "--suite", "gamma_identities", "--odd-generators", "6", "--jet-order", "0")
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines
    assert all(json.loads(line)["suite"] == "gamma_identities" for line in lines)


def test_run_rejects_small_algebra(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    """Test an under-provisioned algebra exits with code 2 and no report."""
    code = _main(monkeypatch, "run", "--suite", "fierz", "--odd-generators", "6")
    assert code == 2
    assert capsys.readouterr().out == ""


def test_run_stores_in_database(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    """Test --store records the run in the selected database."""
    with tempfile.NamedTemporaryFile(suffix=".db", delete=False) as f:
        db_path = Path(f.name)
    try:
        code = _main(
            monkeypatch,
            "--database",
            str(db_path),
            "run",
            "-s",
            "gamma_identities",
            "--odd-generators",
            "6",
            "--jet-order",
            "0",
            "--format",
            "text",
            "--store",
        )
        assert code == 0
        assert "checks, 0 failed" in capsys.readouterr().out
        assert ResultDatabase(db_path).get_run_count() == 1
        assert _main(monkeypatch, "--database", str(db_path), "stats") == 0
    finally:
        db_path.unlink()


def test_stats_without_database(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Test stats fails when the database does not exist."""
    assert _main(monkeypatch, "--database", str(tmp_path / "missing.db"), "stats") == 1


def test_dump_config(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    """Test dump-config writes a loadable fixture."""
    output = tmp_path / "case.md"
    code = _main(
        monkeypatch, "dump-config", "--seed", "6", "--jet-order", "1", "--odd-generators", "8", "-o", str(output)
    )
    assert code == 0
    assert load_configuration(output.read_text(encoding="utf-8")).seed == 6


def test_ranks(monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]) -> None:
    """Test the rank table prints every map and exits cleanly."""
    code = _main(monkeypatch, "ranks", "--seed", "2")
    seed, rows = load_rank_table(capsys.readouterr().out)
    assert code == 0
    assert seed == 2
    assert len(rows) == 25
