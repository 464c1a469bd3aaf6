"""SQLite store for verification runs and their check rows."""

import json
import sqlite3
from collections.abc import Generator
from contextlib import contextmanager
from pathlib import Path
from typing import Any

from sugra_bv_verifier.models import CheckResult, RunConfig, RunSummary, Status, Witness


class ResultDatabase:
    """Manages the SQLite database of recorded runs."""

    def __init__(self, db_path: Path) -> None:
        """Initialise database with the given path.

        Args:
            db_path: Path to the SQLite database file.
        """
        self.db_path = db_path
        self._initialise_schema()

    @contextmanager
    def _get_connection(self) -> Generator[sqlite3.Connection, None, None]:
        """Context manager for database connections.

        Yields:
            SQLite connection with Row factory enabled.
        """
        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        try:
            yield conn
        finally:
            conn.close()

    def _initialise_schema(self) -> None:
        """Create database schema if it doesn't exist."""
        with self._get_connection() as conn:
            conn.executescript("""
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    config TEXT NOT NULL,
                    exit_code INTEGER NOT NULL,
                    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
                );

                CREATE TABLE IF NOT EXISTS checks (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL REFERENCES runs(id) ON DELETE CASCADE,
                    position INTEGER NOT NULL,
                    suite TEXT NOT NULL,
                    case_seed INTEGER NOT NULL,
                    check_id TEXT NOT NULL,
                    anchor TEXT NOT NULL,
                    status TEXT NOT NULL,
                    required INTEGER NOT NULL,
                    expect_witness INTEGER NOT NULL DEFAULT 0,
                    passed INTEGER NOT NULL,
                    witness TEXT,
                    note TEXT,
                    elapsed_ms INTEGER NOT NULL DEFAULT 0
                );

                CREATE INDEX IF NOT EXISTS idx_checks_run ON checks(run_id, position);
                CREATE INDEX IF NOT EXISTS idx_checks_suite ON checks(suite);
            """)
            conn.commit()

    def record_run(self, config: RunConfig, exit_code: int, results: list[CheckResult]) -> int:
        """Store a run and all of its rows.

        Args:
            config: Parameters the run was made with.
            exit_code: Exit code the run produced.
            results: Ordered check rows.

        Returns:
            Identifier of the new run.
        """
        with self._get_connection() as conn:
            cursor = conn.execute(
                "INSERT INTO runs (config, exit_code) VALUES (?, ?)",
                (json.dumps(config.to_dict(), sort_keys=True), exit_code),
            )
            run_id = int(cursor.lastrowid or 0)
            conn.executemany(
                """
                INSERT INTO checks (
                    run_id, position, suite, case_seed, check_id, anchor, status,
                    required, expect_witness, passed, witness, note, elapsed_ms
                )
                VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
                """,
                [
                    (
                        run_id,
                        position,
                        r.suite,
                        r.case_seed,
                        r.check_id,
                        r.anchor,
                        str(r.status),
                        int(r.required),
                        int(r.expect_witness),
                        int(r.passed),
                        json.dumps(r.witness.to_dict()) if r.witness else None,
                        r.note,
                        r.elapsed_ms,
                    )
                    for position, r in enumerate(results)
                ],
            )
            conn.commit()
            return run_id

    def _summary(self, conn: sqlite3.Connection, row: sqlite3.Row) -> RunSummary:
        counts = conn.execute(
            """
            SELECT
                COUNT(*) AS total,
                COALESCE(SUM(1 - passed), 0) AS failed,
                COALESCE(SUM(status = ?), 0) AS witnesses
            FROM checks WHERE run_id = ?
            """,
            (str(Status.WITNESS), row["id"]),
        ).fetchone()
        return RunSummary(
            run_id=row["id"],
            config=json.loads(row["config"]),
            exit_code=row["exit_code"],
            created_at=str(row["created_at"]),
            total_checks=int(counts["total"]),
            failed_checks=int(counts["failed"]),
            witness_checks=int(counts["witnesses"]),
        )

    def get_run(self, run_id: int) -> RunSummary | None:
        """Retrieve a run by identifier.

        Args:
            run_id: Identifier returned by :meth:`record_run`.

        Returns:
            RunSummary instance or None if not found.
        """
        with self._get_connection() as conn:
            row = conn.execute("SELECT * FROM runs WHERE id = ?", (run_id,)).fetchone()
            if row:
                return self._summary(conn, row)
            return None

    def list_runs(self, limit: int = 10) -> list[RunSummary]:
        """Most recent runs first."""
        with self._get_connection() as conn:
            rows = conn.execute("SELECT * FROM runs ORDER BY id DESC LIMIT ?", (limit,)).fetchall()
            return [self._summary(conn, row) for row in rows]

    def get_checks(self, run_id: int, suite: str | None = None, failed_only: bool = False) -> list[CheckResult]:
        """Rows of one run in their original order.

        Args:
            run_id: Run identifier.
            suite: Optional suite filter.
            failed_only: Keep only rows that fail the run.

        Returns:
            List of CheckResult instances.
        """
        sql = "SELECT * FROM checks WHERE run_id = ?"
        params: list[Any] = [run_id]
        if suite:
            sql += " AND suite = ?"
            params.append(suite)
        if failed_only:
            sql += " AND passed = 0"
        sql += " ORDER BY position"
        with self._get_connection() as conn:
            return [self._check(row) for row in conn.execute(sql, params).fetchall()]

    @staticmethod
    def _check(row: sqlite3.Row) -> CheckResult:
        witness = Witness(**json.loads(row["witness"])) if row["witness"] else None
        return CheckResult(
            suite=row["suite"],
            case_seed=row["case_seed"],
            check_id=row["check_id"],
            anchor=row["anchor"],
            status=Status(row["status"]),
            required=bool(row["required"]),
            witness=witness,
            elapsed_ms=row["elapsed_ms"],
            note=row["note"],
            expect_witness=bool(row["expect_witness"]),
        )

    def clear(self) -> None:
        """Delete every stored run."""
        with self._get_connection() as conn:
            conn.execute("DELETE FROM checks")
            conn.execute("DELETE FROM runs")
            conn.commit()

    def get_run_count(self) -> int:
        """Return the total number of stored runs.

        Returns:
            Count of runs in the database.
        """
        with self._get_connection() as conn:
            cursor = conn.execute("SELECT COUNT(*) FROM runs")
            result = cursor.fetchone()
            return int(result[0]) if result else 0
