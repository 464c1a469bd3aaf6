"""Data models for verification runs."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import StrEnum
from typing import Any

from sugra_bv_verifier.errors import ConfigError
from sugra_bv_verifier.exact_scalars import MAX_ODD_GENERATORS


class Status(StrEnum):
    """Outcome of a single identity check."""

    EXACT_ZERO = "exact_zero"
    WITNESS = "witness"


@dataclass(frozen=True)
class Witness:
    """A concrete nonzero coefficient demonstrating that a residual does not vanish."""

    field: str
    component: str
    derivative_index: list[int]
    monomial: list[int]
    coefficient: str

    def to_dict(self) -> dict[str, Any]:
        """Serialise to a JSON-compatible dict."""
        return asdict(self)


@dataclass
class Residual:
    """Result of evaluating one identity: exact zero or a witness."""

    check_id: str
    anchor: str
    witness: Witness | None = None
    required: bool = True
    note: str | None = None
    expect_witness: bool = False

    @property
    def status(self) -> Status:
        """Exact zero when no witness was found."""
        return Status.EXACT_ZERO if self.witness is None else Status.WITNESS


@dataclass
class ResidualReport:
    """All residuals of one suite evaluated on one case."""

    suite: str
    case_seed: int
    residuals: list[Residual] = field(default_factory=list)
    elapsed_ms: int = 0


@dataclass
class CheckResult:
    """One row of the report stream."""

    suite: str
    case_seed: int
    check_id: str
    anchor: str
    status: Status
    required: bool
    witness: Witness | None = None
    elapsed_ms: int = 0
    note: str | None = None
    expect_witness: bool = False

    @property
    def passed(self) -> bool:
        """True when the row does not fail the run.

        Negative controls pass only when they produce a witness; other required rows pass
        on an exact zero.
        """
        if not self.required:
            return True
        if self.expect_witness:
            return self.status is Status.WITNESS
        return self.status is Status.EXACT_ZERO

    def to_dict(self) -> dict[str, Any]:
        """Serialise to the report schema."""
        out: dict[str, Any] = {
            "suite": self.suite,
            "case_seed": self.case_seed,
            "check_id": self.check_id,
            "paper_anchor": self.anchor,
            "status": str(self.status),
            "required": self.required,
        }
        if self.expect_witness:
            out["expect_witness"] = True
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        if self.note:
            out["note"] = self.note
        out["elapsed_ms"] = self.elapsed_ms
        return out


@dataclass
class RunConfig:
    """Parameters of one verification run."""

    suites: list[str] = field(default_factory=lambda: ["all"])
    seed: int = 0
    cases: int = 5
    odd_generators: int = 12
    jet_order: int = 2
    format: str = "json"
    fail_fast: bool = False
    q_psi_variant: str = "appendixB"
    disable_l_correction: bool = False
    timing: bool = False
    profile: str = "sparse"

    def to_dict(self) -> dict[str, Any]:
        """Serialise to a JSON-compatible dict."""
        return asdict(self)

    def validate(self) -> list[str]:
        """Resolve suite names and check the algebra is large enough for each of them.

        Returns:
            The suite names to run, in registry order.

        Raises:
            ConfigError: For unknown names, unknown switches or an under-provisioned algebra.
        """
        from sugra_bv_verifier.suites import SUITES

        unknown = [name for name in self.suites if name != "all" and name not in SUITES]
        if unknown:
            msg = f"Unknown suite(s) {', '.join(unknown)}; choose from all, {', '.join(SUITES)}"
            raise ConfigError(msg)
        if self.format not in ("json", "text"):
            msg = f"Unknown format '{self.format}'; use json or text"
            raise ConfigError(msg)
        if self.q_psi_variant not in ("appendixB", "section4"):
            msg = f"Unknown q_psi_variant '{self.q_psi_variant}'; use appendixB or section4"
            raise ConfigError(msg)
        if self.profile not in ("sparse", "dense"):
            msg = f"Unknown profile '{self.profile}'; use sparse or dense"
            raise ConfigError(msg)
        if self.odd_generators > MAX_ODD_GENERATORS:
            msg = f"At most {MAX_ODD_GENERATORS} odd generators are supported, got {self.odd_generators}"
            raise ConfigError(msg)
        if self.cases < 1:
            msg = f"cases must be at least 1, got {self.cases}"
            raise ConfigError(msg)
        names = list(SUITES) if "all" in self.suites else [n for n in SUITES if n in self.suites]
        for name in names:
            suite = SUITES[name]
            if self.odd_generators < suite.min_odd_generators:
                msg = f"Suite {name} needs --odd-generators >= {suite.min_odd_generators}, got {self.odd_generators}"
                raise ConfigError(msg)
            if self.jet_order < suite.min_jet_order:
                msg = f"Suite {name} needs --jet-order >= {suite.min_jet_order}, got {self.jet_order}"
                raise ConfigError(msg)
        return names


@dataclass
class RunSummary:
    """A stored run with its aggregate counts."""

    run_id: int
    config: dict[str, Any]
    exit_code: int
    created_at: str
    total_checks: int
    failed_checks: int
    witness_checks: int
