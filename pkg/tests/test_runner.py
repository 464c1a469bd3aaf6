"""Tests for suite selection, the case runner and the report stream."""

import json

import pytest

from sugra_bv_verifier.errors import ConfigError
from sugra_bv_verifier.models import CheckResult, RunConfig, Status, Witness
from sugra_bv_verifier.runner import (
    DEGREE_TWO_GAP_NOTE,
    EXIT_FAILURE,
    EXIT_OK,
    case_seed,
    emit_report,
    engine_options,
    run_suite,
)
from sugra_bv_verifier.suites import SUITES, resolve_suites


def test_case_seed_is_stable() -> None:
    """Test case seeds depend only on the run seed, suite and index."""
    assert case_seed(1, "flip", 0) == case_seed(1, "flip", 0)
    assert case_seed(1, "flip", 0) != case_seed(1, "flip", 1)
    assert case_seed(1, "flip", 0) != case_seed(2, "flip", 0)
    assert 0 <= case_seed(7, "cme", 3) < 2**63


def test_resolve_all_suites() -> None:
    """Test ``all`` expands to every registered suite in order."""
    assert [s.name for s in resolve_suites(["all"])] == list(SUITES)
    assert [s.name for s in resolve_suites(["fierz"])] == ["fierz"]


def test_validate_unknown_suite() -> None:
    """Test an unknown suite name is a configuration error."""
    with pytest.raises(ConfigError, match="Unknown suite"):
        RunConfig(suites=["nope"]).validate()


@pytest.mark.parametrize(
    ("overrides", "message"),
    [
        ({"suites": ["fierz"], "odd_generators": 6}, "odd-generators"),
        ({"suites": ["cme"], "jet_order": 1}, "jet-order"),
        ({"format": "xml"}, "format"),
        ({"q_psi_variant": "other"}, "q_psi_variant"),
        ({"profile": "medium"}, "profile"),
        ({"odd_generators": 40}, "odd generators"),
        ({"cases": 0}, "cases"),
    ],
)
def test_validate_rejects(overrides: dict[str, object], message: str) -> None:
    """Test under-provisioned or malformed configurations are refused."""
    with pytest.raises(ConfigError, match=message):
        RunConfig(**overrides).validate()  # type: ignore[arg-type]


def test_validate_returns_registry_order() -> None:
    """Test selected suites come back in registry order."""
    config = RunConfig(suites=["splittings", "flip"], jet_order=0, odd_generators=8)
    assert config.validate() == ["flip", "splittings"]


def test_engine_options_follow_config() -> None:
    """Test the run switches reach the engine."""
    options = engine_options(RunConfig(q_psi_variant="section4", disable_l_correction=True))
    assert str(options.q_psi_variant) == "section4"
    assert not options.l_correction


def test_run_gamma_identities() -> None:
    """Test an unseeded suite runs once and passes."""
    code, results = run_suite(RunConfig(suites=["gamma_identities"], cases=3, odd_generators=6, jet_order=0))
    assert code == EXIT_OK
    assert len({r.case_seed for r in results}) == 1
    assert all(r.passed for r in results)


def test_run_is_deterministic() -> None:
    """Test equal configurations give byte-identical reports."""
    config = RunConfig(suites=["flip"], cases=2, seed=11, odd_generators=8, jet_order=0)
    _, first = run_suite(config)
    _, second = run_suite(config)
    assert emit_report(first) == emit_report(second)


def test_run_diagram_ranks() -> None:
    """Test the rank suite certifies every arrow."""
    code, results = run_suite(RunConfig(suites=["diagram_ranks"], cases=1, odd_generators=6, jet_order=0))
    assert code == EXIT_OK
    assert all(r.status is Status.EXACT_ZERO for r in results)


def _witness_row(*, required: bool, expect_witness: bool = False) -> CheckResult:
    return CheckResult(
        suite="cme",
        case_seed=3,
        check_id="cme.e.deg0",
        anchor="Q squared, antifield degree 0",
        status=Status.WITNESS,
        required=required,
        witness=Witness("cme.e.deg0", "0", [0, 0, 0, 0], [1, 2], "1/2"),
        expect_witness=expect_witness,
    )


def test_passed_semantics() -> None:
    """Test required rows fail on a witness unless a witness is expected."""
    assert not _witness_row(required=True).passed
    assert _witness_row(required=False).passed
    assert _witness_row(required=True, expect_witness=True).passed


def test_json_report() -> None:
    """Test the JSON stream has one object per row with the report keys."""
    lines = emit_report([_witness_row(required=True)]).splitlines()
    assert len(lines) == 1
    row = json.loads(lines[0])
    assert row["status"] == "witness"
    assert row["witness"]["coefficient"] == "1/2"
    assert set(row) >= {"suite", "case_seed", "check_id", "paper_anchor", "status", "elapsed_ms"}


def test_text_report_summary() -> None:
    """Test the text table ends with the failure count."""
    text = emit_report([_witness_row(required=True), _witness_row(required=False)], fmt="text")
    assert text.splitlines()[-1] == "2 checks, 1 failed"
    assert "FAIL" in text


def test_exit_code_on_failure(monkeypatch: pytest.MonkeyPatch) -> None:
    """Test a failing required row gives exit code 1 and fail-fast stops early."""
    from sugra_bv_verifier import suites
    from sugra_bv_verifier.models import Residual

    def failing(ctx: suites.CaseContext) -> list[Residual]:
        del ctx
        return [Residual("x.a", "a", Witness("x", "0", [], [], "1")), Residual("x.b", "b")]

    patched = suites.Suite("gamma_identities", "patched", 1, 0, failing, seeded=False)
    monkeypatch.setitem(suites.SUITES, "gamma_identities", patched)
    code, results = run_suite(RunConfig(suites=["gamma_identities"], odd_generators=6, jet_order=0, fail_fast=True))
    assert code == EXIT_FAILURE
    assert [r.check_id for r in results] == ["x.a"]


def test_flip_suite_covers_every_parity_pattern() -> None:
    """Test five default cases give fifty pairs for each of the four parity patterns."""
    config = RunConfig(suites=["flip"], seed=2, odd_generators=8, jet_order=0)
    code, results = run_suite(config)
    assert code == EXIT_OK
    for pattern in ("odd-odd", "odd-even", "even-odd", "even-even"):
        pairs = {(r.case_seed, r.check_id.rsplit(":", 1)[1]) for r in results if f":{pattern}:" in r.check_id}
        assert len(pairs) == 50


def test_fierz_suite_draws_twenty_five_tuples() -> None:
    """Test the default run draws twenty-five Fierz tuples, each with required lemma relations."""
    config = RunConfig(suites=["fierz"], seed=2, odd_generators=8, jet_order=0)
    code, results = run_suite(config)
    assert code == EXIT_OK
    second = [r for r in results if r.check_id.startswith("fierz:gamma3_gamma3:")]
    tuples = {(r.case_seed, r.check_id.rsplit(":", 1)[1]) for r in second}
    assert len(tuples) == 25
    relations = [r for r in results if ":relation:" in r.check_id]
    assert len(relations) == 50
    assert all(r.required for r in relations)


def test_text_report_states_degree_two_gap() -> None:
    """Test a report with unverified degree-2 rows carries the scope line above the summary."""
    row = CheckResult("cme", 3, "cme.psi.deg2", "Q squared, antifield degree 2", Status.WITNESS, False)
    lines = emit_report([row], fmt="text").splitlines()
    assert lines[-2] == f"scope: {DEGREE_TWO_GAP_NOTE}"
    assert lines[-1] == "1 checks, 0 failed"
    other = emit_report([_witness_row(required=True)], "text").splitlines()
    assert not any(line.startswith("scope:") for line in other)
