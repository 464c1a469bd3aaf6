"""Tests for the BV vector fields and their residual suites.

These run on a small algebra at jet order two; the full suites are exercised through the
runner tests and the command line.
"""

import pytest

from sugra_bv_verifier.bv_engine import (
    DEGREE_TWO_GAP,
    EngineOptions,
    QPsiVariant,
    algebra,
    closed_form_residuals_q0sq,
    cme_residual_suite,
    delta_chi_omega_closed_form,
    eom_all,
    epsilon_part,
    grading_residuals,
    lagrangian_density,
    negative_control_residuals,
    on_shell_row,
    q0_antifield_residuals,
    q0_fields_vector_field,
    q_squared,
    q_total_vector_field,
    qq_e,
    qq_squared_e_closed_form,
    qq_vector_field,
    quadratic_structure_residuals,
    s2_density,
    s2_line_controls,
    shifted_configuration,
    variational_residuals,
    vector_field_grading_residuals,
)
from sugra_bv_verifier.errors import InsufficientJetOrderError
from sugra_bv_verifier.exact_scalars import EPSILON_GENERATOR
from sugra_bv_verifier.field_content import BVConfiguration, sample_configuration
from sugra_bv_verifier.graded_fiber import Germ, infer_grading
from sugra_bv_verifier.models import Residual


@pytest.fixture(scope="module")
def config() -> BVConfiguration:
    """Sample a configuration with enough jets for second derivatives."""
    return sample_configuration(5, jet_order=2, odd_generators=8)


def _failing(rows: list[Residual]) -> list[str]:
    return [r.check_id for r in rows if r.required and not r.expect_witness and r.witness is not None]


def test_lagrangian_is_a_top_form(config: BVConfiguration) -> None:
    """Test the Lagrangian density has grading (4,4,0)."""
    assert infer_grading(lagrangian_density(config)) == (4, 4, 0)


def test_equations_of_motion(config: BVConfiguration) -> None:
    """Test the equations of motion have the gradings of their fields' duals."""
    eom = eom_all(config)
    assert set(eom) == {"e", "omega", "psi", "psi_reduced"}
    assert infer_grading(eom["omega"]) == (3, 2, 0)


def test_variational_rows_vanish(config: BVConfiguration) -> None:
    """Test the first variation matches the equations of motion up to boundary terms."""
    rows = variational_residuals(config, seed=5)
    assert {"variational.e", "variational.omega", "variational.psi"} <= {r.check_id for r in rows}
    assert _failing(rows) == []


def test_q0_squared_closed_forms(config: BVConfiguration) -> None:
    """Test Q0 squared on fields agrees with its closed forms."""
    rows = closed_form_residuals_q0sq(config)
    ids = {r.check_id for r in rows}
    assert {"q0sq.e", "q0sq.psi", "q0sq.omega", "q0sq.c", "q0sq.chi", "q0sq.xi", "derivation.e_psi"} <= ids
    assert _failing(rows) == []


def test_pure_gravity_rows_included(config: BVConfiguration) -> None:
    """Test the pure gravity nilpotency rows are part of the closed-form suite."""
    ids = [r.check_id for r in closed_form_residuals_q0sq(config)]
    assert [i for i in ids if i.startswith("qpc_sq.")] == ["qpc_sq.e", "qpc_sq.omega", "qpc_sq.c", "qpc_sq.xi"]


def test_q0_on_antifields_reduces_to_eom(config: BVConfiguration) -> None:
    """Test Q0 on the antifields without ghosts gives the equations of motion."""
    assert _failing(q0_antifield_residuals(config)) == []


def test_on_shell_needs_jet_order(config: BVConfiguration) -> None:
    """Test the on-shell row refuses a configuration below jet order three."""
    with pytest.raises(InsufficientJetOrderError):
        on_shell_row(config)


def test_master_equation(config: BVConfiguration) -> None:
    """Test Q squared vanishes on every field in each required antifield degree."""
    rows = cme_residual_suite(config)
    assert len(rows) == 18
    assert _failing(rows) == []
    optional = {r.check_id: r.note for r in rows if not r.required}
    assert set(optional) == {"cme.e.deg2", "cme.omega.deg2", "cme.psi.deg2", "cme.c.deg2"}
    assert all(optional[f"cme.{name}.deg2"] == DEGREE_TWO_GAP for name in ("omega", "psi", "c"))


def test_quadratic_structure(config: BVConfiguration) -> None:
    """Test the identities of the quadratic vector field."""
    rows = {r.check_id: r for r in quadratic_structure_residuals(config)}
    assert _failing(list(rows.values())) == []
    assert not rows["qq_sq.e"].required
    assert rows["qq_sq.e.closed_form"].required
    assert rows["qq_sq.e.closed_form"].witness is None


def test_qq_squared_on_e_matches_closed_form(config: BVConfiguration) -> None:
    """Test qq^2 e is nonzero at xi = 0 but equals -iota_phi e iota_phi(omega_check^2) / 16 after e^2 / 2."""
    no_xi = config.with_fields(xi=config.xi.scale(0))
    assert not q_squared(no_xi, "e", qq_vector_field()).is_zero()
    assert qq_squared_e_closed_form(no_xi).is_zero()


def test_section4_variant_runs(config: BVConfiguration) -> None:
    """Test the alternative gravitino component produces the same rows."""
    options = EngineOptions(q_psi_variant=QPsiVariant.SECTION4)
    rows = cme_residual_suite(config, options)
    assert [r.check_id for r in rows] == [r.check_id for r in cme_residual_suite(config)]


def test_negative_controls_fail(config: BVConfiguration) -> None:
    """Test every perturbed vector field leaves a witness."""
    rows = negative_control_residuals(config)
    assert len(rows) == 11
    assert all(r.expect_witness for r in rows)
    assert [r.check_id for r in rows if r.witness is None] == []


def test_gradings(config: BVConfiguration) -> None:
    """Test coordinates and vector field outputs carry their declared gradings."""
    rows = grading_residuals(config)
    rows.extend(vector_field_grading_residuals(config, q_total_vector_field()))
    assert _failing(rows) == []


@pytest.mark.parametrize("line", [1, 2, 3, 4, 5, 6])
def test_each_quadratic_action_line_is_needed(config: BVConfiguration, line: int) -> None:
    """Test knocking out one line of the quadratic action leaves a degree-1 witness in Q squared."""
    (row,) = s2_line_controls(config, (line,))
    assert row.check_id == f"negative.s2_line.{line}"
    assert row.expect_witness
    assert row.witness is not None


def test_knockouts_remove_s2_lines(config: BVConfiguration) -> None:
    """Test the density without a line differs from the full one and dropping every line leaves zero."""
    full = s2_density(config)
    assert not (full - s2_density(config, EngineOptions(s2_drop=frozenset({1})))).is_zero()
    assert s2_density(config, EngineOptions(s2_drop=frozenset(range(1, 7)))).is_zero()
    assert qq_e(config, EngineOptions(s2_drop=frozenset({1}))).is_zero()


def test_delta_chi_omega_closed_form_is_exact(config: BVConfiguration) -> None:
    """Test the frame formula for delta_chi omega matches the linear solve and is required."""
    rows = {r.check_id: r for r in closed_form_residuals_q0sq(config)}
    assert rows["delta_chi_omega.closed_form"].required
    assert rows["delta_chi_omega.closed_form"].witness is None
    assert not rows["delta_chi_omega.printed"].required
    bare = config.antifields_zero()
    assert (delta_chi_omega_closed_form(bare) - algebra(bare).delta_chi_omega).is_zero()


def test_phi_accepts_shifted_ghost(config: BVConfiguration) -> None:
    """Test phi evaluates on a configuration whose chi carries the shift generator."""
    shifted = shifted_configuration(config.antifields_zero(), q0_fields_vector_field())
    assert not epsilon_part(shifted.chi).is_zero()
    phi = shifted.phi
    eps = Germ.generator(EPSILON_GENERATOR)
    assert (phi - epsilon_part(phi).map(lambda g: eps * g) - config.phi).is_zero()
