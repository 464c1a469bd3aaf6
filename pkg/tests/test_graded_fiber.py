"""Tests for the graded fibre calculus."""

import pytest

from sugra_bv_verifier.errors import GradingMismatchError, InsufficientJetOrderError, UnsupportedTargetError
from sugra_bv_verifier.exact_scalars import GaussianRational, GrassmannElement
from sugra_bv_verifier.field_content import constant_configuration, sample_configuration
from sugra_bv_verifier.graded_fiber import (
    Germ,
    JetField,
    Target,
    check_v_gamma_powers,
    coframe_divide,
    covariant_d,
    curvature,
    dx,
    e_pair,
    eta_bracket,
    field_witness,
    gamma_field,
    infer_grading,
    iota_gamma_hat,
    iota_vector,
    jet_d,
    lie_covariant,
    majorana_bar_field,
    majorana_violation,
    rep_action,
    rho,
    unbar_field,
    v,
    vector_bracket,
    wedge,
)

THETA1 = GrassmannElement.generator(1)
THETA2 = GrassmannElement.generator(2)
THETA13 = GrassmannElement.monomial([1, 3])


def _odd_germ() -> Germ:
    return Germ({(1, 0, 0, 0): THETA1, (0, 1, 1, 0): THETA2, (0, 0, 0, 2): THETA1.scale(3)})


def _even_germ() -> Germ:
    return Germ(
        {(0, 0, 0, 0): GrassmannElement.scalar(2), (1, 1, 0, 0): THETA13, (0, 0, 1, 0): GrassmannElement.scalar(1)}
    )


def test_de_rham_squares_to_zero() -> None:
    """Test d d = 0 on a germ with enough jets."""
    assert _odd_germ().d().d().is_zero()
    assert _even_germ().d().d().is_zero()


def test_de_rham_leibniz() -> None:
    """Test the graded Leibniz rule for an odd left factor."""
    f, g = _odd_germ(), _even_germ()
    assert (f * g).d() == f.d() * g - f * g.d()


def test_de_rham_needs_jets() -> None:
    """Test d on a constant-only germ raises InsufficientJetOrderError."""
    with pytest.raises(InsufficientJetOrderError):
        Germ.constant(1, order=0).d()


def test_differentials_anticommute() -> None:
    """Test dx^0 dx^1 = -dx^1 dx^0."""
    a, b = JetField.scalar(dx(0)), JetField.scalar(dx(1))
    assert (wedge(a, b) + wedge(b, a)).is_zero()


def test_jet_field_shape_checked() -> None:
    """Test the entry count must fit the target."""
    with pytest.raises(GradingMismatchError):
        JetField(Target.SPINOR, [Germ()])


def test_wedge_of_vectors_unsupported() -> None:
    """Test vector fields have no wedge product."""
    xi = JetField.zero(Target.VECTOR)
    with pytest.raises(UnsupportedTargetError):
        wedge(xi, xi)


def test_gamma_hat_rejects_cospinor() -> None:
    """Test the gamma-hat contraction refuses cospinors."""
    config = sample_configuration(3, jet_order=1, odd_generators=8)
    with pytest.raises(UnsupportedTargetError):
        iota_gamma_hat(config.e_inv, majorana_bar_field(config.psi))


def test_bar_unbar_round_trip() -> None:
    """Test unbar inverts the Majorana bar."""
    config = sample_configuration(5, jet_order=1, odd_generators=8)
    assert (unbar_field(majorana_bar_field(config.psi)) - config.psi).is_zero()


def test_bianchi_identity() -> None:
    """Test d_omega F = 0 for a sampled connection."""
    config = sample_configuration(11, jet_order=2, odd_generators=8)
    assert covariant_d(config.omega, curvature(config.omega)).is_zero()


def test_d_of_constant_vanishes() -> None:
    """Test d of a constant field vanishes."""
    constant = JetField.scalar(Germ.constant(GrassmannElement.scalar(4), order=1))
    assert jet_d(constant).is_zero()


def test_vector_bracket_of_coordinate_fields() -> None:
    """Test [d_0, x^0 d_1] = d_1."""
    one = Germ.constant(1)
    zero = Germ()
    x0 = Germ({(1, 0, 0, 0): GrassmannElement.scalar(1)})
    bracket = vector_bracket(
        JetField(Target.VECTOR, [one, zero, zero, zero]), JetField(Target.VECTOR, [zero, x0, zero, zero])
    )
    expected = JetField(Target.VECTOR, [zero, one, zero, zero])
    assert (bracket - expected).is_zero()


def test_v_gamma_power_expansion() -> None:
    """Test the [v_a, gamma^N] expansion for N up to four."""
    rows = check_v_gamma_powers()
    assert [r.check_id for r in rows] == [f"gamma:v_a_power:{n}" for n in range(1, 5)]
    assert all(r.witness is None for r in rows)


def test_field_witness() -> None:
    """Test the witness records the first nonzero coefficient."""
    assert field_witness("zero", JetField.zero()) is None
    field = JetField.scalar(Germ({(0, 1, 0, 0): THETA13}))
    witness = field_witness("sample", field)
    assert witness is not None
    assert witness.derivative_index == [0, 1, 0, 0]
    assert witness.monomial == [1, 3]
    assert witness.coefficient == "1"


def test_infer_grading() -> None:
    """Test homogeneous fields report their grading and mixed ones raise."""
    assert infer_grading(JetField.scalar(dx(2))) == (1, 0, 0)
    mixed = JetField.scalar(dx(2) + Germ.constant(1))
    with pytest.raises(GradingMismatchError):
        infer_grading(mixed)


def test_eta_bracket_needs_scalar_side() -> None:
    """Test the eta-bracket of two spinor fields is rejected."""
    psi = JetField.zero(Target.SPINOR)
    with pytest.raises(GradingMismatchError):
        eta_bracket(psi, psi)


def test_rep_action_rejects_vector_fields() -> None:
    """Test the frame action is not defined on vector fields."""
    with pytest.raises(UnsupportedTargetError):
        rep_action(JetField.zero(), JetField.zero(Target.VECTOR))


def test_iota_vector_contracts_differential() -> None:
    """Test iota_{d_0} dx^0 = 1 and iota_{d_0} dx^1 = 0."""
    one, zero = Germ.constant(1), Germ()
    xi = JetField(Target.VECTOR, [one, zero, zero, zero])
    assert (iota_vector(xi, JetField.scalar(dx(0))) - JetField.scalar(one)).is_zero()
    assert iota_vector(xi, JetField.scalar(dx(1))).is_zero()
    with pytest.raises(GradingMismatchError):
        iota_vector(JetField.zero(), JetField.scalar(dx(0)))


def test_lie_covariant_of_zero_vector_vanishes() -> None:
    """Test the covariant Lie derivative along the zero vector field vanishes."""
    config = sample_configuration(13, jet_order=1, odd_generators=8)
    assert lie_covariant(JetField.zero(Target.VECTOR), config.omega, config.psi).is_zero()


def test_e_pair_on_flat_coframe() -> None:
    """Test the identity coframe pairs dx^2 with v_2."""
    flat = constant_configuration(odd_generators=8, jet_order=1)
    paired = e_pair(flat.e_inv, JetField.scalar(dx(2)))
    assert (paired - JetField.scalar(v(2))).is_zero()


def test_rho_keeps_form_coefficients() -> None:
    """Test a bivector carrying dx^0 maps to dx^0 times the spinor image of the bare bivector."""
    bivector = JetField.scalar(v(0) * v(1))
    form_valued = wedge(JetField.scalar(dx(0)), bivector)
    image = rho(form_valued)
    assert not image.is_zero()
    assert (image - wedge(JetField.scalar(dx(0)), rho(bivector))).is_zero()


def test_gamma_is_invariant_under_connection() -> None:
    """Test the frame and spinor parts of the action cancel on gamma^a v_a."""
    config = sample_configuration(3, jet_order=1, odd_generators=8)
    assert rep_action(config.omega, gamma_field()).is_zero()


def test_coframe_divide_inverts_wedge_with_e() -> None:
    """Test dividing e x by the coframe returns the (1,2)-form x."""
    config = sample_configuration(21, jet_order=1, odd_generators=8)
    x = config.omega
    recovered = coframe_divide(config.e, config.e_inv, wedge(config.e, x))
    assert (recovered - x).is_zero()


def test_majorana_check_ignores_shift_generator() -> None:
    """Test the shift generator does not count towards the star degree of a component."""
    shifted = Germ.constant(GrassmannElement.monomial([0, 1]))
    spinor = JetField(Target.SPINOR, [shifted, *(Germ() for _ in range(3))])
    assert majorana_violation(spinor) is None
    imaginary = JetField(Target.SPINOR, [shifted.scale(GaussianRational(0, 1)), *(Germ() for _ in range(3))])
    assert majorana_violation(imaginary) is not None
