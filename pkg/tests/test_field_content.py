"""Tests for the multiplet data model and sampling."""

from fractions import Fraction

import pytest

from sugra_bv_verifier.errors import ConfigError, EpsilonCollisionError, GradingMismatchError
from sugra_bv_verifier.field_content import (
    ANTIFIELDS,
    REGISTRY,
    FIELDS,
    BVConfiguration,
    FieldName,
    constant_configuration,
    generator_pools,
    grading_audit,
    inverse_vielbein_jets,
    invert_reparam,
    majorana_audit,
    on_shell_projection,
    phi_generator,
    sample_configuration,
    sample_variation,
)
from sugra_bv_verifier.graded_fiber import Germ, covariant_d, gamma_field, germ_component, majorana_bar_field, wedge


@pytest.fixture
def config() -> BVConfiguration:
    """Sample a small configuration."""
    return sample_configuration(42, jet_order=1, odd_generators=8)


def test_sampling_is_deterministic() -> None:
    """Test equal seeds give equal configurations."""
    a = sample_configuration(9, jet_order=1, odd_generators=8)
    b = sample_configuration(9, jet_order=1, odd_generators=8)
    for name in FieldName:
        assert (a[name] - b[name]).is_zero()


def test_sampled_gradings_and_majorana(config: BVConfiguration) -> None:
    """Test every coordinate has its declared grading and spinors are Majorana."""
    assert all(grading_audit(config).values())
    assert all(majorana_audit(config).values())


@pytest.mark.parametrize("profile", ["sparse", "dense"])
def test_profiles_sample(profile: str) -> None:
    """Test both sampling profiles give audited configurations."""
    sample = sample_configuration(4, jet_order=1, odd_generators=8, profile=profile)
    assert all(grading_audit(sample).values())


def test_generator_pools() -> None:
    """Test the pools are disjoint, avoid generator 0 and cover the algebra."""
    pools = generator_pools(12)
    used = [*pools.psi, *pools.ghosts, *pools.antifields]
    assert len(used) == len(set(used))
    assert 0 not in used
    assert sorted(used) == list(range(1, 12))


@pytest.mark.parametrize("n", [5, 33])
def test_generator_pools_bounds(n: int) -> None:
    """Test algebras outside the supported range are rejected."""
    with pytest.raises(ConfigError):
        generator_pools(n)


def test_negative_jet_order_rejected() -> None:
    """Test a negative jet order raises ConfigError."""
    with pytest.raises(ConfigError, match="jet_order"):
        sample_configuration(1, jet_order=-1)


def test_reparametrisation_inverts(config: BVConfiguration) -> None:
    """Test the reduced antifields are recovered from the canonical ones."""
    recovered = invert_reparam(config.e, config.canonical)
    for name, value in recovered.items():
        assert (value - config[name]).is_zero(), name


def test_variation_uses_shift_generator(config: BVConfiguration) -> None:
    """Test variations carry generator 0 and the shifted configuration is flagged."""
    variation = sample_variation(config, 3, FIELDS[:3])
    assert set(variation) == set(FIELDS[:3])
    shifted = config.with_fields(**{str(k): config[k] + v for k, v in variation.items()})
    assert shifted.uses_epsilon()
    with pytest.raises(EpsilonCollisionError):
        sample_variation(shifted, 3, FIELDS[:1])


def test_antifields_zero_and_pure_gravity(config: BVConfiguration) -> None:
    """Test the derived configurations clear the right coordinates."""
    bare = config.antifields_zero()
    assert all(bare[name].is_zero() for name in ANTIFIELDS)
    assert not bare.e.is_zero()
    pure = config.pure_gravity()
    assert pure.psi.is_zero()
    assert pure.chi.is_zero()
    assert not pure.omega.is_zero()


def test_phi_needs_even_ghost(config: BVConfiguration) -> None:
    """Test phi refuses an odd spinor."""
    with pytest.raises(GradingMismatchError):
        phi_generator(config.psi, config.e_inv)


def test_on_shell_projection_removes_torsion() -> None:
    """Test the projected connection satisfies the torsion equation."""
    projected = on_shell_projection(sample_configuration(8, jet_order=2, odd_generators=8))
    psi_bar = majorana_bar_field(projected.psi)
    torsion = covariant_d(projected.omega, projected.e) - wedge(wedge(psi_bar, gamma_field()), projected.psi).scale(
        Fraction(1, 2)
    )
    assert projected.jet_order == 1
    assert torsion.is_zero()


def test_constant_configuration_has_identity_coframe() -> None:
    """Test the inverse coframe of the identity is the identity."""
    flat = constant_configuration(odd_generators=8, jet_order=1)
    for mu in range(4):
        for a in range(4):
            assert flat.e_inv[mu][a] == Germ.constant(1 if mu == a else 0)


def test_registry_marks_antifields() -> None:
    """Test exactly the antifield coordinates have negative ghost number."""
    assert {name for name, entry in REGISTRY.items() if entry.is_antifield} == set(ANTIFIELDS)


def test_inverse_vielbein_inverts_coframe(config: BVConfiguration) -> None:
    """Test e_a^mu e^a_nu = delta^mu_nu to the jet order of the sample."""
    e_inv = inverse_vielbein_jets(config.e)
    for mu in range(4):
        for nu in range(4):
            total = Germ(order=config.jet_order)
            for a in range(4):
                total = total + e_inv[mu][a] * germ_component(config.e.germ, (nu,), (a,))
            assert total == Germ.constant(1 if mu == nu else 0)
