"""Tests for the coframe maps, rank certificates and splittings."""

import pytest

from sugra_bv_verifier.errors import DegreeOverflowError, DegreeUnderflowError, NonInvertibleVielbeinError
from sugra_bv_verifier.exact_scalars import GrassmannElement
from sugra_bv_verifier.field_content import sample_configuration
from sugra_bv_verifier.graded_fiber import Germ, JetField, Target, gamma_power_field, gamma_underline, wedge
from sugra_bv_verifier.structure_maps import (
    SPINOR_21,
    SPINOR_31,
    FiberSpace,
    diagram_descriptors,
    invert_w1_12,
    isomorphism_descriptors,
    rank_certify,
    require_invertible,
    rho_map,
    solve_linear,
    split_alpha_beta,
    split_kappa_varkappa,
    splitting_dimensions,
    w_descriptor,
    w_map,
)


@pytest.fixture(scope="module")
def coframe() -> JetField:
    """Sample a coframe with a soul."""
    return sample_configuration(17, jet_order=1, odd_generators=8).e


def _sample_field(space: FiberSpace, stride: int = 3) -> JetField:
    components = [
        Germ.constant(GrassmannElement.generator(1 + index % 7)) if index % stride == 0 else Germ()
        for index in range(space.dim)
    ]
    return space.assemble(components)


def test_fiber_dimensions() -> None:
    """Test fibre dimensions follow the binomial counts."""
    assert FiberSpace(1, 2).dim == 24
    assert FiberSpace(3, 2).dim == 24
    assert FiberSpace(4, 2).dim == 6
    assert SPINOR_31.dim == 64
    assert FiberSpace(2, 4, Target.SPINOR).label == "(2,4)xspinor"


def test_fiber_degrees_checked() -> None:
    """Test degrees above four are rejected."""
    with pytest.raises(DegreeOverflowError):
        FiberSpace(5, 0)


def test_basis_round_trip() -> None:
    """Test components recover what assemble was given."""
    space = FiberSpace(2, 1, Target.SPINOR)
    field = _sample_field(space)
    assert (space.assemble(space.components(field)) - field).is_zero()


def test_diagram_ranks_match(coframe: JetField) -> None:
    """Test every bulk arrow has its claimed injectivity and surjectivity."""
    certificates = [rank_certify(d, coframe) for d in diagram_descriptors()]
    assert len(certificates) == 16
    assert [c.name for c in certificates if not c.matches] == []


def test_w1_32_is_surjective_only(coframe: JetField) -> None:
    """Test W_1 from (3,2) to (4,3) has rank four."""
    certificate = rank_certify(w_descriptor(1, 3, 2), coframe)
    assert (certificate.domain_dim, certificate.codomain_dim, certificate.rank) == (24, 4, 4)
    assert certificate.surjective
    assert not certificate.injective


def test_isomorphisms_certified(coframe: JetField) -> None:
    """Test the listed isomorphisms and spinor maps have full rank."""
    certificates = [rank_certify(d, coframe) for d in isomorphism_descriptors()]
    assert [c.name for c in certificates if not c.matches] == []
    assert all(c.to_dict()["matches"] for c in certificates)


def test_certificate_flags_contradiction(coframe: JetField) -> None:
    """Test a wrong claim is reported as a mismatch."""
    certificate = rank_certify(w_descriptor(1, 1, 0, expect_surjective=True), coframe)
    assert certificate.injective
    assert not certificate.matches


def test_degenerate_coframe_rejected() -> None:
    """Test a zero coframe raises NonInvertibleVielbeinError."""
    with pytest.raises(NonInvertibleVielbeinError):
        require_invertible(JetField.zero())


def test_degree_errors(coframe: JetField) -> None:
    """Test maps leaving the fibre raise degree errors."""
    with pytest.raises(DegreeOverflowError):
        w_map(1, 4, 0, coframe, JetField.zero())
    with pytest.raises(DegreeUnderflowError):
        rho_map(0, 0, coframe, JetField.zero())


def test_invert_w1_12(coframe: JetField) -> None:
    """Test the (1,2) inverse recovers a sampled preimage."""
    x = _sample_field(FiberSpace(1, 2))
    y = w_map(1, 1, 2, coframe, x)
    assert (invert_w1_12(coframe, y) - x).is_zero()


def test_solve_rejects_non_square(coframe: JetField) -> None:
    """Test solving through a non-square map raises NonInvertibleVielbeinError."""
    with pytest.raises(NonInvertibleVielbeinError, match="not square"):
        solve_linear(w_descriptor(1, 1, 0), coframe, JetField.zero())


def test_alpha_beta_splitting(coframe: JetField) -> None:
    """Test the beta part is annihilated by gamma^3."""
    theta = _sample_field(SPINOR_31, stride=5)
    _, beta = split_alpha_beta(coframe, theta)
    assert wedge(gamma_power_field(3), beta).is_zero()


def test_kappa_varkappa_splitting(coframe: JetField) -> None:
    """Test theta = e kappa + varkappa with varkappa in the kernel."""
    theta = _sample_field(SPINOR_21, stride=4)
    kappa, varkappa = split_kappa_varkappa(coframe, theta)
    assert (wedge(coframe, kappa) + varkappa - theta).is_zero()
    assert wedge(wedge(gamma_underline(coframe), gamma_power_field(3)), varkappa).is_zero()


def test_splitting_dimensions_add_up(coframe: JetField) -> None:
    """Test part and kernel dimensions fill the fibre."""
    dims = splitting_dimensions(coframe)
    assert dims["alpha_beta"] == (16, 48, 64)
    assert dims["kappa_varkappa"] == (16, 80, 96)
