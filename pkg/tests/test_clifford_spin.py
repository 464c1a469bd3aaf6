"""Tests for the Clifford representation, flip relations and Fierz identities."""

from random import Random

import pytest

from sugra_bv_verifier import exact_linalg
from sugra_bv_verifier.clifford_spin import (
    EXPECTED_T,
    SpinorPoly,
    build_gamma_rep,
    check_fierz,
    check_flip,
    check_gamma_identities,
    fierz_lemma_relations,
    is_majorana,
    levi_civita_lower,
    levi_civita_upper,
    majorana_sample,
    random_grassmann,
    t_parameter,
)
from sugra_bv_verifier.errors import NotMajoranaError
from sugra_bv_verifier.exact_scalars import I, GrassmannElement, Parity

GENERATORS = tuple(range(1, 10))


def test_charge_conjugation_is_gamma0() -> None:
    """Test the solved C coincides with gamma^0 and is invertible."""
    rep = build_gamma_rep()
    assert rep.C == rep.gamma_upper[0]
    assert exact_linalg.matmul(rep.C, rep.C_inv) == exact_linalg.identity(4)


def test_t_table() -> None:
    """Test the symmetry table of C gamma^(N)."""
    rep = build_gamma_rep()
    assert tuple(t_parameter(rep, n) for n in range(4)) == EXPECTED_T


def test_levi_civita_signs() -> None:
    """Test raising all four indices flips the sign in Lorentzian signature."""
    assert levi_civita_lower(0, 1, 2, 3) == -levi_civita_upper(0, 1, 2, 3)
    assert levi_civita_lower(1, 0, 2, 3) == -levi_civita_lower(0, 1, 2, 3)
    assert levi_civita_lower(0, 0, 2, 3) == 0


def test_gamma_identities_hold() -> None:
    """Test every required gamma identity is an exact zero."""
    rows = check_gamma_identities(build_gamma_rep())
    ids = {r.check_id for r in rows}
    assert {"gamma:contraction", "gamma:gamma5_pair", "gamma:gamma5_single", "clifford:t_table"} <= ids
    failing = [r.check_id for r in rows if r.required and r.witness is not None]
    assert failing == []


def test_majorana_sample_is_majorana() -> None:
    """Test sampled spinors satisfy the constraint and are reproducible."""
    rep = build_gamma_rep()
    for parity in (Parity.ODD, Parity.EVEN):
        spinor = majorana_sample(rep, parity, seed=7, generators=GENERATORS)
        assert is_majorana(rep, spinor)
        assert spinor == majorana_sample(rep, parity, seed=7, generators=GENERATORS)


def test_non_majorana_spinor_rejected() -> None:
    """Test a spinor with a non-self-conjugate component is refused by the flip check."""
    rep = build_gamma_rep()
    bad = SpinorPoly((GrassmannElement.generator(1, I), *(GrassmannElement() for _ in range(3))), Parity.ODD)
    good = majorana_sample(rep, Parity.ODD, seed=1, generators=GENERATORS)
    assert not is_majorana(rep, bad)
    with pytest.raises(NotMajoranaError):
        check_flip(rep, 1, bad, good)


def test_spinor_parity_is_checked() -> None:
    """Test an even component in an odd spinor raises ValueError."""
    with pytest.raises(ValueError, match="parity"):
        SpinorPoly((GrassmannElement.scalar(1), *(GrassmannElement() for _ in range(3))), Parity.ODD)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
@pytest.mark.parametrize(
    ("p", "q"),
    [(Parity.ODD, Parity.ODD), (Parity.ODD, Parity.EVEN), (Parity.EVEN, Parity.ODD), (Parity.EVEN, Parity.EVEN)],
)
def test_flip_relations(n: int, p: Parity, q: Parity) -> None:
    """Test the flip relation for every power of gamma and parity pairing."""
    rep = build_gamma_rep()
    psi = majorana_sample(rep, p, seed=10 + n, generators=GENERATORS)
    chi = majorana_sample(rep, q, seed=20 + n, generators=GENERATORS)
    row = check_flip(rep, n, psi, chi)
    assert row.witness is None


def _fierz_tuple(seed: int) -> list[SpinorPoly]:
    rep = build_gamma_rep()
    parities = (Parity.ODD, Parity.EVEN, Parity.ODD, Parity.EVEN)
    return [majorana_sample(rep, p, seed=seed + k, generators=GENERATORS) for k, p in enumerate(parities)]


@pytest.mark.parametrize("lemma_parity", [Parity.ODD, Parity.EVEN])
def test_fierz_identities(lemma_parity: Parity) -> None:
    """Test completeness, both rearrangements and the lemma relations vanish exactly."""
    rep = build_gamma_rep()
    lemma_lambda = majorana_sample(rep, lemma_parity, seed=99, generators=GENERATORS)
    rows = {r.check_id: r for r in check_fierz(rep, _fierz_tuple(1), lemma_lambda)}
    for check_id in (
        "fierz:completeness",
        "fierz:gamma3_gamma",
        "fierz:gamma3_gamma3",
        "fierz:lemma:relation:first_third",
        "fierz:lemma:relation:first_second",
    ):
        assert rows[check_id].required
        assert rows[check_id].witness is None, check_id


def test_fierz_rearrangements_with_mixed_parities() -> None:
    """Test both rearrangements for every parity of the first two spinors."""
    rep = build_gamma_rep()
    for first, second in ((Parity.ODD, Parity.ODD), (Parity.EVEN, Parity.ODD), (Parity.EVEN, Parity.EVEN)):
        lambdas = [
            majorana_sample(rep, parity, seed=40 + k, generators=GENERATORS)
            for k, parity in enumerate((first, second, Parity.ODD, Parity.EVEN))
        ]
        rows = {r.check_id: r for r in check_fierz(rep, lambdas)}
        assert rows["fierz:gamma3_gamma"].witness is None
        assert rows["fierz:gamma3_gamma3"].witness is None


def test_fierz_lemma_rows_use_independent_lambda() -> None:
    """Test the three lemma expressions are reported, not required, and nonzero for a fresh lambda."""
    rep = build_gamma_rep()
    lambdas = _fierz_tuple(5)
    lemma_lambda = majorana_sample(rep, Parity.ODD, seed=77, generators=GENERATORS)
    rows = [r for r in check_fierz(rep, lambdas, lemma_lambda) if r.check_id.startswith("fierz:lemma:")]
    lemma = [r for r in rows if ":relation:" not in r.check_id]
    assert [r.check_id for r in lemma] == ["fierz:lemma:1", "fierz:lemma:2", "fierz:lemma:3"]
    assert not any(r.required for r in lemma)
    assert all(r.note for r in lemma)
    assert lemma[0].witness is not None
    assert all(r.required for r in rows if ":relation:" in r.check_id)


def test_fierz_without_lemma_lambda_skips_lemma() -> None:
    """Test no lemma rows are produced unless an independent lambda is supplied."""
    rows = check_fierz(build_gamma_rep(), _fierz_tuple(1))
    assert not any(r.check_id.startswith("fierz:lemma") for r in rows)


def test_fierz_lemma_relations_are_exact() -> None:
    """Test first + third and 2 first - (-1)^|lambda| second vanish as Grassmann elements."""
    rep = build_gamma_rep()
    psi = majorana_sample(rep, Parity.ODD, seed=3, generators=GENERATORS)
    chi = majorana_sample(rep, Parity.EVEN, seed=4, generators=GENERATORS)
    for parity in (Parity.ODD, Parity.EVEN):
        lam = majorana_sample(rep, parity, seed=12, generators=GENERATORS)
        first_third, first_second = fierz_lemma_relations(rep, lam, psi, chi)
        assert first_third.is_zero()
        assert first_second.is_zero()


def test_random_grassmann_is_homogeneous() -> None:
    """Test sampled elements have the parity of their degrees."""
    rng = Random(3)
    odd = random_grassmann(rng, GENERATORS, (1, 3), terms=4)
    even = random_grassmann(rng, GENERATORS, (0, 2), terms=4)
    assert odd.parity is Parity.ODD
    assert even.parity is Parity.EVEN
