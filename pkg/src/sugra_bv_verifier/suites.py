"""Registry of verification suites and the per-case work each one does."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, replace
from random import Random

from sugra_bv_verifier import bv_engine
from sugra_bv_verifier.clifford_spin import (
    build_gamma_rep,
    check_fierz,
    check_flip,
    check_gamma_identities,
    majorana_sample,
    random_grassmann,
)
from sugra_bv_verifier.exact_scalars import I, Parity
from sugra_bv_verifier.field_content import BVConfiguration, sample_configuration
from sugra_bv_verifier.graded_fiber import (
    Germ,
    JetField,
    check_v_gamma_powers,
    gamma_power_field,
    gamma_underline,
    wedge,
)
from sugra_bv_verifier.models import Residual, Witness
from sugra_bv_verifier.structure_maps import (
    SPINOR_21,
    SPINOR_31,
    diagram_descriptors,
    isomorphism_descriptors,
    rank_certify,
    split_alpha_beta,
    split_kappa_varkappa,
    splitting_dimensions,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CaseContext:
    """Everything one case of a suite needs."""

    seed: int
    odd_generators: int
    jet_order: int
    profile: str
    options: bv_engine.EngineOptions

    def configuration(self, jet_order: int | None = None) -> BVConfiguration:
        """Sample the case configuration."""
        return sample_configuration(
            self.seed,
            jet_order=self.jet_order if jet_order is None else jet_order,
            odd_generators=self.odd_generators,
            profile=self.profile,
        )

    @property
    def generators(self) -> tuple[int, ...]:
        """Usable odd generators, leaving out the shift generator."""
        return tuple(range(1, self.odd_generators))


type SuiteRunner = Callable[[CaseContext], list[Residual]]


@dataclass(frozen=True)
class Suite:
    """A named group of checks with the algebra it needs.

    Attributes:
        name: Identifier used on the command line.
        description: One-line summary.
        min_odd_generators: Smallest usable Grassmann algebra.
        min_jet_order: Smallest jet order the checks are meaningful at.
        run: Produces the residual rows of one case.
        seeded: False when every case would repeat the same deterministic checks.
    """

    name: str
    description: str
    min_odd_generators: int
    min_jet_order: int
    run: SuiteRunner
    seeded: bool = True


def _gamma_identities(ctx: CaseContext) -> list[Residual]:
    del ctx
    return [*check_gamma_identities(build_gamma_rep()), *check_v_gamma_powers()]


FLIP_PATTERNS = (
    (Parity.ODD, Parity.ODD),
    (Parity.ODD, Parity.EVEN),
    (Parity.EVEN, Parity.ODD),
    (Parity.EVEN, Parity.EVEN),
)
# with the default five cases: fifty pairs per parity pattern and twenty-five Fierz tuples
FLIP_DRAWS_PER_CASE = 10
FIERZ_DRAWS_PER_CASE = 5


def _flip(ctx: CaseContext) -> list[Residual]:
    rep = build_gamma_rep()
    rows = []
    rng = Random(ctx.seed)
    for p, q in FLIP_PATTERNS:
        for draw in range(FLIP_DRAWS_PER_CASE):
            psi = majorana_sample(rep, p, rng.getrandbits(32), ctx.generators)
            chi = majorana_sample(rep, q, rng.getrandbits(32), ctx.generators)
            rows.extend(check_flip(rep, n, psi, chi, draw) for n in range(4))
    return rows


def _random_parity(rng: Random) -> Parity:
    return Parity.ODD if rng.random() < 0.5 else Parity.EVEN


def _fierz(ctx: CaseContext) -> list[Residual]:
    rep = build_gamma_rep()
    rng = Random(ctx.seed)
    rows = []
    for draw in range(FIERZ_DRAWS_PER_CASE):
        parities = [_random_parity(rng) for _ in range(2)]
        # one spinor of each parity so the quartic lemma always has its psi and chi
        parities.extend((Parity.ODD, Parity.EVEN))
        lambdas = [majorana_sample(rep, p, rng.getrandbits(32), ctx.generators) for p in parities]
        lemma_lambda = majorana_sample(rep, _random_parity(rng), rng.getrandbits(32), ctx.generators)
        rows.extend(
            replace(row, check_id=f"{row.check_id}:{draw}") for row in check_fierz(rep, lambdas, lemma_lambda)
        )
    return rows


def _diagram_ranks(ctx: CaseContext) -> list[Residual]:
    e = ctx.configuration(jet_order=0).e
    rows = []
    for descriptor in (*diagram_descriptors(), *isomorphism_descriptors()):
        certificate = rank_certify(descriptor, e)
        witness = None
        if not certificate.matches:
            witness = Witness(
                descriptor.name,
                f"{certificate.domain}->{certificate.codomain}",
                [],
                [],
                f"rank {certificate.rank}",
            )
        rows.append(Residual(f"rank:{descriptor.name}", descriptor.anchor or "coframe maps", witness))
    return rows


def _random_spinor_form(
    rng: Random, generators: tuple[int, ...], space_dim: int, assemble: Callable[[list[Germ]], JetField]
) -> JetField:
    components = []
    for _ in range(space_dim):
        soul = random_grassmann(rng, generators, (0, 2), terms=2, self_conjugate=False)
        components.append(Germ.constant(soul))
    return assemble(components)


def _splittings(ctx: CaseContext) -> list[Residual]:
    e = ctx.configuration(jet_order=0).e
    rng = Random(ctx.seed)
    gamma3 = gamma_power_field(3)
    rows = []
    theta = _random_spinor_form(rng, ctx.generators, SPINOR_31.dim, SPINOR_31.assemble)
    alpha, beta = split_alpha_beta(e, theta)
    rebuilt = wedge(wedge(e, gamma_underline(e)), alpha).scale(I) + beta
    rows.append(bv_engine.residual("split:alpha_beta:reconstruct", "alpha/beta splitting", rebuilt - theta))
    rows.append(bv_engine.residual("split:alpha_beta:kernel", "alpha/beta splitting", wedge(gamma3, beta)))

    sigma = _random_spinor_form(rng, ctx.generators, SPINOR_21.dim, SPINOR_21.assemble)
    kappa, varkappa = split_kappa_varkappa(e, sigma)
    rows.append(
        bv_engine.residual(
            "split:kappa_varkappa:reconstruct", "kappa/varkappa splitting", wedge(e, kappa) + varkappa - sigma
        )
    )
    rows.append(
        bv_engine.residual(
            "split:kappa_varkappa:kernel",
            "kappa/varkappa splitting",
            wedge(wedge(gamma_underline(e), gamma3), varkappa),
        )
    )
    for name, (part, kernel, total) in splitting_dimensions(e).items():
        witness = None
        if part + kernel != total:
            witness = Witness(f"split:{name}", "dimension", [], [], f"{part}+{kernel}!={total}")
        rows.append(Residual(f"split:{name}:dimension", "uniqueness of the splitting by dimension count", witness))
    return rows


def _variational(ctx: CaseContext) -> list[Residual]:
    return bv_engine.variational_residuals(ctx.configuration(), ctx.seed)


def _q0_squared(ctx: CaseContext) -> list[Residual]:
    config = ctx.configuration()
    rows = bv_engine.closed_form_residuals_q0sq(config)
    rows.extend(bv_engine.q0_antifield_residuals(config))
    rows.append(bv_engine.on_shell_row(ctx.configuration(jet_order=ctx.jet_order + 1)))
    return rows


def _quadratic(ctx: CaseContext) -> list[Residual]:
    return bv_engine.quadratic_structure_residuals(ctx.configuration(), ctx.options)


def _cme(ctx: CaseContext) -> list[Residual]:
    return bv_engine.cme_residual_suite(ctx.configuration(), ctx.options)


def _negative_controls(ctx: CaseContext) -> list[Residual]:
    return bv_engine.negative_control_residuals(ctx.configuration())


def _grading(ctx: CaseContext) -> list[Residual]:
    config = ctx.configuration()
    rows = bv_engine.grading_residuals(config)
    rows.extend(bv_engine.vector_field_grading_residuals(config, bv_engine.q_total_vector_field(ctx.options)))
    rows.append(
        bv_engine.residual(
            "grading.s2.antifields_zero",
            "Quadratic action density without antifields",
            bv_engine.s2_density(config.antifields_zero(), ctx.options),
        )
    )
    return rows


SUITES: dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite("gamma_identities", "gamma contraction and duality identities", 1, 0, _gamma_identities, seeded=False),
        Suite("flip", "Majorana flip relations", 6, 0, _flip),
        Suite("fierz", "Fierz completeness and rearrangements", 8, 0, _fierz),
        Suite("diagram_ranks", "rank pattern of the coframe maps", 6, 0, _diagram_ranks),
        Suite("splittings", "alpha/beta and kappa/varkappa splittings", 6, 0, _splittings),
        Suite("grading", "field gradings, Majorana constraint, vector field gradings", 6, 1, _grading),
        Suite("variational", "first variation of the action", 6, 1, _variational),
        Suite("q0_squared", "closed forms of Q0 squared", 6, 2, _q0_squared),
        Suite("quadratic", "identities of the quadratic vector field", 6, 2, _quadratic),
        Suite("cme", "classical master equation by antifield degree", 6, 2, _cme),
        Suite("negative_controls", "perturbed vector fields must fail", 6, 2, _negative_controls),
    )
}


def resolve_suites(names: list[str]) -> list[Suite]:
    """Expand ``all`` and look up suites in registry order.

    Raises:
        KeyError: For an unknown name; callers turn this into a configuration error.
    """
    if "all" in names:
        return list(SUITES.values())
    return [SUITES[name] for name in names]
