"""The supergravity BV multiplet: field registry, random configurations and reparametrisations."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property
from math import ceil
from random import Random

from sugra_bv_verifier import exact_linalg
from sugra_bv_verifier.clifford_spin import build_gamma_rep, random_grassmann
from sugra_bv_verifier.errors import (
    ConfigError,
    ConvergenceError,
    EpsilonCollisionError,
    GradingMismatchError,
    NonInvertibleError,
    NonInvertibleVielbeinError,
    NotMajoranaError,
)
from sugra_bv_verifier.exact_scalars import (
    EPSILON_MASK,
    MAX_ODD_GENERATORS,
    THETA_MASK,
    GaussianRational,
    GrassmannElement,
    random_rational,
)
from sugra_bv_verifier.graded_fiber import (
    DIM,
    X0,
    Germ,
    Grading,
    InverseVielbein,
    JetField,
    Target,
    XExp,
    audit_grading,
    covariant_d,
    dx,
    gamma_field,
    gamma_underline,
    germ_component,
    majorana_bar_field,
    majorana_violation,
    v,
    wedge,
    wedge_power,
)
from sugra_bv_verifier.structure_maps import (
    THETA_GAMMA,
    FiberSpace,
    rho_descriptor,
    solve_linear,
    theta_gamma_map,
    vielbein_body,
    w_descriptor,
)

logger = logging.getLogger(__name__)

MIN_ODD_GENERATORS = 6
PERTURBATIONS = (Fraction(1, 4), Fraction(-1, 4), Fraction(1, 8), Fraction(-1, 8), Fraction(0))


class FieldName(StrEnum):
    """Coordinates of the multiplet; antifields appear through their reparametrisations."""

    E = "e"
    OMEGA = "omega"
    PSI = "psi"
    C = "c"
    XI = "xi"
    CHI = "chi"
    E_DAG = "e_dag"
    OMEGA_CHECK = "omega_check"
    PSI0_DAG = "psi0_dag"
    C_CHECK = "c_check"
    XI_DAG = "xi_dag"
    CHI0_DAG = "chi0_dag"


class Canonical(StrEnum):
    """Antifields in canonical form, the coordinates a vector field shifts."""

    OMEGA_DAG = "omega_dag"
    C_DAG = "c_dag"
    PSI_DAG = "psi_dag"
    CHI_DAG = "chi_dag"


class Profile(StrEnum):
    """How many jet and soul terms a sampled coefficient carries."""

    SPARSE = "sparse"
    DENSE = "dense"


@dataclass(frozen=True)
class FieldDescriptor:
    """Registry entry: name, grading and the pool its odd generators come from."""

    name: FieldName
    grading: Grading
    pool: str
    description: str

    @property
    def is_antifield(self) -> bool:
        """True for ghost number below zero."""
        return self.grading.ghost_number < 0


def _grading(form: int, target: Target, multi: int, ghost: int, parity: int) -> Grading:
    return Grading(form, target, multi, ghost, parity)


REGISTRY: dict[FieldName, FieldDescriptor] = {
    FieldName.E: FieldDescriptor(FieldName.E, _grading(1, Target.SCALAR, 1, 0, 0), "body", "coframe"),
    FieldName.OMEGA: FieldDescriptor(FieldName.OMEGA, _grading(1, Target.SCALAR, 2, 0, 0), "body", "spin connection"),
    FieldName.PSI: FieldDescriptor(FieldName.PSI, _grading(1, Target.SPINOR, 0, 0, 1), "psi", "gravitino"),
    FieldName.C: FieldDescriptor(FieldName.C, _grading(0, Target.SCALAR, 2, 1, 1), "ghosts", "Lorentz ghost"),
    FieldName.XI: FieldDescriptor(FieldName.XI, _grading(0, Target.VECTOR, 0, 1, 1), "ghosts", "diffeomorphism ghost"),
    FieldName.CHI: FieldDescriptor(FieldName.CHI, _grading(0, Target.SPINOR, 0, 1, 0), "ghosts", "supersymmetry ghost"),
    FieldName.E_DAG: FieldDescriptor(FieldName.E_DAG, _grading(3, Target.SCALAR, 3, -1, 1), "antifields", "e momentum"),
    FieldName.OMEGA_CHECK: FieldDescriptor(
        FieldName.OMEGA_CHECK, _grading(2, Target.SCALAR, 1, -1, 1), "antifields", "omega momentum over e"
    ),
    FieldName.PSI0_DAG: FieldDescriptor(
        FieldName.PSI0_DAG, _grading(1, Target.SPINOR, 0, -1, 0), "antifields", "gravitino momentum, reduced"
    ),
    FieldName.C_CHECK: FieldDescriptor(
        FieldName.C_CHECK, _grading(2, Target.SCALAR, 0, -2, 0), "antifields", "antighost over e^2/2"
    ),
    FieldName.XI_DAG: FieldDescriptor(
        FieldName.XI_DAG, _grading(4, Target.COVECTOR, 4, -2, 0), "antifields", "xi momentum"
    ),
    FieldName.CHI0_DAG: FieldDescriptor(
        FieldName.CHI0_DAG, _grading(0, Target.SPINOR, 0, -2, 1), "antifields", "chi momentum over e^4/4!"
    ),
}

FIELDS = (FieldName.E, FieldName.OMEGA, FieldName.PSI, FieldName.C, FieldName.XI, FieldName.CHI)
ANTIFIELDS = (
    FieldName.E_DAG,
    FieldName.OMEGA_CHECK,
    FieldName.PSI0_DAG,
    FieldName.C_CHECK,
    FieldName.XI_DAG,
    FieldName.CHI0_DAG,
)
SPINOR_FIELDS = (FieldName.PSI, FieldName.CHI, FieldName.PSI0_DAG, FieldName.CHI0_DAG)


@dataclass(frozen=True)
class GeneratorPools:
    """Disjoint odd-generator pools; generator 0 stays free for the shift parameter."""

    psi: tuple[int, ...]
    ghosts: tuple[int, ...]
    antifields: tuple[int, ...]

    def pool(self, name: str) -> tuple[int, ...]:
        """Pool by registry name; the body pool is empty."""
        return {"psi": self.psi, "ghosts": self.ghosts, "antifields": self.antifields}.get(name, ())


def generator_pools(odd_generators: int) -> GeneratorPools:
    """Split generators ``1..N-1`` in the ratio 4:4:3.

    Raises:
        ConfigError: If ``N`` is outside ``[6, 32]``.
    """
    if not MIN_ODD_GENERATORS <= odd_generators <= MAX_ODD_GENERATORS:
        msg = f"odd_generators must lie in [{MIN_ODD_GENERATORS}, {MAX_ODD_GENERATORS}], got {odd_generators}"
        raise ConfigError(msg)
    usable = odd_generators - 1
    n_psi = ceil(usable * 4 / 11)
    n_ghost = ceil(usable * 4 / 11)
    n_anti = max(1, usable - n_psi - n_ghost)
    if n_psi + n_ghost + n_anti > usable:
        n_psi -= 1
    start = 1
    psi = tuple(range(start, start + n_psi))
    ghosts = tuple(range(start + n_psi, start + n_psi + n_ghost))
    antifields = tuple(range(start + n_psi + n_ghost, odd_generators))
    return GeneratorPools(psi, ghosts, antifields)


@dataclass(frozen=True)
class CanonicalAntifields:
    """``omega_dag = e omega_check``, ``c_dag = e^2/2 c_check`` and the two spinor antifields."""

    omega_dag: JetField
    c_dag: JetField
    psi_dag: JetField
    chi_dag: JetField

    def as_dict(self) -> dict[Canonical, JetField]:
        """Keyed by canonical name."""
        return {
            Canonical.OMEGA_DAG: self.omega_dag,
            Canonical.C_DAG: self.c_dag,
            Canonical.PSI_DAG: self.psi_dag,
            Canonical.CHI_DAG: self.chi_dag,
        }


@dataclass(frozen=True, eq=False)
class BVConfiguration:
    """One point of the multiplet with jets up to ``jet_order``.

    Attributes:
        fields: Values of the twelve coordinates.
        jet_order: Coordinate degree known exactly.
        odd_generators: Size of the Grassmann algebra the sample was drawn in.
        seed: Sampling seed, None for hand-built configurations.
    """

    fields: Mapping[FieldName, JetField]
    jet_order: int
    odd_generators: int = 12
    seed: int | None = None
    profile: Profile = Profile.SPARSE
    label: str = field(default="", compare=False)

    def __getitem__(self, name: FieldName | str) -> JetField:
        return self.fields[FieldName(name)]

    @property
    def e(self) -> JetField:
        """Coframe."""
        return self.fields[FieldName.E]

    @property
    def omega(self) -> JetField:
        """Spin connection."""
        return self.fields[FieldName.OMEGA]

    @property
    def psi(self) -> JetField:
        """Gravitino."""
        return self.fields[FieldName.PSI]

    @property
    def c(self) -> JetField:
        """Lorentz ghost."""
        return self.fields[FieldName.C]

    @property
    def xi(self) -> JetField:
        """Diffeomorphism ghost."""
        return self.fields[FieldName.XI]

    @property
    def chi(self) -> JetField:
        """Supersymmetry ghost."""
        return self.fields[FieldName.CHI]

    @property
    def e_dag(self) -> JetField:
        """Coframe antifield."""
        return self.fields[FieldName.E_DAG]

    @property
    def omega_check(self) -> JetField:
        """Reduced connection antifield."""
        return self.fields[FieldName.OMEGA_CHECK]

    @property
    def psi0_dag(self) -> JetField:
        """Reduced gravitino antifield."""
        return self.fields[FieldName.PSI0_DAG]

    @property
    def c_check(self) -> JetField:
        """Reduced antighost."""
        return self.fields[FieldName.C_CHECK]

    @property
    def xi_dag(self) -> JetField:
        """Diffeomorphism antighost, one (4,4)-form per coordinate index."""
        return self.fields[FieldName.XI_DAG]

    @property
    def chi0_dag(self) -> JetField:
        """Reduced supersymmetry antighost."""
        return self.fields[FieldName.CHI0_DAG]

    @cached_property
    def e_inv(self) -> InverseVielbein:
        """Inverse vielbein jets ``e^mu_a``."""
        return inverse_vielbein_jets(self.e)

    @cached_property
    def gamma_underline(self) -> JetField:
        """``gamma_mu dx^mu = [e, gamma]``."""
        return gamma_underline(self.e)

    @cached_property
    def phi(self) -> JetField:
        """The even vector field ``chi_bar gamma^mu chi``."""
        return phi_generator(self.chi, self.e_inv)

    @cached_property
    def canonical(self) -> CanonicalAntifields:
        """Antifields in canonical coordinates."""
        return antifield_reparam(self)

    def with_fields(self, **changes: JetField) -> BVConfiguration:
        """Copy with some coordinates replaced."""
        fields = dict(self.fields)
        for key, value in changes.items():
            fields[FieldName(key)] = value
        return BVConfiguration(fields, self.jet_order, self.odd_generators, self.seed, self.profile, self.label)

    def truncated(self, order: int) -> BVConfiguration:
        """Copy with every field truncated to ``order``."""
        fields = {name: value.truncate(order) for name, value in self.fields.items()}
        return BVConfiguration(fields, min(order, self.jet_order), self.odd_generators, self.seed, self.profile)

    def scale_antifields(self, factor: int | Fraction) -> BVConfiguration:
        """Copy with every antifield multiplied by ``factor``."""
        return self.with_fields(**{str(name): self.fields[name].scale(factor) for name in ANTIFIELDS})

    def antifields_zero(self) -> BVConfiguration:
        """Copy with every antifield set to zero."""
        return self.scale_antifields(0)

    def pure_gravity(self) -> BVConfiguration:
        """Copy with gravitino, supersymmetry ghost and antifields set to zero."""
        return self.antifields_zero().with_fields(psi=self.psi.scale(0), chi=self.chi.scale(0))

    def uses_epsilon(self) -> bool:
        """True when the shift generator occurs in any coefficient."""
        return any(
            mask & EPSILON_MASK
            for value in self.fields.values()
            for entry in value.entries
            for g in entry.terms.values()
            for mask in g.terms
        )

    def require_epsilon_free(self) -> None:
        """Raise EpsilonCollisionError when generator 0 already occurs."""
        if self.uses_epsilon():
            msg = "Configuration uses generator 0, which is reserved for the shift parameter"
            raise EpsilonCollisionError(msg)


def _exponents(order: int) -> list[XExp]:
    out = []
    for total in range(order + 1):
        for a in range(total + 1):
            for b in range(total - a + 1):
                for c in range(total - a - b + 1):
                    out.append((a, b, c, total - a - b - c))
    return out


class _Sampler:
    """Draws coefficient germs for one configuration."""

    def __init__(self, rng: Random, pools: GeneratorPools, jet_order: int, profile: Profile) -> None:
        self.rng = rng
        self.pools = pools
        self.jet_order = jet_order
        self.profile = profile
        self.exponents = _exponents(jet_order)

    def _keep(self, x: XExp) -> bool:
        if x == X0 or self.profile is Profile.DENSE:
            return True
        return self.rng.random() < 0.5

    def odd(self, pool: tuple[int, ...]) -> Germ:
        degrees = (1,) if self.profile is Profile.SPARSE else (1, 3)
        terms = 1 if self.profile is Profile.SPARSE else 2
        out = {}
        for x in self.exponents:
            if self._keep(x):
                out[x] = random_grassmann(self.rng, pool, degrees, terms)
        return Germ(out, self.jet_order)

    def even(self, pool: tuple[int, ...], body: bool = True) -> Germ:
        out = {}
        for x in self.exponents:
            if not self._keep(x):
                continue
            value = GrassmannElement()
            if body:
                value = value + GrassmannElement.scalar(random_rational(self.rng))
            if pool and len(pool) >= 2 and (self.profile is Profile.DENSE or self.rng.random() < 0.25):
                value = value + random_grassmann(self.rng, pool, (2,), 1)
            out[x] = value
        return Germ(out, self.jet_order)

    def coefficient(self, parity: int, pool: tuple[int, ...]) -> Germ:
        if parity:
            return self.odd(pool)
        return self.even(pool)

    def form(self, descriptor: FieldDescriptor) -> JetField:
        grading = descriptor.grading
        pool = self.pools.pool(descriptor.pool)
        if descriptor.pool == "body":
            pool = self.pools.psi if self.profile is Profile.DENSE else ()
        if grading.target is Target.VECTOR:
            return JetField(Target.VECTOR, [self.coefficient(grading.coefficient_parity, pool) for _ in range(DIM)])
        if grading.target is Target.COVECTOR:
            top = FiberSpace(4, 4).basis_field(0).germ
            return JetField(
                Target.COVECTOR, [self.coefficient(grading.coefficient_parity, pool) * top for _ in range(DIM)]
            )
        space = FiberSpace(grading.form_degree, grading.multivector_degree, grading.target)
        components = [self.coefficient(grading.coefficient_parity, pool) for _ in range(space.dim)]
        return space.assemble(components)

    def vielbein(self) -> JetField:
        total = Germ(order=self.jet_order)
        soul_pool = self.pools.psi if self.profile is Profile.DENSE else ()
        for a in range(DIM):
            for mu in range(DIM):
                coefficient = self.even(soul_pool)
                base = Fraction(1 if a == mu else 0) + self.rng.choice(PERTURBATIONS)
                value = {x: g for x, g in coefficient.terms.items() if x != X0}
                value[X0] = GrassmannElement.scalar(base) + coefficient.value().soul
                total = total + Germ(value, self.jet_order) * dx(mu) * v(a)
        return JetField.scalar(total)


def sample_configuration(
    seed: int,
    jet_order: int = 2,
    odd_generators: int = 12,
    profile: Profile | str = Profile.SPARSE,
) -> BVConfiguration:
    """Draw a random configuration satisfying every constraint of the multiplet.

    The coframe body is the identity plus entries in ``{0, +-1/8, +-1/4}``, which keeps it
    invertible; spinor components are fixed by the star operation, which with the chosen
    charge conjugation is the Majorana condition.

    Args:
        seed: Sampling seed; equal seeds give equal configurations.
        jet_order: Highest coordinate degree sampled.
        odd_generators: Size of the Grassmann algebra.
        profile: Sparse or dense coefficients.

    Raises:
        ConfigError: If the jet order is negative or the algebra too small.
    """
    if jet_order < 0:
        msg = f"jet_order must be >= 0, got {jet_order}"
        raise ConfigError(msg)
    pools = generator_pools(odd_generators)
    profile = Profile(profile)
    rng = Random(seed)
    sampler = _Sampler(rng, pools, jet_order, profile)
    fields: dict[FieldName, JetField] = {FieldName.E: sampler.vielbein()}
    for name, descriptor in REGISTRY.items():
        if name is FieldName.E:
            continue
        fields[name] = sampler.form(descriptor)
    config = BVConfiguration(fields, jet_order, odd_generators, seed, profile)
    logger.debug("Sampled configuration seed=%d K=%d N=%d profile=%s", seed, jet_order, odd_generators, profile)
    return config


def sample_variation(config: BVConfiguration, seed: int, names: tuple[FieldName, ...]) -> dict[FieldName, JetField]:
    """Infinitesimal variations ``epsilon X`` of the named fields.

    The shift generator makes every variation square to zero, so anything evaluated on
    ``config + variation`` is exactly linear in it.

    Raises:
        EpsilonCollisionError: If the configuration already uses generator 0.
    """
    config.require_epsilon_free()
    rng = Random(seed)
    pools = generator_pools(config.odd_generators)
    sampler = _Sampler(rng, pools, config.jet_order, config.profile)
    eps = Germ.generator(0)
    out = {}
    for name in names:
        descriptor = REGISTRY[name]
        flipped = Grading(
            descriptor.grading.form_degree,
            descriptor.grading.target,
            descriptor.grading.multivector_degree,
            descriptor.grading.ghost_number,
            1 - descriptor.grading.coefficient_parity,
        )
        raw = sampler.form(FieldDescriptor(name, flipped, "psi" if descriptor.pool == "body" else descriptor.pool, ""))
        out[name] = _star_fix(raw.map(lambda g: eps * g))
    return out


def _star_fix(field_value: JetField) -> JetField:
    """Rotate each coefficient so that the term is fixed by the star operation."""

    def fix(g: GrassmannElement) -> GrassmannElement:
        out = {}
        for mask, coefficient in g.terms.items():
            degree = (mask & THETA_MASK & ~EPSILON_MASK).bit_count()
            magnitude = coefficient.re if coefficient.im == 0 else coefficient.im
            out[mask] = GaussianRational(magnitude) if degree % 4 in (0, 1) else GaussianRational(0, magnitude)
        return GrassmannElement(out)

    return field_value.map(lambda germ: germ.map(fix))


def inverse_vielbein_jets(e: JetField) -> InverseVielbein:
    """Inverse vielbein ``e^mu_a`` as germs, exact to the order of ``e``.

    Uses ``(B + S)^-1 = sum_k (-B^-1 S)^k B^-1`` with ``B`` the numeric body and ``S``
    nilpotent (soul and coordinate dependence).

    Raises:
        NonInvertibleVielbeinError: If the body is singular.
        ConvergenceError: If the series does not terminate.
    """
    germ = e.germ
    order = germ.order
    matrix = [[germ_component(germ, (mu,), (a,)) for mu in range(DIM)] for a in range(DIM)]
    try:
        body_inverse = exact_linalg.inverse(vielbein_body(e))
    except NonInvertibleError as exc:
        msg = "Vielbein body is singular; cannot invert e^a_mu"
        raise NonInvertibleVielbeinError(msg) from exc
    binv = [[Germ.constant(body_inverse[mu][a]) for a in range(DIM)] for mu in range(DIM)]
    soul = [
        [matrix[a][mu] - Germ.constant(vielbein_body(e)[a][mu]) for mu in range(DIM)]
        for a in range(DIM)
    ]
    # step = -B^-1 S, indexed [mu][nu]
    step = [
        [_sum_products([(binv[mu][a], soul[a][nu]) for a in range(DIM)], order).scale(-1) for nu in range(DIM)]
        for mu in range(DIM)
    ]
    result = [row[:] for row in binv]
    term = [row[:] for row in binv]
    for _ in range(4 * (order + 1) + MAX_ODD_GENERATORS):
        term = [
            [_sum_products([(step[mu][nu], term[nu][a]) for nu in range(DIM)], order) for a in range(DIM)]
            for mu in range(DIM)
        ]
        if all(x.is_zero() for row in term for x in row):
            break
        result = [[result[mu][a] + term[mu][a] for a in range(DIM)] for mu in range(DIM)]
    else:
        msg = "Neumann series for the inverse vielbein did not terminate"
        raise ConvergenceError(msg)
    return tuple(tuple(x.truncate(order) for x in row) for row in result)


def _sum_products(pairs: list[tuple[Germ, Germ]], order: int) -> Germ:
    total = Germ(order=order)
    for x, y in pairs:
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total


def phi_generator(chi: JetField, e_inv: InverseVielbein) -> JetField:
    """``phi^mu = chi_bar gamma^a chi e^mu_a``.

    Raises:
        NotMajoranaError: If ``chi`` violates the Majorana constraint.
        GradingMismatchError: If ``chi`` has odd coefficients.
    """
    if majorana_violation(chi) is not None:
        msg = "Supersymmetry ghost violates the Majorana constraint"
        raise NotMajoranaError(msg)
    if chi.parity() == 1:
        msg = "phi needs an even supersymmetry ghost"
        raise GradingMismatchError(msg)
    rep = build_gamma_rep()
    chi_bar = majorana_bar_field(chi)
    bilinears = [wedge(wedge(chi_bar, JetField.numeric(rep.gamma_upper[a])), chi).germ for a in range(DIM)]
    order = min(chi.order, min(x.order for row in e_inv for x in row))
    entries = []
    for mu in range(DIM):
        total = Germ(order=order)
        for a in range(DIM):
            if not bilinears[a].is_zero() and not e_inv[mu][a].is_zero():
                total = total + bilinears[a] * e_inv[mu][a]
        entries.append(total)
    return JetField(Target.VECTOR, entries)


def antifield_reparam(config: BVConfiguration) -> CanonicalAntifields:
    """Canonical antifields from their reduced forms.

    ``omega_dag = e omega_check``, ``c_dag = e^2/2 c_check``,
    ``psi_dag = e gamma^3 gamma_underline psi0_dag / 3!`` and ``chi_dag = e^4/4! chi0_dag``.
    """
    e = config.e
    return CanonicalAntifields(
        omega_dag=wedge(e, config.omega_check),
        c_dag=wedge(wedge_power(e, 2).scale(Fraction(1, 2)), config.c_check),
        psi_dag=theta_gamma_map(e, config.psi0_dag),
        chi_dag=wedge(wedge_power(e, 4).scale(Fraction(1, 24)), config.chi0_dag),
    )


def invert_reparam(e: JetField, canonical: CanonicalAntifields) -> dict[FieldName, JetField]:
    """Recover the reduced antifields from canonical ones by exact solves."""
    return {
        FieldName.OMEGA_CHECK: solve_linear(w_descriptor(1, 2, 1), e, canonical.omega_dag),
        FieldName.C_CHECK: solve_linear(w_descriptor(2, 2, 0), e, canonical.c_dag),
        FieldName.PSI0_DAG: solve_linear(THETA_GAMMA, e, canonical.psi_dag),
        FieldName.CHI0_DAG: solve_linear(w_descriptor(4, 0, 0, Target.SPINOR), e, canonical.chi_dag),
    }


def grading_audit(config: BVConfiguration) -> dict[FieldName, bool]:
    """Whether each coordinate matches its registry grading."""
    out = {}
    for name, descriptor in REGISTRY.items():
        value = config.fields[name]
        if descriptor.grading.target is Target.COVECTOR:
            components = [JetField.scalar(entry) for entry in value.entries]
            scalar = Grading(4, Target.SCALAR, 4, -2, descriptor.grading.coefficient_parity)
            out[name] = all(audit_grading(component, scalar) for component in components)
        elif descriptor.grading.target is Target.VECTOR:
            out[name] = all(
                audit_grading(JetField.scalar(entry), Grading(0, Target.SCALAR, 0, 1, 1)) for entry in value.entries
            )
        else:
            out[name] = audit_grading(value, descriptor.grading)
    return out


def majorana_audit(config: BVConfiguration) -> dict[FieldName, bool]:
    """Whether each spinor coordinate satisfies the Majorana constraint."""
    return {name: majorana_violation(config.fields[name]) is None for name in SPINOR_FIELDS}


def on_shell_projection(config: BVConfiguration) -> BVConfiguration:
    """Shift the connection so that ``d_omega e = psi_bar gamma psi / 2`` holds on jets.

    The torsion changes by ``-[e, delta]`` under ``omega -> omega + delta``, so ``delta``
    is the solution of ``[e, delta] = T``; the result is known to one order less.
    """
    e, psi = config.e, config.psi
    psi_bar = majorana_bar_field(psi)
    torsion = covariant_d(config.omega, e) - wedge(wedge(psi_bar, gamma_field()), psi).scale(Fraction(1, 2))
    delta = solve_linear(rho_descriptor(1, 2), e, torsion)
    order = config.jet_order - 1
    projected = config.truncated(order).with_fields(omega=(config.omega + delta).truncate(order))
    return projected


def constant_configuration(odd_generators: int = 12, jet_order: int = 2) -> BVConfiguration:
    """Identity coframe with every other coordinate zero."""
    fields: dict[FieldName, JetField] = {}
    total = Germ(order=jet_order)
    for a in range(DIM):
        total = total + dx(a) * v(a)
    fields[FieldName.E] = JetField.scalar(total)
    for name, descriptor in REGISTRY.items():
        if name is FieldName.E:
            continue
        fields[name] = JetField.zero(descriptor.grading.target, jet_order)
    return BVConfiguration(fields, jet_order, odd_generators, None)


