"""Fibrewise linear maps built from the coframe.

Every map here is linear over the field-generator coefficients, so its behaviour on a fibre
is captured by a numeric matrix in a fixed basis. Basis vectors of ``Omega^(i,j)`` are the
monomials ``dx^I v_J`` with ``I`` and ``J`` ascending tuples in lexicographic order; for
spinor targets the spinor index runs fastest. Rank certification uses the body of the
coframe, and solves correct the body inverse by a nilpotent iteration.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from itertools import combinations
from math import comb, factorial
from typing import Any

from sugra_bv_verifier import exact_linalg
from sugra_bv_verifier.errors import (
    ConvergenceError,
    DegreeOverflowError,
    DegreeUnderflowError,
    NonInvertibleError,
    NonInvertibleVielbeinError,
)
from sugra_bv_verifier.exact_linalg import Matrix
from sugra_bv_verifier.exact_scalars import ZERO, GaussianRational
from sugra_bv_verifier.graded_fiber import (
    DIM,
    EXACT,
    Germ,
    JetField,
    Target,
    body_field,
    dx,
    eta_bracket,
    gamma_power_field,
    gamma_underline,
    germ_component,
    v,
    wedge,
    wedge_power,
)

logger = logging.getLogger(__name__)

MAX_SOLVE_ITERATIONS = 256


@dataclass(frozen=True)
class FiberSpace:
    """The fibre of ``Omega^(i,j)``, optionally tensored with spinors."""

    form_degree: int
    multivector_degree: int
    target: Target = Target.SCALAR

    def __post_init__(self) -> None:
        """Validate degrees."""
        if not (0 <= self.form_degree <= DIM and 0 <= self.multivector_degree <= DIM):
            msg = f"Degrees ({self.form_degree},{self.multivector_degree}) outside 0..{DIM}"
            raise DegreeOverflowError(msg)

    @property
    def label(self) -> str:
        """Short human-readable name."""
        suffix = "" if self.target is Target.SCALAR else f"x{self.target}"
        return f"({self.form_degree},{self.multivector_degree}){suffix}"

    @property
    def spinor_dim(self) -> int:
        """Number of spinor components per form monomial."""
        return 1 if self.target is Target.SCALAR else 4

    @property
    def dim(self) -> int:
        """Fibre dimension ``C(4,i) C(4,j)`` (times four for spinors)."""
        return comb(DIM, self.form_degree) * comb(DIM, self.multivector_degree) * self.spinor_dim

    def basis(self) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
        """Basis labels ``(I, J, spinor index)`` in lexicographic order."""
        return _basis(self.form_degree, self.multivector_degree, self.spinor_dim)

    def components(self, field: JetField) -> list[Germ]:
        """Coefficient germs of a field in this basis."""
        return [germ_component(field.entries[s], form, multi) for form, multi, s in self.basis()]

    def assemble(self, components: list[Germ]) -> JetField:
        """Field with the given coefficient germs."""
        order = min((c.order for c in components), default=EXACT)
        entries = [Germ(order=order) for _ in range(self.spinor_dim)]
        for (form, multi, s), coefficient in zip(self.basis(), components, strict=True):
            if coefficient.is_zero():
                continue
            entries[s] = entries[s] + coefficient * _monomial(form, multi)
        return JetField(self.target, entries)

    def basis_field(self, index: int) -> JetField:
        """The ``index``-th basis vector as a field."""
        form, multi, s = self.basis()[index]
        entries = [Germ() for _ in range(self.spinor_dim)]
        entries[s] = _monomial(form, multi)
        return JetField(self.target, entries)


@cache
def _basis(
    form_degree: int, multivector_degree: int, spinor_dim: int
) -> list[tuple[tuple[int, ...], tuple[int, ...], int]]:
    return [
        (form, multi, s)
        for form in combinations(range(DIM), form_degree)
        for multi in combinations(range(DIM), multivector_degree)
        for s in range(spinor_dim)
    ]


@cache
def _monomial(form: tuple[int, ...], multi: tuple[int, ...]) -> Germ:
    out = Germ.constant(1)
    for mu in form:
        out = out * dx(mu)
    for a in multi:
        out = out * v(a)
    return out


type LinearAction = Callable[[JetField, JetField], JetField]


@dataclass(frozen=True)
class MapDescriptor:
    """A coframe-dependent linear map between two fibres.

    Attributes:
        name: Identifier used in reports.
        domain: Source fibre.
        codomain: Target fibre.
        action: ``action(e, x)`` evaluates the map.
        expect_injective: Property claimed for the map, None when no claim is made.
        expect_surjective: Property claimed for the map, None when no claim is made.
        anchor: Where the claim comes from.
    """

    name: str
    domain: FiberSpace
    codomain: FiberSpace
    action: LinearAction
    expect_injective: bool | None = None
    expect_surjective: bool | None = None
    anchor: str = ""


@dataclass(frozen=True)
class FiberMatrix:
    """Matrix of a map on the body of the coframe, columns indexed by the domain basis."""

    rows: FiberSpace
    cols: FiberSpace
    entries: Matrix


@dataclass(frozen=True)
class RankCertificate:
    """Outcome of certifying one map."""

    name: str
    domain: str
    codomain: str
    domain_dim: int
    codomain_dim: int
    rank: int
    injective: bool
    surjective: bool
    expect_injective: bool | None
    expect_surjective: bool | None
    anchor: str

    @property
    def matches(self) -> bool:
        """True when every claimed property holds and no unclaimed one is contradicted."""
        if self.expect_injective is not None and self.injective != self.expect_injective:
            return False
        return self.expect_surjective is None or self.surjective == self.expect_surjective

    def to_dict(self) -> dict[str, Any]:
        """Serialise for rank tables."""
        return {
            "map": self.name,
            "domain": self.domain,
            "codomain": self.codomain,
            "domain_dim": self.domain_dim,
            "codomain_dim": self.codomain_dim,
            "rank": self.rank,
            "injective": self.injective,
            "surjective": self.surjective,
            "matches": self.matches,
        }


def _check_w_degrees(k: int, i: int, j: int) -> None:
    if i + k > DIM or j + k > DIM:
        msg = f"W_{k}^({i},{j}) would leave the fibre: target degree ({i + k},{j + k})"
        raise DegreeOverflowError(msg)


def w_map(k: int, i: int, j: int, e: JetField, x: JetField) -> JetField:
    """``X -> e^k X / k!`` on ``Omega^(i,j)``.

    Raises:
        DegreeOverflowError: If ``i + k`` or ``j + k`` exceeds four.
    """
    _check_w_degrees(k, i, j)
    return wedge(wedge_power(e, k).scale(Fraction(1, factorial(k))), x)


def rho_map(i: int, j: int, e: JetField, x: JetField) -> JetField:
    """``X -> [e, X]`` on ``Omega^(i,j)``.

    Raises:
        DegreeUnderflowError: If ``j`` is zero.
        DegreeOverflowError: If ``i`` is already four.
    """
    if j < 1:
        msg = f"rho^({i},{j}) needs multivector degree >= 1"
        raise DegreeUnderflowError(msg)
    if i + 1 > DIM:
        msg = f"rho^({i},{j}) would raise the form degree past {DIM}"
        raise DegreeOverflowError(msg)
    return eta_bracket(e, x)


def w_descriptor(k: int, i: int, j: int, target: Target = Target.SCALAR, **claims: Any) -> MapDescriptor:
    """Descriptor of ``W_k^(i,j)``."""
    _check_w_degrees(k, i, j)
    return MapDescriptor(
        name=f"W{k}^({i},{j})" + ("" if target is Target.SCALAR else f"x{target}"),
        domain=FiberSpace(i, j, target),
        codomain=FiberSpace(i + k, j + k, target),
        action=lambda e, x: w_map(k, i, j, e, x),
        **claims,
    )


def rho_descriptor(i: int, j: int, **claims: Any) -> MapDescriptor:
    """Descriptor of ``rho^(i,j)``."""
    return MapDescriptor(
        name=f"rho^({i},{j})",
        domain=FiberSpace(i, j),
        codomain=FiberSpace(i + 1, j - 1),
        action=lambda e, x: rho_map(i, j, e, x),
        **claims,
    )


def theta_map(e: JetField, psi: JetField) -> JetField:
    """``psi -> e gamma^3 psi / 3!``."""
    return wedge(wedge(e, gamma_power_field(3)), psi).scale(Fraction(1, 6))


def theta_gamma_map(e: JetField, psi: JetField) -> JetField:
    """``psi -> e gamma^3 gamma_underline psi / 3!``."""
    return wedge(wedge(wedge(e, gamma_power_field(3)), gamma_underline(e)), psi).scale(Fraction(1, 6))


def theta_gamma_reversed_map(e: JetField, psi: JetField) -> JetField:
    """``psi -> e gamma_underline gamma^3 psi / 3!``."""
    return wedge(wedge(wedge(e, gamma_underline(e)), gamma_power_field(3)), psi).scale(Fraction(1, 6))


def _alpha_lhs(e: JetField, alpha: JetField) -> JetField:
    return wedge(gamma_power_field(3), _i_e_gamma_underline(e, alpha))


def _i_e_gamma_underline(e: JetField, alpha: JetField) -> JetField:
    return wedge(wedge(e, gamma_underline(e)), alpha).scale(GaussianRational(0, 1))


def _gamma3_action(e: JetField, theta: JetField) -> JetField:
    del e
    return wedge(gamma_power_field(3), theta)


def _kappa_lhs(e: JetField, kappa: JetField) -> JetField:
    return _gamma_underline_gamma3(e, wedge(e, kappa))


def _gamma_underline_gamma3(e: JetField, theta: JetField) -> JetField:
    return wedge(wedge(gamma_underline(e), gamma_power_field(3)), theta)


SPINOR_10 = FiberSpace(1, 0, Target.SPINOR)
SPINOR_31 = FiberSpace(3, 1, Target.SPINOR)
SPINOR_21 = FiberSpace(2, 1, Target.SPINOR)
SPINOR_34 = FiberSpace(3, 4, Target.SPINOR)
SPINOR_24 = FiberSpace(2, 4, Target.SPINOR)

THETA = MapDescriptor(
    "Theta^(1,0)", SPINOR_10, SPINOR_24, theta_map, True, None, "e gamma^3 injective on spinor 1-forms"
)
THETA_GAMMA = MapDescriptor(
    "Theta_gamma^(1,0)", SPINOR_10, SPINOR_34, theta_gamma_map, True, True, "e gamma^3 gamma_underline isomorphism"
)
THETA_GAMMA_REVERSED = MapDescriptor(
    "Theta_gamma_rev^(1,0)",
    SPINOR_10,
    SPINOR_34,
    theta_gamma_reversed_map,
    True,
    True,
    "e gamma_underline gamma^3 isomorphism",
)
ALPHA_MAP = MapDescriptor("gamma^3 i e gamma_underline", SPINOR_10, SPINOR_34, _alpha_lhs, True, True)
GAMMA3_ON_31 = MapDescriptor("gamma^3 on (3,1) spinors", SPINOR_31, SPINOR_34, _gamma3_action, None, True)
KAPPA_MAP = MapDescriptor("gamma_underline gamma^3 e", SPINOR_10, SPINOR_34, _kappa_lhs, True, True)
GAMMA_UNDERLINE_GAMMA3_ON_21 = MapDescriptor(
    "gamma_underline gamma^3 on (2,1) spinors", SPINOR_21, SPINOR_34, _gamma_underline_gamma3, None, True
)

# Arrows of the W_1 diagram in the bulk: (source degrees, injective, surjective).
DIAGRAM_ARROWS: tuple[tuple[tuple[int, int], bool, bool], ...] = (
    ((1, 0), True, False),
    ((2, 1), True, True),
    ((3, 2), False, True),
    ((0, 0), True, False),
    ((1, 1), True, False),
    ((2, 2), False, True),
    ((3, 3), False, True),
    ((0, 1), True, False),
    ((1, 2), True, True),
    ((2, 3), False, True),
    ((0, 2), True, False),
    ((1, 3), False, True),
    ((0, 3), True, True),
    ((2, 0), True, False),
    ((3, 1), False, True),
    ((3, 0), True, True),
)


def diagram_descriptors() -> list[MapDescriptor]:
    """Every arrow of the bulk diagram with its claimed pattern."""
    return [
        w_descriptor(1, i, j, expect_injective=inj, expect_surjective=sur, anchor="bulk W_1 diagram")
        for (i, j), inj, sur in DIAGRAM_ARROWS
    ]


def isomorphism_descriptors() -> list[MapDescriptor]:
    """The list of coframe isomorphisms and the two spinor maps."""
    iso = {"expect_injective": True, "expect_surjective": True, "anchor": "useful isomorphisms"}
    return [
        w_descriptor(2, 0, 2, **iso),
        w_descriptor(2, 2, 0, **iso),
        # Certified on (1,1) -> (3,3), the degrees the map actually has.
        w_descriptor(2, 1, 1, **iso),
        w_descriptor(4, 0, 0, **iso),
        rho_descriptor(0, 1, **iso),
        rho_descriptor(3, 4, **iso),
        THETA,
        THETA_GAMMA,
        THETA_GAMMA_REVERSED,
    ]


def fiber_matrix(descriptor: MapDescriptor, e: JetField) -> FiberMatrix:
    """Numeric matrix of a map on the body of ``e``."""
    body = body_field(e)
    entries: Matrix = [[ZERO] * descriptor.domain.dim for _ in range(descriptor.codomain.dim)]
    for col in range(descriptor.domain.dim):
        image = descriptor.action(body, descriptor.domain.basis_field(col))
        for row, coefficient in enumerate(descriptor.codomain.components(image)):
            entries[row][col] = coefficient.value().body
    return FiberMatrix(descriptor.codomain, descriptor.domain, entries)


def rank_certify(descriptor: MapDescriptor, e: JetField) -> RankCertificate:
    """Certify rank, injectivity and surjectivity by exact elimination on the body.

    Raises:
        NonInvertibleVielbeinError: If the body of ``e`` is degenerate.
    """
    require_invertible(e)
    matrix = fiber_matrix(descriptor, e)
    rank = exact_linalg.rank(matrix.entries)
    certificate = RankCertificate(
        name=descriptor.name,
        domain=descriptor.domain.label,
        codomain=descriptor.codomain.label,
        domain_dim=descriptor.domain.dim,
        codomain_dim=descriptor.codomain.dim,
        rank=rank,
        injective=rank == descriptor.domain.dim,
        surjective=rank == descriptor.codomain.dim,
        expect_injective=descriptor.expect_injective,
        expect_surjective=descriptor.expect_surjective,
        anchor=descriptor.anchor,
    )
    logger.debug(
        "Certified %s: rank %d (%d -> %d)", descriptor.name, rank, certificate.domain_dim, certificate.codomain_dim
    )
    return certificate


def vielbein_body(e: JetField) -> Matrix:
    """Numeric matrix ``e^a_mu`` of the body, rows indexed by frame index."""
    germ = body_field(e).germ
    return [[germ_component(germ, (mu,), (a,)).value().body for mu in range(DIM)] for a in range(DIM)]


def require_invertible(e: JetField) -> None:
    """Raise NonInvertibleVielbeinError unless the body of ``e`` is invertible."""
    if exact_linalg.determinant(vielbein_body(e)).is_zero():
        msg = "Vielbein body is degenerate; choose a coframe with invertible e^a_mu"
        raise NonInvertibleVielbeinError(msg)


def solve_linear(descriptor: MapDescriptor, e: JetField, y: JetField) -> JetField:
    """Unique ``x`` with ``action(e, x) = y`` at every jet order.

    The body inverse gives a first approximation; each correction step multiplies the error
    by a nilpotent operator (soul of ``e`` or higher coordinate degree), so the iteration
    terminates exactly.

    Raises:
        NonInvertibleVielbeinError: If the body map is singular.
        ConvergenceError: If the correction does not terminate.
    """
    if descriptor.domain.dim != descriptor.codomain.dim:
        msg = f"{descriptor.name} is not square ({descriptor.domain.dim} -> {descriptor.codomain.dim})"
        raise NonInvertibleVielbeinError(msg)
    try:
        body_inverse = exact_linalg.inverse(fiber_matrix(descriptor, e).entries)
    except NonInvertibleError as exc:
        msg = f"{descriptor.name} is singular on the body of the coframe"
        raise NonInvertibleVielbeinError(msg) from exc
    x = descriptor.domain.assemble([Germ(order=y.order) for _ in range(descriptor.domain.dim)])
    for iteration in range(MAX_SOLVE_ITERATIONS):
        residual = y - descriptor.action(e, x)
        if residual.is_zero():
            logger.debug("Solved %s in %d iterations", descriptor.name, iteration)
            return x
        r = descriptor.codomain.components(residual)
        update = []
        for row in body_inverse:
            total = Germ(order=residual.order)
            for coefficient, germ in zip(row, r, strict=True):
                if not coefficient.is_zero() and not germ.is_zero():
                    total = total + germ.scale(coefficient)
            update.append(total)
        x = x + descriptor.domain.assemble(update)
    msg = f"Nilpotent correction for {descriptor.name} did not terminate in {MAX_SOLVE_ITERATIONS} steps"
    raise ConvergenceError(msg)


def invert_w1_12(e: JetField, y: JetField) -> JetField:
    """The unique (1,2)-form ``x`` with ``e x = y``."""
    return solve_linear(w_descriptor(1, 1, 2), e, y)


def split_alpha_beta(e: JetField, theta: JetField) -> tuple[JetField, JetField]:
    """Split a spinor (3,1)-form as ``i e gamma_underline alpha + beta`` with ``gamma^3 beta = 0``."""
    alpha = solve_linear(ALPHA_MAP, e, wedge(gamma_power_field(3), theta))
    beta = theta - _i_e_gamma_underline(e, alpha)
    return alpha, beta


def split_kappa_varkappa(e: JetField, theta: JetField) -> tuple[JetField, JetField]:
    """Split a spinor (2,1)-form as ``e kappa + varkappa`` with ``gamma_underline gamma^3 varkappa = 0``."""
    kappa = solve_linear(KAPPA_MAP, e, _gamma_underline_gamma3(e, theta))
    return kappa, theta - wedge(e, kappa)


def splitting_dimensions(e: JetField) -> dict[str, tuple[int, int, int]]:
    """``(part dimension, kernel dimension, total)`` for both splittings.

    Uniqueness holds when the part and kernel dimensions add up to the fibre dimension and
    the part map composed with the kernel condition has full rank.
    """
    out = {}
    for name, part, condition in (
        ("alpha_beta", ALPHA_MAP, GAMMA3_ON_31),
        ("kappa_varkappa", KAPPA_MAP, GAMMA_UNDERLINE_GAMMA3_ON_21),
    ):
        part_rank = rank_certify(part, e).rank
        kernel = condition.domain.dim - rank_certify(condition, e).rank
        out[name] = (part_rank, kernel, condition.domain.dim)
    return out
