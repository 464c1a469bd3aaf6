"""Gamma matrices, charge conjugation and Majorana spinors over the Grassmann ring.

The representation is fixed once: ``gamma_a = i * G_a`` with real matrices ``G_a`` built
from tensor products of 2x2 blocks, so that ``{gamma_a, gamma_b} = -2 eta_ab``. The charge
conjugation matrix is not written down but solved from its defining relations.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from math import factorial
from random import Random

from sugra_bv_verifier import exact_linalg
from sugra_bv_verifier.errors import NotMajoranaError, RepresentationSearchFailedError
from sugra_bv_verifier.exact_linalg import Matrix
from sugra_bv_verifier.exact_scalars import (
    I,
    ONE,
    V_BIT0,
    ZERO,
    GaussianRational,
    GrassmannElement,
    Parity,
    mask_generators,
    random_rational,
)
from sugra_bv_verifier.models import Residual, Witness

logger = logging.getLogger(__name__)

ETA = (-1, 1, 1, 1)
SPINOR_DIM = 4
FRAME_DIM = 4

# Regression constants read off the solved representation.
EXPECTED_T = (1, -1, -1, 1)
GAMMA5_SQUARE_SIGN = 1

type GMatrix = list[list[GrassmannElement]]


@dataclass(frozen=True)
class GammaRep:
    """Explicit Clifford representation for signature (-,+,+,+)."""

    gamma: tuple[Matrix, ...]
    gamma_upper: tuple[Matrix, ...]
    gamma5: Matrix
    C: Matrix
    C_inv: Matrix
    eta: tuple[int, ...] = ETA


@dataclass(frozen=True)
class SpinorPoly:
    """A Dirac spinor with Grassmann coefficients of one declared parity."""

    components: tuple[GrassmannElement, ...]
    parity: Parity

    def __post_init__(self) -> None:
        if len(self.components) != SPINOR_DIM:
            msg = f"Spinor needs {SPINOR_DIM} components, got {len(self.components)}"
            raise ValueError(msg)
        for component in self.components:
            if not component.is_zero() and component.parity is not self.parity:
                msg = f"Spinor component of parity {component.parity} in a {self.parity} spinor"
                raise ValueError(msg)

    @classmethod
    def zero(cls, parity: Parity = Parity.ODD) -> SpinorPoly:
        """Return the zero spinor."""
        return cls(tuple(GrassmannElement() for _ in range(SPINOR_DIM)), parity)

    @property
    def parity_bit(self) -> int:
        """Parity as 0 or 1."""
        return 1 if self.parity is Parity.ODD else 0


def _kron(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    return [
        [GaussianRational(a[r // 2][c // 2] * b[r % 2][c % 2]) for c in range(4)]
        for r in range(4)
    ]


def _scale(m: Matrix, factor: GaussianRational) -> Matrix:
    return [[x * factor for x in row] for row in m]


def _add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb, strict=True)] for ra, rb in zip(a, b, strict=True)]


def _product(matrices: Sequence[Matrix]) -> Matrix:
    out = exact_linalg.identity(SPINOR_DIM)
    for m in matrices:
        out = exact_linalg.matmul(out, m)
    return out


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 when an entry repeats."""
    if len(set(seq)) != len(seq):
        return 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions & 1 else 1


def levi_civita_upper(*indices: int) -> int:
    """Contravariant Levi-Civita symbol with ``eps^{0123} = -1``."""
    return -permutation_sign(indices)


def levi_civita_lower(*indices: int) -> int:
    """Covariant Levi-Civita symbol with ``eps_{0123} = +1``, matching ``v0 v1 v2 v3 = Vol``."""
    return permutation_sign(indices)


def _solve_charge_conjugation(gamma: Sequence[Matrix]) -> Matrix:
    rows: Matrix = []
    for r in range(4):
        for c in range(4):
            row = [ZERO] * 16
            row[4 * c + r] = row[4 * c + r] + ONE
            row[4 * r + c] = row[4 * r + c] + ONE
            rows.append(row)
    for g in gamma:
        for r in range(4):
            for c in range(4):
                row = [ZERO] * 16
                for k in range(4):
                    row[4 * k + c] = row[4 * k + c] + g[k][r]
                    row[4 * r + k] = row[4 * r + k] + g[k][c]
                rows.append(row)
    basis = exact_linalg.nullspace(rows)
    if len(basis) != 1:
        msg = f"Charge conjugation null space has dimension {len(basis)}, expected 1"
        raise RepresentationSearchFailedError(msg)
    vector = basis[0]
    return [[vector[4 * r + c] for c in range(4)] for r in range(4)]


@cache
def build_gamma_rep() -> GammaRep:
    """Build the fixed representation and solve for the charge conjugation matrix.

    Returns:
        The representation, with ``C`` normalised to coincide with ``gamma^0`` so that
        Majorana spinors have self-conjugate components.

    Raises:
        RepresentationSearchFailedError: If the defining relations do not fix ``C``
            uniquely or the ``t_N`` table is not recovered.
    """
    one = ((1, 0), (0, 1))
    s1 = ((0, 1), (1, 0))
    s3 = ((1, 0), (0, -1))
    eps = ((0, 1), (-1, 0))
    real = [_kron(eps, one), _kron(s1, one), _kron(s3, s1), _kron(s3, s3)]
    gamma = tuple(_scale(g, I) for g in real)
    gamma_upper = tuple(_scale(g, GaussianRational(ETA[a])) for a, g in enumerate(gamma))
    gamma5 = _scale(_product(gamma_upper), I)

    raw_c = _solve_charge_conjugation(gamma)
    anchor = next((r, c) for r in range(4) for c in range(4) if not raw_c[r][c].is_zero())
    factor = gamma_upper[0][anchor[0]][anchor[1]] / raw_c[anchor[0]][anchor[1]]
    C = _scale(raw_c, factor)
    if C != gamma_upper[0]:
        msg = "Solved charge conjugation matrix is not proportional to gamma^0"
        raise RepresentationSearchFailedError(msg)
    rep = GammaRep(
        gamma=gamma,
        gamma_upper=gamma_upper,
        gamma5=gamma5,
        C=C,
        C_inv=exact_linalg.inverse(C),
    )
    table = tuple(t_parameter(rep, n) for n in range(4))
    if table != EXPECTED_T:
        msg = f"Recovered t_N table {table}, expected {EXPECTED_T}"
        raise RepresentationSearchFailedError(msg)
    logger.debug("Built gamma representation with t_N = %s", table)
    return rep


def antisymmetrized_gamma(rep: GammaRep, indices: Sequence[int], upper: bool = False) -> Matrix:
    """Antisymmetrised product ``gamma_[a1 ... an]`` with unit weight.

    Args:
        rep: The representation.
        indices: Frame indices; repeats are allowed and give zero.
        upper: Use raised indices.

    Returns:
        The average over signed permutations of the ordered products.
    """
    source = rep.gamma_upper if upper else rep.gamma
    n = len(indices)
    if n == 0:
        return exact_linalg.identity(SPINOR_DIM)
    total = exact_linalg.zeros(SPINOR_DIM, SPINOR_DIM)
    for perm in itertools.permutations(range(n)):
        sign = permutation_sign(perm)
        term = _product([source[indices[p]] for p in perm])
        total = _add(total, _scale(term, GaussianRational(sign)))
    return _scale(total, GaussianRational(Fraction(1, factorial(n))))


def t_parameter(rep: GammaRep, n: int) -> int:
    """Read ``t_N`` from ``(C gamma^(N))^t = -t_N C gamma^(N)``."""
    m = exact_linalg.matmul(rep.C, antisymmetrized_gamma(rep, list(range(n))))
    for r in range(4):
        for c in range(4):
            if not m[r][c].is_zero():
                ratio = m[c][r] / m[r][c]
                return int(-ratio.re)
    msg = f"C gamma^({n}) vanishes identically"
    raise RepresentationSearchFailedError(msg)


def _matrix_witness(label: str, indices: Sequence[int], residual: Matrix) -> Witness | None:
    for r in range(4):
        for c in range(4):
            if not residual[r][c].is_zero():
                return Witness(
                    field=label,
                    component=f"{list(indices)}[{r},{c}]",
                    derivative_index=[],
                    monomial=[],
                    coefficient=str(residual[r][c]),
                )
    return None


def _first_witness(checks: Sequence[tuple[Sequence[int], Matrix]], label: str) -> Witness | None:
    for indices, residual in checks:
        witness = _matrix_witness(label, indices, residual)
        if witness is not None:
            return witness
    return None


def _contraction_identity(rep: GammaRep) -> list[tuple[Sequence[int], Matrix]]:
    out = []
    g, gu = rep.gamma, rep.gamma_upper
    for b, c, d in itertools.product(range(4), repeat=3):
        lhs = exact_linalg.zeros(4, 4)
        for a in range(4):
            lhs = _add(lhs, _product([gu[a], gu[b], gu[c], gu[d], g[a]]))
        rhs = _scale(_product([gu[d], gu[c], gu[b]]), GaussianRational(2))
        out.append(((b, c, d), _add(lhs, _scale(rhs, GaussianRational(-1)))))
    return out


def _triple_product_identity(rep: GammaRep, epsilon_sign: int) -> list[tuple[Sequence[int], Matrix]]:
    out = []
    g, gu = rep.gamma, rep.gamma_upper
    for a, b, c in itertools.product(range(4), repeat=3):
        lhs = _product([gu[a], gu[b], gu[c]])
        rhs = exact_linalg.zeros(4, 4)
        if a == b:
            rhs = _add(rhs, _scale(gu[c], GaussianRational(-ETA[a])))
        if b == c:
            rhs = _add(rhs, _scale(gu[a], GaussianRational(-ETA[b])))
        if a == c:
            rhs = _add(rhs, _scale(gu[b], GaussianRational(ETA[a])))
        for d in range(4):
            eps = levi_civita_upper(d, a, b, c)
            if eps:
                term = exact_linalg.matmul(g[d], rep.gamma5)
                rhs = _add(rhs, _scale(term, I * (eps * epsilon_sign)))
        out.append(((a, b, c), _add(lhs, _scale(rhs, GaussianRational(-1)))))
    return out


def _gamma5_pair_identity(rep: GammaRep) -> list[tuple[Sequence[int], Matrix]]:
    out = []
    for c, d in itertools.product(range(4), repeat=2):
        lhs = exact_linalg.matmul(rep.gamma5, antisymmetrized_gamma(rep, [c, d], upper=True))
        rhs = exact_linalg.zeros(4, 4)
        for a, b in itertools.product(range(4), repeat=2):
            eps = levi_civita_upper(a, b, c, d)
            if eps:
                term = antisymmetrized_gamma(rep, [a, b])
                rhs = _add(rhs, _scale(term, GaussianRational(0, Fraction(-eps, 2))))
        out.append(((c, d), _add(lhs, _scale(rhs, GaussianRational(-1)))))
    return out


def _gamma5_single_identity(rep: GammaRep) -> list[tuple[Sequence[int], Matrix]]:
    out = []
    for c in range(4):
        lhs = exact_linalg.matmul(rep.gamma5, rep.gamma_upper[c])
        rhs = exact_linalg.zeros(4, 4)
        for a, b, d in itertools.product(range(4), repeat=3):
            eps = levi_civita_upper(a, b, c, d)
            if eps:
                term = antisymmetrized_gamma(rep, [a, b, d])
                rhs = _add(rhs, _scale(term, GaussianRational(0, Fraction(eps, 6))))
        out.append(((c,), _add(lhs, _scale(rhs, GaussianRational(-1)))))
    return out


def check_gamma_identities(rep: GammaRep) -> list[Residual]:
    """Check the four contraction and duality identities over every index assignment.

    The triple-product expansion is evaluated as displayed; when its epsilon term only
    balances with the opposite sign, the row is reported as a non-required finding.

    Args:
        rep: The representation.

    Returns:
        One residual per identity plus the regression constants of the representation.
    """
    residuals = [
        Residual(
            check_id="gamma:contraction",
            anchor="gamma identities: g^a g^b g^c g^d g_a = 2 g^d g^c g^b",
            witness=_first_witness(_contraction_identity(rep), "gamma:contraction"),
        )
    ]
    printed = _first_witness(_triple_product_identity(rep, 1), "gamma:triple_product")
    if printed is None:
        residuals.append(
            Residual(
                check_id="gamma:triple_product",
                anchor="gamma identities: g^a g^b g^c expansion",
                witness=None,
            )
        )
    else:
        flipped = _first_witness(_triple_product_identity(rep, -1), "gamma:triple_product")
        note = (
            "holds with the epsilon term's sign reversed"
            if flipped is None
            else "fails for either sign of the epsilon term"
        )
        residuals.append(
            Residual(
                check_id="gamma:triple_product",
                anchor="gamma identities: g^a g^b g^c expansion",
                witness=printed,
                required=flipped is not None,
                note=note,
            )
        )
    residuals.append(
        Residual(
            check_id="gamma:gamma5_pair",
            anchor="gamma identities: g5 g^[c g^d] = -(i/2) eps^{abcd} g_ab",
            witness=_first_witness(_gamma5_pair_identity(rep), "gamma:gamma5_pair"),
        )
    )
    residuals.append(
        Residual(
            check_id="gamma:gamma5_single",
            anchor="gamma identities: g5 g^c = (i/6) eps g_abd, free index in the third slot",
            witness=_first_witness(_gamma5_single_identity(rep), "gamma:gamma5_single"),
        )
    )
    residuals.extend(_representation_constants(rep))
    return residuals


def _representation_constants(rep: GammaRep) -> list[Residual]:
    checks = []
    for a, b in itertools.product(range(4), repeat=2):
        anti = _add(
            exact_linalg.matmul(rep.gamma[a], rep.gamma[b]),
            exact_linalg.matmul(rep.gamma[b], rep.gamma[a]),
        )
        if a == b:
            anti = _add(anti, _scale(exact_linalg.identity(4), GaussianRational(2 * ETA[a])))
        checks.append(((a, b), anti))
    out = [
        Residual(
            "clifford:anticommutator",
            "{g_a, g_b} = -2 eta_ab",
            _first_witness(checks, "clifford:anticommutator"),
        )
    ]
    square = exact_linalg.matmul(rep.gamma5, rep.gamma5)
    residual = _add(square, _scale(exact_linalg.identity(4), GaussianRational(-GAMMA5_SQUARE_SIGN)))
    out.append(
        Residual(
            "clifford:gamma5_square",
            "g5 := i g^0 g^1 g^2 g^3, squared",
            _matrix_witness("clifford:gamma5_square", (), residual),
        )
    )
    table = tuple(t_parameter(rep, n) for n in range(4))
    witness = None
    if table != EXPECTED_T:
        witness = Witness("clifford:t_table", str(list(table)), [], [], "mismatch")
    out.append(Residual("clifford:t_table", "t_0..t_3 = (1, -1, -1, 1)", witness))
    return out


def gamma_matrix(matrix: Matrix) -> GMatrix:
    """Lift a numeric matrix to Grassmann entries."""
    return [[GrassmannElement.scalar(x) for x in row] for row in matrix]


def gamma_vector(rep: GammaRep) -> GMatrix:
    """The frame-valued constant ``gamma = gamma^a v_a`` as a Grassmann matrix."""
    out: GMatrix = [[GrassmannElement() for _ in range(4)] for _ in range(4)]
    for a in range(FRAME_DIM):
        v = GrassmannElement.generator(V_BIT0 + a)
        for r in range(4):
            for c in range(4):
                entry = rep.gamma_upper[a][r][c]
                if not entry.is_zero():
                    out[r][c] = out[r][c] + v.scale(entry)
    return out


def gmatmul(a: GMatrix, b: GMatrix) -> GMatrix:
    """Product of Grassmann-valued matrices, preserving factor order."""
    n_cols = len(b[0])
    out: GMatrix = []
    for row in a:
        new_row = []
        for c in range(n_cols):
            total = GrassmannElement()
            for k, x in enumerate(row):
                if x.is_zero() or b[k][c].is_zero():
                    continue
                total = total + x * b[k][c]
            new_row.append(total)
        out.append(new_row)
    return out


def gamma_power(rep: GammaRep, n: int) -> GMatrix:
    """Wedge power ``gamma^n`` of the frame-valued gamma."""
    result = gamma_matrix(exact_linalg.identity(4))
    base = gamma_vector(rep)
    for _ in range(n):
        result = gmatmul(result, base)
    return result


def majorana_bar(rep: GammaRep, spinor: SpinorPoly) -> list[GrassmannElement]:
    """Row spinor ``psi_bar_beta = psi_alpha C_alpha_beta``."""
    out = []
    for beta in range(4):
        total = GrassmannElement()
        for alpha in range(4):
            entry = rep.C[alpha][beta]
            if not entry.is_zero():
                total = total + spinor.components[alpha].scale(entry)
        out.append(total)
    return out


def bilinear(row: Sequence[GrassmannElement], matrix: GMatrix, column: Sequence[GrassmannElement]) -> GrassmannElement:
    """Evaluate ``row . matrix . column`` keeping the factor order."""
    total = GrassmannElement()
    for alpha in range(4):
        if row[alpha].is_zero():
            continue
        for beta in range(4):
            if matrix[alpha][beta].is_zero() or column[beta].is_zero():
                continue
            total = total + row[alpha] * matrix[alpha][beta] * column[beta]
    return total


def majorana_defect(rep: GammaRep, spinor: SpinorPoly) -> list[GrassmannElement]:
    """Components of ``lambda^dagger gamma^0 - lambda^t C``."""
    out = []
    gamma0 = rep.gamma_upper[0]
    for beta in range(4):
        total = GrassmannElement()
        for alpha in range(4):
            if not gamma0[alpha][beta].is_zero():
                total = total + spinor.components[alpha].star().scale(gamma0[alpha][beta])
            if not rep.C[alpha][beta].is_zero():
                total = total - spinor.components[alpha].scale(rep.C[alpha][beta])
        out.append(total)
    return out


def is_majorana(rep: GammaRep, spinor: SpinorPoly) -> bool:
    """Return True when the spinor satisfies the Majorana constraint exactly."""
    return all(x.is_zero() for x in majorana_defect(rep, spinor))


def require_majorana(rep: GammaRep, *spinors: SpinorPoly) -> None:
    """Raise NotMajoranaError unless every spinor is Majorana."""
    for index, spinor in enumerate(spinors):
        if not is_majorana(rep, spinor):
            msg = f"Spinor argument {index} violates the Majorana constraint"
            raise NotMajoranaError(msg)


def self_conjugate_coefficient(rng: Random, degree: int) -> GaussianRational:
    """Random coefficient making ``c * theta_S`` invariant under the superalgebra star."""
    value = random_rational(rng)
    if degree % 4 in (2, 3):
        return GaussianRational(0, value)
    return GaussianRational(value)


def random_grassmann(
    rng: Random,
    generators: Sequence[int],
    degrees: Sequence[int],
    terms: int = 2,
    self_conjugate: bool = True,
) -> GrassmannElement:
    """Draw a sparse homogeneous Grassmann element over the given generators.

    Args:
        rng: Seeded generator.
        generators: Pool of odd generator indices.
        degrees: Allowed monomial degrees, all of one parity.
        terms: Number of monomials to draw.
        self_conjugate: Choose coefficients fixed by the star operation.

    Returns:
        The sampled element.
    """
    result = GrassmannElement()
    for _ in range(terms):
        degree = rng.choice(list(degrees))
        if degree > len(generators):
            continue
        chosen = sorted(rng.sample(list(generators), degree))
        if self_conjugate:
            coefficient = self_conjugate_coefficient(rng, degree)
        else:
            coefficient = GaussianRational(random_rational(rng))
        mask = 0
        for g in chosen:
            mask |= 1 << g
        result = result + GrassmannElement({mask: coefficient})
    return result


def majorana_sample(
    rep: GammaRep,
    parity: Parity,
    seed: int,
    generators: Sequence[int] = tuple(range(1, 12)),
    terms: int = 2,
) -> SpinorPoly:
    """Sample a Majorana spinor with homogeneous Grassmann coefficients.

    In this representation ``C = gamma^0``, so the constraint reduces to every component
    being fixed by the star operation.

    Args:
        rep: The representation.
        parity: Requested coefficient parity.
        seed: Seed for the generator; equal seeds give equal spinors.
        generators: Pool of odd generators to draw from.
        terms: Monomials per component.

    Returns:
        A Majorana spinor.
    """
    rng = Random(seed)
    degrees = (1, 3) if parity is Parity.ODD else (0, 2)
    components = tuple(random_grassmann(rng, generators, degrees, terms) for _ in range(4))
    spinor = SpinorPoly(components, parity)
    require_majorana(rep, spinor)
    return spinor


def flip_residual(rep: GammaRep, n: int, psi: SpinorPoly, chi: SpinorPoly) -> GrassmannElement:
    """Residual of the flip relation for the wedge power ``gamma^n``.

    Args:
        rep: The representation.
        n: Power of the frame-valued gamma, 0 to 3.
        psi: Majorana spinor.
        chi: Majorana spinor.

    Returns:
        ``chi_bar gamma^n psi + t_n (-1)^(n(|psi|+|chi|)+|psi||chi|) psi_bar gamma^n chi``.

    Raises:
        NotMajoranaError: If either spinor violates the constraint.
    """
    require_majorana(rep, psi, chi)
    p, q = psi.parity_bit, chi.parity_bit
    power = gamma_power(rep, n)
    lhs = bilinear(majorana_bar(rep, chi), power, psi.components)
    rhs = bilinear(majorana_bar(rep, psi), power, chi.components)
    sign = t_parameter(rep, n) * (-1 if (n * (p + q) + p * q) & 1 else 1)
    return lhs + rhs.scale(sign)


def grassmann_witness(label: str, component: str, x: GrassmannElement) -> Witness | None:
    """Witness built from the lowest monomial of a nonzero element."""
    if x.is_zero():
        return None
    mask, coefficient = next(x.items())
    return Witness(label, component, [], mask_generators(mask), str(coefficient))


def check_flip(rep: GammaRep, n: int, psi: SpinorPoly, chi: SpinorPoly, draw: int | None = None) -> Residual:
    """Flip relation for ``gamma^n`` on one pair as a residual row; ``draw`` numbers repeated pairs."""
    residual = flip_residual(rep, n, psi, chi)
    suffix = "" if draw is None else f":{draw}"
    return Residual(
        check_id=f"flip:{n}:{psi.parity}-{chi.parity}{suffix}",
        anchor="Majorana flip relations",
        witness=grassmann_witness(f"flip:{n}", "scalar", residual),
    )


def completeness_residual(rep: GammaRep) -> list[tuple[Sequence[int], GaussianRational]]:
    """Entries of ``(C gamma^a)_{alpha(delta} (C gamma_a)_{rho beta)}`` symmetrised over the last three indices."""
    lowered = [exact_linalg.matmul(rep.C, rep.gamma_upper[a]) for a in range(4)]
    lowered_down = [exact_linalg.matmul(rep.C, rep.gamma[a]) for a in range(4)]
    out = []
    for alpha, delta, rho, beta in itertools.product(range(4), repeat=4):
        total = ZERO
        for x, y, z in itertools.permutations((delta, rho, beta)):
            for a in range(4):
                u = lowered[a][alpha][x]
                w = lowered_down[a][y][z]
                if not u.is_zero() and not w.is_zero():
                    total = total + u * w
        out.append(((alpha, delta, rho, beta), total))
    return out


def commuting_fierz_residual(rep: GammaRep, chi: SpinorPoly) -> list[GrassmannElement]:
    """Components of ``gamma^a chi (chi_bar gamma_a chi)`` for an even spinor."""
    bar = majorana_bar(rep, chi)
    out = [GrassmannElement() for _ in range(4)]
    for a in range(4):
        current = bilinear(bar, gamma_matrix(rep.gamma[a]), chi.components)
        if current.is_zero():
            continue
        for r in range(4):
            acc = GrassmannElement()
            for c in range(4):
                entry = rep.gamma_upper[a][r][c]
                if not entry.is_zero():
                    acc = acc + chi.components[c].scale(entry)
            out[r] = out[r] + acc * current
    return out


def _fierz_sign(exponent: int) -> int:
    return -1 if exponent & 1 else 1


def fierz_residuals(rep: GammaRep, lambdas: Sequence[SpinorPoly]) -> tuple[GrassmannElement, GrassmannElement]:
    """Residuals of the two four-spinor rearrangement identities.

    Args:
        rep: The representation.
        lambdas: Four Majorana spinors of arbitrary parity.

    Returns:
        The residuals of the gamma^3-gamma and gamma^3-gamma^3 rearrangements.
    """
    require_majorana(rep, *lambdas)
    _, l2, l3, l4 = lambdas
    p2, p3, p4 = l2.parity_bit, l3.parity_bit, l4.parity_bit
    g1, g3 = gamma_power(rep, 1), gamma_power(rep, 3)
    bars = [majorana_bar(rep, lam) for lam in lambdas]

    def pair(i: int, m: GMatrix, j: int) -> GrassmannElement:
        return bilinear(bars[i], m, lambdas[j].components)

    lhs = pair(0, g3, 1) * pair(2, g1, 3)
    s_a = _fierz_sign(p2 * p3)
    s_b = _fierz_sign(p4 * (p2 + p3 + 1) + p3)
    # gamma before gamma^3 reverses the order of the frame generators, which flips the overall sign
    first = lhs + (pair(0, g1, 2) * pair(1, g3, 3)).scale(s_a) + (pair(0, g1, 3) * pair(1, g3, 2)).scale(s_b)
    second = lhs + (pair(0, g3, 2) * pair(1, g1, 3)).scale(s_a) + (pair(0, g3, 3) * pair(1, g1, 2)).scale(s_b)
    return first, second


def fierz_lemma_residuals(
    rep: GammaRep, lam: SpinorPoly, psi: SpinorPoly, chi: SpinorPoly
) -> tuple[GrassmannElement, GrassmannElement, GrassmannElement]:
    """The three quartic lemma expressions for even ``chi`` and odd ``psi``.

    None of them vanishes for an independent ``lambda``; the rearrangement identities only tie
    them together, see ``fierz_lemma_relations``.
    """
    require_majorana(rep, lam, psi, chi)
    g1, g3 = gamma_power(rep, 1), gamma_power(rep, 3)
    lam_bar, chi_bar = majorana_bar(rep, lam), majorana_bar(rep, chi)
    first = bilinear(lam_bar, g3, chi.components) * bilinear(chi_bar, g1, psi.components)
    second = bilinear(chi_bar, g1, chi.components) * bilinear(lam_bar, g3, psi.components)
    third = bilinear(lam_bar, g1, chi.components) * bilinear(chi_bar, g3, psi.components)
    return first, second, third


def fierz_lemma_relations(
    rep: GammaRep, lam: SpinorPoly, psi: SpinorPoly, chi: SpinorPoly
) -> tuple[GrassmannElement, GrassmannElement]:
    """Residuals of the relations the rearrangement identities impose on the lemma expressions.

    With ``chi_bar gamma^3 chi = 0`` for even ``chi`` the first rearrangement gives
    ``first + third = 0`` and the second gives ``2 first = (-1)^|lambda| second``.
    """
    first, second, third = fierz_lemma_residuals(rep, lam, psi, chi)
    return first + third, first.scale(2) - second.scale(_fierz_sign(lam.parity_bit))


def check_fierz(rep: GammaRep, lambdas: Sequence[SpinorPoly], lemma_lambda: SpinorPoly | None = None) -> list[Residual]:
    """Completeness, the two rearrangement identities and the quartic lemma as residual rows.

    Args:
        rep: The representation.
        lambdas: Four Majorana spinors; the lemma takes the first odd one as ``psi`` and the first
            even one as ``chi``.
        lemma_lambda: Independent ``lambda`` for the lemma; without it the lemma rows are skipped.

    Returns:
        Residual rows. The three lemma expressions are reported without being required, the
        relations between them are required.
    """
    residuals = []
    completeness = next(
        (
            Witness("fierz:completeness", str(list(idx)), [], [], str(value))
            for idx, value in completeness_residual(rep)
            if not value.is_zero()
        ),
        None,
    )
    residuals.append(Residual("fierz:completeness", "completeness relation of the Clifford basis", completeness))
    for even in (lam for lam in lambdas if lam.parity is Parity.EVEN):
        defect = commuting_fierz_residual(rep, even)
        witness = next(
            (grassmann_witness("fierz:commuting", str(r), x) for r, x in enumerate(defect) if not x.is_zero()),
            None,
        )
        residuals.append(Residual("fierz:commuting", "completeness contracted with an even spinor", witness))
        break
    first, second = fierz_residuals(rep, lambdas)
    for check_id, anchor, value in (
        ("fierz:gamma3_gamma", "Fierz rearrangement into gamma gamma^3 pairs", first),
        ("fierz:gamma3_gamma3", "Fierz rearrangement into gamma^3 gamma pairs", second),
    ):
        residuals.append(Residual(check_id, anchor, grassmann_witness(check_id, "scalar", value)))
    odd = next((lam for lam in lambdas if lam.parity is Parity.ODD), None)
    even_chi = next((lam for lam in lambdas if lam.parity is Parity.EVEN), None)
    if lemma_lambda is not None and odd is not None and even_chi is not None:
        lemma = fierz_lemma_residuals(rep, lemma_lambda, odd, even_chi)
        for index, value in enumerate(lemma, start=1):
            residuals.append(
                Residual(
                    check_id=f"fierz:lemma:{index}",
                    anchor="quartic Fierz lemma for even chi, odd psi",
                    witness=grassmann_witness(f"fierz:lemma:{index}", "scalar", value),
                    required=False,
                    note="reported only: nonzero for a lambda independent of chi and psi",
                )
            )
        first_third, first_second = fierz_lemma_relations(rep, lemma_lambda, odd, even_chi)
        for check_id, value in (
            ("fierz:lemma:relation:first_third", first_third),
            ("fierz:lemma:relation:first_second", first_second),
        ):
            residuals.append(
                Residual(
                    check_id,
                    "rearrangement relations between the lemma expressions",
                    grassmann_witness(check_id, "scalar", value),
                )
            )
    return residuals
