"""Exact evaluation of the supergravity BV vector fields and of the identities they satisfy.

Every vector field acts on functionals of a configuration through the shift
``Phi -> Phi + epsilon V(Phi)`` along the reserved odd generator: the epsilon-linear part of
``F(config + epsilon V)`` is ``V(F)`` exactly, with no symbolic differentiation. Squares are
obtained by applying a vector field to its own components.
"""

from __future__ import annotations

import logging
import weakref
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from enum import StrEnum
from fractions import Fraction
from functools import cached_property

from sugra_bv_verifier.clifford_spin import ETA, build_gamma_rep
from sugra_bv_verifier.errors import GradingMismatchError, InsufficientJetOrderError
from sugra_bv_verifier.exact_scalars import EPSILON_GENERATOR, I, GaussianRational, epsilon_linear_part
from sugra_bv_verifier.field_content import (
    FIELDS,
    BVConfiguration,
    Canonical,
    CanonicalAntifields,
    FieldName,
    grading_audit,
    invert_reparam,
    majorana_audit,
    on_shell_projection,
    sample_variation,
)
from sugra_bv_verifier.graded_fiber import (
    DIM,
    Germ,
    JetField,
    Target,
    coframe_divide,
    covariant_d,
    curvature,
    e_pair,
    eta_bracket,
    field_witness,
    gamma5_field,
    gamma_field,
    gamma_power_field,
    infer_grading,
    iota_coordinate,
    iota_gamma_hat,
    iota_vector,
    jet_d,
    lie_covariant,
    majorana_bar_field,
    rep_action,
    unbar_field,
    v,
    vector_bracket,
    wedge,
    wedge_power,
)
from sugra_bv_verifier.models import Residual, Witness
from sugra_bv_verifier.structure_maps import (
    invert_w1_12,
    solve_linear,
    split_alpha_beta,
    split_kappa_varkappa,
    w_descriptor,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
ON_SHELL_MIN_ORDER = 3


def _i(value: int | Fraction) -> GaussianRational:
    """``i * value``."""
    return GaussianRational(0, value)


class QPsiVariant(StrEnum):
    """The two printed forms of the gravitino component of the quadratic vector field."""

    APPENDIX_B = "appendixB"
    SECTION4 = "section4"


QQ_E_TERMS = ("iota_phi_omega_check", "c_check_iota_xi_e", "e_iota_xi_c_check")


@dataclass(frozen=True)
class EngineOptions:
    """Switches for variants and negative controls.

    Attributes:
        q_psi_variant: Which printed form of the gravitino component to use.
        l_correction: Whether ``Q c`` carries ``iota_xi l / 2``.
        delta_chi_sign: Sign of ``e delta_chi omega`` relative to ``-chi_bar gamma^3 d_omega psi / 3!``.
        qq_e_drop: Terms of ``qq_e`` to knock out.
        s2_drop: Lines 1 to 6 of the quadratic action density whose terms are knocked out of the
            quadratic vector field and of ``s2_density``.
    """

    q_psi_variant: QPsiVariant = QPsiVariant.APPENDIX_B
    l_correction: bool = True
    delta_chi_sign: int = 1
    qq_e_drop: frozenset[str] = field(default_factory=frozenset)
    s2_drop: frozenset[int] = field(default_factory=frozenset)

    def keeps(self, line: int) -> bool:
        """True unless line ``line`` of the quadratic action density is knocked out."""
        return line not in self.s2_drop


DEFAULT_OPTIONS = EngineOptions()

type Evaluator = Callable[[BVConfiguration], JetField]


def chain(*factors: JetField) -> JetField:
    """Left-to-right wedge of several factors."""
    result = factors[0]
    for factor in factors[1:]:
        result = wedge(result, factor)
    return result


def epsilon_part(value: JetField) -> JetField:
    """Coefficient of the shift generator in every entry."""
    return value.map(lambda germ: germ.map(epsilon_linear_part))


def _eps_times(value: JetField) -> JetField:
    eps = Germ.generator(EPSILON_GENERATOR)
    return value.map(lambda germ: eps * germ)


_ALGEBRAS: weakref.WeakKeyDictionary[BVConfiguration, dict[EngineOptions, FieldAlgebra]] = weakref.WeakKeyDictionary()


def algebra(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> FieldAlgebra:
    """Derived quantities of a configuration, computed once per option set."""
    per_config = _ALGEBRAS.setdefault(config, {})
    if options not in per_config:
        per_config[options] = FieldAlgebra(config, options)
    return per_config[options]


class FieldAlgebra:
    """Operators and composite fields built from one configuration."""

    def __init__(self, config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> None:
        self._config = weakref.ref(config)
        self.options = options

    @property
    def config(self) -> BVConfiguration:
        """The configuration this algebra was built from."""
        config = self._config()
        if config is None:
            msg = "Configuration was released before its derived quantities"
            raise ReferenceError(msg)
        return config

    # operators

    def dw(self, x: JetField) -> JetField:
        """Covariant differential."""
        return covariant_d(self.config.omega, x)

    def ixi(self, x: JetField) -> JetField:
        """Contraction with the diffeomorphism ghost."""
        return iota_vector(self.config.xi, x)

    def iphi(self, x: JetField) -> JetField:
        """Contraction with ``phi``."""
        return iota_vector(self.phi, x)

    def lxi(self, x: JetField) -> JetField:
        """Covariant Lie derivative along the ghost."""
        return lie_covariant(self.config.xi, self.config.omega, x)

    def lphi(self, x: JetField) -> JetField:
        """Covariant Lie derivative along ``phi``."""
        return lie_covariant(self.phi, self.config.omega, x)

    def br(self, a: JetField, x: JetField) -> JetField:
        """``[a, x]``."""
        return rep_action(a, x)

    def ig(self, x: JetField) -> JetField:
        """``iota_gamma_hat``."""
        return iota_gamma_hat(self.config.e_inv, x)

    def ig2(self, x: JetField) -> JetField:
        """``iota_gamma_hat iota_gamma_hat``."""
        return self.ig(self.ig(x))

    def pair(self, x: JetField) -> JetField:
        """``<e, x>``."""
        return e_pair(self.config.e_inv, x)

    def alpha(self, theta: JetField) -> JetField:
        """Alpha part of a spinor (3,1)-form; cospinors go through the bar."""
        if theta.target is Target.COSPINOR:
            return majorana_bar_field(self.alpha(unbar_field(theta)))
        return split_alpha_beta(self.config.e, theta)[0]

    def kappa(self, theta: JetField) -> JetField:
        """Kappa part of a spinor (2,1)-form."""
        return split_kappa_varkappa(self.config.e, theta)[0]

    def chi_kappa(self, sigma: JetField) -> JetField:
        """``chi_bar kappa(<e, sigma>)`` for a spinor (3,0)-form ``sigma``."""
        return wedge(self.chi_bar, self.kappa(self.pair(sigma)))

    def chi_ig2(self, sigma: JetField) -> JetField:
        """``chi_bar iota_gamma_hat iota_gamma_hat sigma``."""
        return wedge(self.chi_bar, self.ig2(sigma))

    # composite fields

    @cached_property
    def phi(self) -> JetField:
        """``chi_bar gamma^mu chi``."""
        return self.config.phi

    @cached_property
    def gamma(self) -> JetField:
        """``gamma^a v_a``."""
        return gamma_field()

    @cached_property
    def gamma3(self) -> JetField:
        """``gamma^3``."""
        return gamma_power_field(3)

    @cached_property
    def gu(self) -> JetField:
        """``gamma_underline``."""
        return self.config.gamma_underline

    @cached_property
    def gu2(self) -> JetField:
        """``gamma_underline^2``."""
        return wedge(self.gu, self.gu)

    @cached_property
    def e2(self) -> JetField:
        """``e^2``."""
        return wedge_power(self.config.e, 2)

    @cached_property
    def curvature(self) -> JetField:
        """``F_omega``."""
        return curvature(self.config.omega)

    @cached_property
    def dwe(self) -> JetField:
        """``d_omega e``."""
        return self.dw(self.config.e)

    @cached_property
    def dwpsi(self) -> JetField:
        """``d_omega psi``."""
        return self.dw(self.config.psi)

    @cached_property
    def psi_bar(self) -> JetField:
        """``psi_bar``."""
        return majorana_bar_field(self.config.psi)

    @cached_property
    def chi_bar(self) -> JetField:
        """``chi_bar``."""
        return majorana_bar_field(self.config.chi)

    @cached_property
    def psi0_dag_bar(self) -> JetField:
        """Bar of the reduced gravitino antifield."""
        return majorana_bar_field(self.config.psi0_dag)

    @cached_property
    def chi0_dag_bar(self) -> JetField:
        """Bar of the reduced supersymmetry antighost."""
        return majorana_bar_field(self.config.chi0_dag)

    @cached_property
    def canonical(self) -> CanonicalAntifields:
        """Canonical antifields."""
        return self.config.canonical

    @cached_property
    def psi_gamma3_chi(self) -> JetField:
        """``psi_bar gamma^3 chi``."""
        return chain(self.psi_bar, self.gamma3, self.config.chi)

    @cached_property
    def chi_gamma3_dwpsi(self) -> JetField:
        """``chi_bar gamma^3 d_omega psi``."""
        return chain(self.chi_bar, self.gamma3, self.dwpsi)

    @cached_property
    def torsion(self) -> JetField:
        """``d_omega e - psi_bar gamma psi / 2``."""
        return self.dwe - chain(self.psi_bar, self.gamma, self.config.psi).scale(HALF)

    @cached_property
    def e_delta_chi_omega(self) -> JetField:
        """``e delta_chi omega = -chi_bar gamma^3 d_omega psi / 3!``."""
        return self.chi_gamma3_dwpsi.scale(Fraction(-self.options.delta_chi_sign, 6))

    @cached_property
    def delta_chi_omega(self) -> JetField:
        """Supersymmetry variation of the connection, by the W1^(1,2) solve."""
        return invert_w1_12(self.config.e, self.e_delta_chi_omega)

    @cached_property
    def k_scalar(self) -> JetField:
        """``chi_bar kappa(<e, gamma_underline d_omega psi>) + chi_bar iota iota(gamma_underline d_omega psi) / 8``."""
        sigma = wedge(self.gu, self.dwpsi)
        return self.chi_kappa(sigma) + self.chi_ig2(sigma).scale(Fraction(1, 8))

    @cached_property
    def k_chi(self) -> JetField:
        """``K chi``."""
        return wedge(self.k_scalar, self.config.chi)

    @cached_property
    def eom_e(self) -> JetField:
        """``e F + psi_bar gamma^3 d_omega psi / 3!``."""
        c = self.config
        return wedge(c.e, self.curvature) + chain(self.psi_bar, self.gamma3, self.dwpsi).scale(Fraction(1, 6))

    @cached_property
    def eom_omega(self) -> JetField:
        """``e (d_omega e - psi_bar gamma psi / 2)``."""
        return wedge(self.config.e, self.torsion)

    @cached_property
    def eom_psi(self) -> JetField:
        """``e d_omega psi_bar gamma^3 + d_omega e psi_bar gamma^3 / 2``."""
        c = self.config
        return chain(c.e, majorana_bar_field(self.dwpsi), self.gamma3) + chain(
            self.dwe, self.psi_bar, self.gamma3
        ).scale(HALF)

    @cached_property
    def ighat_xi_dag(self) -> JetField:
        """``iota_gamma_hat xi_dag``: ``gamma^a e^mu_a xi_dag_mu`` as a Clifford (4,4)-form."""
        rep = build_gamma_rep()
        c = self.config
        total = JetField.zero(Target.CLIFFORD, c.xi_dag.order)
        for a in range(DIM):
            coefficient = Germ(order=c.xi_dag.order)
            for mu in range(DIM):
                if not c.e_inv[mu][a].is_zero() and not c.xi_dag.entries[mu].is_zero():
                    coefficient = coefficient + c.e_inv[mu][a] * c.xi_dag.entries[mu]
            if not coefficient.is_zero():
                total = total + wedge(JetField.numeric(rep.gamma_upper[a]), JetField.scalar(coefficient))
        return total


# Q0 on fields


def q0_e(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``L_xi e - [c, e] + chi_bar gamma psi``."""
    o = algebra(config, options)
    return o.lxi(config.e) - o.br(config.c, config.e) + chain(o.chi_bar, o.gamma, config.psi)


def q0_omega(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``iota_xi F - d_omega c + delta_chi omega``."""
    o = algebra(config, options)
    return o.ixi(o.curvature) - o.dw(config.c) + o.delta_chi_omega


def q0_psi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``L_xi psi - [c, psi] - d_omega chi``."""
    o = algebra(config, options)
    return o.lxi(config.psi) - o.br(config.c, config.psi) - o.dw(config.chi)


def q0_xi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``[xi, xi] / 2 + phi / 2``."""
    o = algebra(config, options)
    return (vector_bracket(config.xi, config.xi) + o.phi).scale(HALF)


def q0_c(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``(iota_xi iota_xi F - [c, c]) / 2 + iota_xi delta_chi omega``."""
    o = algebra(config, options)
    pure = (o.ixi(o.ixi(o.curvature)) - o.br(config.c, config.c)).scale(HALF)
    return pure + o.ixi(o.delta_chi_omega)


def q0_chi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``L_xi chi - [c, chi] - iota_phi psi / 2``."""
    o = algebra(config, options)
    return o.lxi(config.chi) - o.br(config.c, config.chi) - o.iphi(config.psi).scale(HALF)


# pure gravity and supersymmetry parts


def qpc_e(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Pure gravity: ``L_xi e - [c, e]``."""
    o = algebra(config, options)
    return o.lxi(config.e) - o.br(config.c, config.e)


def qpc_omega(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Pure gravity: ``iota_xi F - d_omega c``."""
    o = algebra(config, options)
    return o.ixi(o.curvature) - o.dw(config.c)


def qpc_c(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Pure gravity: ``(iota_xi iota_xi F - [c, c]) / 2``."""
    o = algebra(config, options)
    return (o.ixi(o.ixi(o.curvature)) - o.br(config.c, config.c)).scale(HALF)


def qpc_xi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Pure gravity: ``[xi, xi] / 2``."""
    del options
    return vector_bracket(config.xi, config.xi).scale(HALF)


def delta_chi_e(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``chi_bar gamma psi``."""
    o = algebra(config, options)
    return chain(o.chi_bar, o.gamma, config.psi)


def delta_chi_psi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``-d_omega chi``."""
    return -algebra(config, options).dw(config.chi)


def delta_chi_chi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``-iota_phi psi / 2``."""
    return algebra(config, options).iphi(config.psi).scale(-HALF)


# Q0 on antifields


def _xi_dag_bracket(config: BVConfiguration) -> JetField:
    """``[v_c, e^mu_b eta^{bc} xi_dag_mu]`` summed over indices."""
    total = JetField.zero(Target.SCALAR, config.xi_dag.order)
    for b in range(DIM):
        coefficient = Germ(order=config.xi_dag.order)
        for mu in range(DIM):
            if not config.e_inv[mu][b].is_zero() and not config.xi_dag.entries[mu].is_zero():
                coefficient = coefficient + config.e_inv[mu][b] * config.xi_dag.entries[mu]
        if not coefficient.is_zero():
            total = total + eta_bracket(JetField.scalar(v(b)), JetField.scalar(coefficient)).scale(ETA[b])
    return total


def q0_e_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 e_dag``: the coframe equation of motion plus ghost terms.

    The printed ``-chi_bar gamma^3 d_omega psi / (2 3!)`` term is a (2,3)-form in a (3,3)
    equation and is left out.
    """
    o = algebra(config, options)
    c = config
    e3_psi_bar = wedge(wedge_power(c.e, 3), o.psi_bar)
    return (
        o.eom_e
        + o.lxi(c.e_dag)
        - o.br(c.c, c.e_dag)
        - wedge(o.iphi(e3_psi_bar), c.chi0_dag).scale(_i(Fraction(1, 12)))
        + o.iphi(_xi_dag_bracket(c)).scale(HALF)
        + o.ixi(wedge(o.chi_gamma3_dwpsi, c.c_check)).scale(Fraction(1, 6))
        - wedge(c.omega_check, o.delta_chi_omega)
        - chain(c.e, c.c_check, o.ixi(o.delta_chi_omega))
    )


def e_q0_omega_check(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``e Q0 omega_check``."""
    o = algebra(config, options)
    c = config
    can = o.canonical
    chi_gamma_psi = chain(o.chi_bar, o.gamma, c.psi)
    mixed = wedge(c.c_check, o.ixi(c.e)) + wedge(c.e, o.ixi(c.c_check)).scale(HALF)
    e_gamma3 = o.br(c.e, o.gamma3)
    return (
        o.eom_omega
        - o.ixi(eta_bracket(c.e_dag, c.e))
        - o.dw(o.ixi(can.omega_dag))
        - wedge(c.e, o.br(c.c, c.omega_check))
        + o.dw(o.ixi(o.ixi(can.c_dag))).scale(HALF)
        - wedge(c.omega_check, o.lxi(c.e))
        - wedge(chi_gamma_psi, c.omega_check).scale(HALF)
        - chain(o.chi_bar, o.br(c.omega_check, o.gamma3), c.psi).scale(Fraction(1, 12))
        - wedge(chi_gamma_psi, mixed).scale(HALF)
        + chain(o.chi_bar, o.br(mixed, o.gamma3), c.psi).scale(Fraction(1, 12))
        + o.ixi(
            chain(c.e, o.psi0_dag_bar, o.gu, o.gamma, c.psi)
            - chain(o.psi0_dag_bar, o.gu, e_gamma3, c.psi).scale(Fraction(1, 6))
        ).scale(_i(HALF))
        + chain(c.e, o.psi0_dag_bar, o.gu, o.gamma, c.chi).scale(_i(HALF))
        - chain(o.psi0_dag_bar, o.gu, e_gamma3, c.chi).scale(_i(Fraction(1, 12)))
        + o.ixi(chain(o.e2, o.chi0_dag_bar, o.gu2, c.chi)).scale(_i(Fraction(1, 8)))
    )


def q0_omega_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 (e omega_check) = (Q0 e) omega_check + e Q0 omega_check``."""
    return wedge(q0_e(config, options), config.omega_check) + e_q0_omega_check(config, options)


def q0_psi_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 psi_dag``, led by the gravitino equation of motion."""
    o = algebra(config, options)
    c = config
    can = o.canonical
    eom = chain(c.e, o.gamma3, o.dwpsi) - chain(o.dwe, o.gamma3, c.psi).scale(HALF)
    ghost = chain(c.c_check, o.ixi(c.e), o.gamma3, c.chi) + chain(c.e, o.ixi(c.c_check), o.gamma3, c.chi).scale(
        HALF
    )
    return (
        eom.scale(_i(Fraction(-1, 3)))
        - wedge(o.gamma3, o.dw(wedge(c.omega_check, c.chi))).scale(_i(Fraction(1, 6)))
        + o.lxi(can.psi_dag)
        - o.br(c.c, can.psi_dag)
        + chain(o.gamma, c.chi, c.e_dag).scale(I)
        - o.dw(ghost).scale(_i(Fraction(1, 6)))
        - o.iphi(can.chi_dag).scale(HALF)
    )


def e2_q0_c_check(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``(e^2 / 2) Q0 c_check``."""
    o = algebra(config, options)
    c = config
    can = o.canonical
    return (
        -o.dw(can.omega_dag)
        - eta_bracket(c.e, c.e_dag)
        + chain(o.e2, o.chi0_dag_bar, o.gu2, c.chi).scale(_i(Fraction(1, 8)))
        + chain(c.e, o.psi0_dag_bar, o.gu, o.gamma, c.psi).scale(_i(HALF))
        - chain(o.psi0_dag_bar, o.gu, o.br(c.e, o.gamma3), c.psi).scale(_i(Fraction(1, 12)))
        - wedge(c.c_check, o.lxi(o.e2)).scale(HALF)
        - chain(c.c_check, c.e, o.chi_bar, o.gamma, c.psi)
    )


def q0_c_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 (e^2 c_check / 2) = (Q0 e) e c_check + (e^2 / 2) Q0 c_check``."""
    return chain(q0_e(config, options), config.e, config.c_check) + e2_q0_c_check(config, options)


def q0_xi_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 xi_dag``, one (4,4)-form per coordinate index.

    The free slot of the printed expression is read as the contraction ``iota_mu``.
    """
    o = algebra(config, options)
    c = config
    can = o.canonical
    dwpsi_bar = majorana_bar_field(o.dwpsi)
    dw_psi_dag = o.dw(can.psi_dag)
    dw_chi_bar = o.dw(o.chi_bar)
    ixi_c_dag = o.ixi(can.c_dag)
    entries = []
    for mu in range(DIM):
        e_dag_mu = iota_coordinate(mu, c.e_dag)
        bracket = Germ(order=c.xi.order - 1)
        for nu in range(DIM):
            bracket = bracket + c.xi.entries[nu].partial(mu) * c.xi_dag.entries[nu]
        value = (
            -wedge(e_dag_mu, o.dwe)
            - wedge(o.dwe, e_dag_mu)
            - wedge(iota_coordinate(mu, can.omega_dag), o.curvature)
            - wedge(iota_coordinate(mu, ixi_c_dag), o.curvature)
            + JetField.scalar(bracket)
            - wedge(dwpsi_bar, iota_coordinate(mu, can.psi_dag)).scale(I)
            + wedge(iota_coordinate(mu, o.psi_bar), dw_psi_dag).scale(I)
            - wedge(iota_coordinate(mu, dw_chi_bar), can.chi_dag).scale(I)
            + chain(c.c_check, iota_coordinate(mu, c.e), o.chi_gamma3_dwpsi).scale(Fraction(1, 6))
            + chain(c.e, iota_coordinate(mu, c.c_check), o.chi_gamma3_dwpsi).scale(Fraction(1, 12))
        )
        entries.append(value.germ)
    return JetField(Target.COVECTOR, entries)


def q0_chi_dag(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``Q0 chi_dag``.

    The printed ``i gamma^3 d_omega psi / 3!`` term is a (2,3)-form in a (4,4) equation and
    is left out.
    """
    o = algebra(config, options)
    c = config
    can = o.canonical
    return chain(o.gamma, c.psi, c.e_dag).scale(I) - o.dw(can.psi_dag) - wedge(o.ighat_xi_dag, c.chi)


# quadratic part


def _kept(*parts: tuple[bool, JetField]) -> JetField | None:
    """Sum of the parts whose line of the quadratic action is kept; None when all are knocked out."""
    kept = [value for keep, value in parts if keep]
    if not kept:
        return None
    total = kept[0]
    for value in kept[1:]:
        total = total + value
    return total


def qq_e(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``iota_phi omega_check / 2 - iota_phi c_check iota_xi e / 2 - iota_phi(e iota_xi c_check) / 4``."""
    o = algebra(config, options)
    c = config
    drop = options.qq_e_drop
    total = JetField.zero(Target.SCALAR, c.jet_order)
    if not options.keeps(1):
        return total
    if "iota_phi_omega_check" not in drop:
        total = total + o.iphi(c.omega_check).scale(HALF)
    if "c_check_iota_xi_e" not in drop:
        total = total - wedge(o.iphi(c.c_check), o.ixi(c.e)).scale(HALF)
    if "e_iota_xi_c_check" not in drop:
        total = total - o.iphi(wedge(c.e, o.ixi(c.c_check))).scale(Fraction(1, 4))
    return total


def e_qq_omega(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``e qq_omega``; the terms with ``c_check`` and no ``iota_phi c_check`` form ``e l``."""
    o = algebra(config, options)
    c = config
    total = e_l(config, options)
    if options.keeps(1):
        total = total + o.iphi(c.e_dag).scale(HALF)
        total = total + chain(o.iphi(wedge(o.psi0_dag_bar, o.gu)), o.gamma3, c.psi).scale(_i(Fraction(1, 24)))
    if options.keeps(2):
        total = total + chain(
            o.psi_bar, o.gamma3, o.iphi(wedge(o.gu, o.alpha(wedge(c.omega_check, c.psi))))
        ).scale(_i(Fraction(1, 24)))
        total = total - wedge(o.iphi(c.c_check), chain(o.chi_bar, o.gamma3, c.psi)).scale(Fraction(1, 48))
    if options.keeps(3) or options.keeps(5):
        sigma = wedge(o.gu2, c.psi0_dag).scale(_i(-HALF)) - wedge(o.br(c.omega_check, o.gamma), c.psi)
        if options.keeps(3):
            total = total + wedge(o.psi_gamma3_chi, o.chi_kappa(sigma)).scale(Fraction(1, 12))
        if options.keeps(5):
            total = total + wedge(o.psi_gamma3_chi, o.chi_ig2(sigma)).scale(Fraction(1, 96))
    return total


def e_l(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``e l``: the antighost terms of ``e qq_omega`` that need the correction in ``Q c``."""
    o = algebra(config, options)
    c = config
    total = JetField.zero(Target.SCALAR, c.jet_order)
    if options.keeps(2):
        total = total - wedge(o.ixi(c.c_check), chain(o.psi_bar, o.gamma3, o.iphi(c.psi))).scale(Fraction(1, 48))
        total = total - chain(
            o.psi_bar, o.gamma3, o.iphi(wedge(o.gu, o.alpha(chain(c.c_check, o.ixi(c.e), c.psi))))
        ).scale(_i(Fraction(1, 24)))
    if options.keeps(3) or options.keeps(5):
        sigma = chain(o.gu, o.ixi(c.c_check), c.psi).scale(HALF) + chain(o.ixi(o.gu), c.c_check, c.psi)
        if options.keeps(3):
            total = total - wedge(o.psi_gamma3_chi, o.chi_kappa(sigma)).scale(Fraction(1, 12))
        if options.keeps(5):
            total = total - wedge(o.psi_gamma3_chi, o.chi_ig2(sigma)).scale(Fraction(1, 96))
    return total


def qq_omega(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``qq_omega`` by the W1^(1,2) solve."""
    return invert_w1_12(config.e, e_qq_omega(config, options))


def l_field(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``l`` by the W1^(1,2) solve."""
    return invert_w1_12(config.e, e_l(config, options))


def _psi_brackets(config: BVConfiguration, options: EngineOptions) -> tuple[JetField, JetField]:
    """The ``omega_check`` and ``c_check`` parts of the bracket in the gravitino component."""
    o = algebra(config, options)
    c = config
    if options.q_psi_variant is QPsiVariant.SECTION4:
        shift = -wedge(o.ixi(c.c_check), c.e).scale(HALF) - wedge(o.ixi(c.e), c.c_check)
        return o.br(c.omega_check, c.psi), o.br(shift, c.psi)
    shift = -wedge(o.ixi(c.c_check), c.e).scale(_i(HALF)) + wedge(o.ixi(c.e), c.c_check)
    return wedge(o.br(c.omega_check, o.gamma), c.psi), wedge(o.br(shift, o.gamma), c.psi)


def qq_psi(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Gravitino component of the quadratic vector field in the selected printed form."""
    o = algebra(config, options)
    c = config
    keeps = options.keeps
    total = JetField.zero(Target.SPINOR, c.jet_order)
    if keeps(1):
        total = (
            total
            + o.iphi(wedge(o.gu, c.psi0_dag)).scale(_i(Fraction(1, 4)))
            - o.iphi(wedge(o.gu, o.alpha(wedge(c.omega_check, c.psi)))).scale(_i(Fraction(1, 4)))
            - o.iphi(wedge(o.gu, o.alpha(chain(c.c_check, o.ixi(c.e), c.psi)))).scale(_i(Fraction(1, 4)))
            + wedge(o.iphi(c.c_check), c.chi).scale(Fraction(1, 8))
            - o.iphi(wedge(o.ixi(c.c_check), c.psi)).scale(Fraction(1, 8))
        )
    bracket_omega, bracket_c = _psi_brackets(config, options)
    gu2_psi0 = wedge(o.gu2, c.psi0_dag)
    kappa_sigma = _kept((keeps(4), gu2_psi0), (keeps(3), bracket_omega.scale(I)), (keeps(4), bracket_c.scale(I)))
    if kappa_sigma is not None:
        total = total + wedge(c.chi, o.chi_kappa(kappa_sigma)).scale(_i(Fraction(1, 4)))
    ig2_sigma = _kept((keeps(6), gu2_psi0), (keeps(5), bracket_omega.scale(I)), (keeps(6), bracket_c.scale(I)))
    if ig2_sigma is not None:
        total = total + wedge(c.chi, o.chi_ig2(ig2_sigma)).scale(Fraction(1, 16))
    return total


def e2_qq_c(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``(e^2 / 2) qq_c``."""
    o = algebra(config, options)
    c = config
    can = o.canonical
    keeps = options.keeps
    ixi_e = o.ixi(c.e)
    total = JetField.zero(Target.SCALAR, c.jet_order)
    if keeps(1):
        total = (
            total
            - wedge(o.chi_bar, o.iphi(can.psi_dag)).scale(_i(Fraction(1, 8)))
            - wedge(ixi_e, o.iphi(c.e_dag)).scale(HALF)
            + o.ixi(wedge(c.e, o.iphi(c.e_dag))).scale(Fraction(1, 4))
            - chain(o.iphi(wedge(o.psi0_dag_bar, o.gu)), o.gamma3, ixi_e, c.psi).scale(_i(Fraction(1, 24)))
            - o.ixi(wedge(o.psi_bar, o.iphi(can.psi_dag))).scale(_i(Fraction(1, 8)))
        )
    if keeps(2):
        alpha_bar = o.alpha(wedge(c.omega_check, o.psi_bar))
        total = (
            total
            - o.iphi(chain(c.omega_check, o.chi_bar, o.gamma3, c.psi)).scale(_i(Fraction(1, 48)))
            + chain(o.iphi(wedge(alpha_bar, o.gu)), o.gamma3, ixi_e, c.psi).scale(_i(Fraction(1, 24)))
            - o.ixi(chain(c.omega_check, o.psi_bar, o.gamma3, o.iphi(c.psi))).scale(Fraction(1, 48))
        )
    sigma_omega = wedge(o.br(c.omega_check, o.gamma), c.psi)
    sigma_psi0 = wedge(o.gu2, c.psi0_dag).scale(I)
    pair_sigma = _kept((keeps(3), sigma_omega), (keeps(4), sigma_psi0))
    if pair_sigma is not None:
        total = (
            total
            + o.ixi(wedge(o.psi_gamma3_chi, o.pair(wedge(o.chi_bar, pair_sigma)))).scale(Fraction(1, 24))
            - chain(ixi_e, o.psi_gamma3_chi, o.chi_kappa(pair_sigma)).scale(Fraction(1, 12))
        )
    ig2_sigma = _kept((keeps(5), sigma_omega), (keeps(6), sigma_psi0))
    if ig2_sigma is not None:
        ig2_part = wedge(o.psi_gamma3_chi, o.chi_ig2(ig2_sigma))
        total = (
            total
            + wedge(ixi_e, ig2_part).scale(Fraction(1, 192))
            - wedge(c.e, o.ixi(ig2_part)).scale(Fraction(1, 192))
        )
    return total


def qq_c(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``qq_c`` by the W2^(0,2) solve."""
    return solve_linear(w_descriptor(2, 0, 2), config.e, e2_qq_c(config, options))


def q_c(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Full ``Q c = Q0 c + qq_c + iota_xi l / 2``."""
    total = q0_c(config, options) + qq_c(config, options)
    if options.l_correction:
        total = total + algebra(config, options).ixi(l_field(config, options)).scale(HALF)
    return total


def s2_density(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """Integrand of the part of the action quadratic in antifields, as a (4,4)-form."""
    o = algebra(config, options)
    c = config
    can = o.canonical
    ixi_c = o.ixi(c.c_check)
    alpha_omega = wedge(o.alpha(wedge(c.omega_check, o.psi_bar)), o.gu)
    alpha_c = wedge(o.alpha(chain(c.c_check, o.ixi(c.e), o.psi_bar)), o.gu)
    psi0_gu = wedge(o.psi0_dag_bar, o.gu)
    ixi_c_psi = wedge(ixi_c, o.psi_bar)
    c_chi = wedge(c.c_check, o.chi_bar)
    omega_gamma_psi = wedge(o.br(c.omega_check, o.gamma), c.psi)
    gu2_psi0 = wedge(o.gu2, c.psi0_dag)
    psi_dag_chi = wedge(majorana_bar_field(can.psi_dag), c.chi)

    line1 = wedge(
        c.omega_check - wedge(c.e, ixi_c).scale(HALF) - wedge(c.c_check, o.ixi(c.e)),
        o.iphi(c.e_dag),
    ).scale(HALF) + wedge(
        psi0_gu.scale(HALF) + alpha_omega - ixi_c_psi.scale(_i(HALF)) - alpha_c - c_chi.scale(_i(HALF)),
        o.iphi(can.psi_dag),
    ).scale(Fraction(1, 4))
    line2 = chain(
        alpha_omega.scale(HALF) - ixi_c_psi.scale(_i(HALF)) - alpha_c - c_chi.scale(_i(HALF)),
        o.gamma3,
        o.iphi(wedge(c.omega_check, c.psi)),
    ).scale(_i(Fraction(1, 24)))
    line3 = chain(
        psi0_gu.scale(HALF) + alpha_omega.scale(HALF) - ixi_c_psi.scale(_i(HALF)) - alpha_c,
        o.gamma3,
        c.chi,
        o.pair(wedge(o.chi_bar, omega_gamma_psi)),
    ).scale(_i(Fraction(-1, 12)))
    line4 = chain(
        psi0_gu.scale(Fraction(1, 4)) - ixi_c_psi.scale(_i(HALF)) - alpha_c,
        o.gamma3,
        c.chi,
        o.pair(wedge(o.chi_bar, gu2_psi0)),
    ).scale(Fraction(1, 12))
    line5 = wedge(
        psi_dag_chi.scale(I)
        + wedge(
            c.omega_check - wedge(c.e, ixi_c) - wedge(c.c_check, o.ixi(c.e)).scale(2), o.psi_gamma3_chi
        ).scale(Fraction(1, 6)),
        o.chi_ig2(omega_gamma_psi),
    ).scale(Fraction(-1, 32))
    line6 = wedge(
        psi_dag_chi.scale(I)
        + wedge(wedge(c.e, ixi_c) + wedge(c.c_check, o.ixi(c.e)).scale(2), o.psi_gamma3_chi).scale(Fraction(1, 6)),
        o.chi_ig2(gu2_psi0),
    ).scale(_i(Fraction(-1, 32)))
    lines = (line1, line2, line3, line4, line5, line6)
    total = JetField.zero(Target.SCALAR, c.jet_order)
    for number, line in enumerate(lines, start=1):
        if options.keeps(number):
            total = total + line
    return total


# vector fields


@dataclass(frozen=True)
class VectorField:
    """Components of a vector field on the canonical coordinates.

    Keys are coordinate names: the six fields, ``e_dag``, ``xi_dag`` and the canonical
    antifields. Missing components are zero.
    """

    name: str
    components: Mapping[str, Evaluator]

    def component(self, key: str, config: BVConfiguration) -> JetField:
        """Evaluate one component."""
        return self.components[key](config)


def _bind(fn: Callable[[BVConfiguration, EngineOptions], JetField], options: EngineOptions) -> Evaluator:
    return lambda config: fn(config, options)


def q0_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """``Q0`` on fields and antifields."""
    parts = {
        FieldName.E: q0_e,
        FieldName.OMEGA: q0_omega,
        FieldName.PSI: q0_psi,
        FieldName.C: q0_c,
        FieldName.XI: q0_xi,
        FieldName.CHI: q0_chi,
        FieldName.E_DAG: q0_e_dag,
        Canonical.OMEGA_DAG: q0_omega_dag,
        Canonical.PSI_DAG: q0_psi_dag,
        Canonical.C_DAG: q0_c_dag,
        FieldName.XI_DAG: q0_xi_dag,
        Canonical.CHI_DAG: q0_chi_dag,
    }
    return VectorField("Q0", {str(k): _bind(fn, options) for k, fn in parts.items()})


def q0_fields_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """``Q0`` restricted to fields and ghosts."""
    full = q0_vector_field(options)
    return VectorField("Q0|fields", {str(k): full.components[str(k)] for k in FIELDS})


def qpc_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """Pure gravity vector field on fields and ghosts."""
    parts = {FieldName.E: qpc_e, FieldName.OMEGA: qpc_omega, FieldName.C: qpc_c, FieldName.XI: qpc_xi}
    return VectorField("Q_PC", {str(k): _bind(fn, options) for k, fn in parts.items()})


def delta_chi_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """Local supersymmetry ``delta_chi`` on fields and ghosts."""
    parts = {
        FieldName.E: delta_chi_e,
        FieldName.OMEGA: lambda cfg, opt: algebra(cfg, opt).delta_chi_omega,
        FieldName.PSI: delta_chi_psi,
        FieldName.C: lambda cfg, opt: algebra(cfg, opt).ixi(algebra(cfg, opt).delta_chi_omega),
        FieldName.XI: lambda cfg, opt: algebra(cfg, opt).phi.scale(HALF),
        FieldName.CHI: delta_chi_chi,
    }
    return VectorField("delta_chi", {str(k): _bind(fn, options) for k, fn in parts.items()})


def qq_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """Quadratic part ``qq`` on fields; zero on ``xi``, ``chi`` and the canonical antifields."""
    parts = {FieldName.E: qq_e, FieldName.OMEGA: qq_omega, FieldName.PSI: qq_psi, FieldName.C: qq_c}
    return VectorField("qq", {str(k): _bind(fn, options) for k, fn in parts.items()})


def q_total_vector_field(options: EngineOptions = DEFAULT_OPTIONS) -> VectorField:
    """``Q = Q0 + qq`` with the antighost correction in ``Q c``."""
    q0 = q0_vector_field(options)
    components = dict(q0.components)
    components[str(FieldName.E)] = lambda cfg: q0_e(cfg, options) + qq_e(cfg, options)
    components[str(FieldName.OMEGA)] = lambda cfg: q0_omega(cfg, options) + qq_omega(cfg, options)
    components[str(FieldName.PSI)] = lambda cfg: q0_psi(cfg, options) + qq_psi(cfg, options)
    components[str(FieldName.C)] = lambda cfg: q_c(cfg, options)
    return VectorField("Q", components)


# shift evaluation


def shifted_configuration(config: BVConfiguration, vector_field: VectorField) -> BVConfiguration:
    """``config + epsilon V`` on canonical coordinates, with reduced antifields recomputed.

    Raises:
        EpsilonCollisionError: If the configuration already uses the shift generator.
    """
    config.require_epsilon_free()
    shifts = {key: _eps_times(fn(config)) for key, fn in vector_field.components.items()}
    fields = dict(config.fields)
    for name in (*FIELDS, FieldName.E_DAG, FieldName.XI_DAG):
        if str(name) in shifts:
            fields[name] = config.fields[name] + shifts[str(name)]
    canonical = config.canonical.as_dict()
    touched = str(FieldName.E) in shifts or any(str(k) in shifts for k in canonical)
    if touched:
        new_canonical = CanonicalAntifields(
            **{str(k): value + shifts[str(k)] if str(k) in shifts else value for k, value in canonical.items()}
        )
        fields.update(invert_reparam(fields[FieldName.E], new_canonical))
    order = min(value.order for value in fields.values())
    logger.debug("Shifted %s along %s to jet order %d", config.label or "configuration", vector_field.name, order)
    return BVConfiguration(fields, order, config.odd_generators, config.seed, config.profile, config.label)


def apply_vector_field(
    config: BVConfiguration,
    vector_field: VectorField,
    functional: Evaluator,
    shifted: BVConfiguration | None = None,
) -> JetField:
    """``V(F)`` at ``config``: the epsilon-linear part of ``F(config + epsilon V)``."""
    shifted = shifted or shifted_configuration(config, vector_field)
    return epsilon_part(functional(shifted))


def q_squared(
    config: BVConfiguration,
    name: str,
    vector_field: VectorField,
    shifted: BVConfiguration | None = None,
) -> JetField:
    """``V^2`` on one coordinate."""
    if name not in vector_field.components:
        return JetField.zero()
    return apply_vector_field(config, vector_field, vector_field.components[name], shifted)


def antifield_degree_parts(evaluate: Callable[[BVConfiguration], JetField], config: BVConfiguration) -> list[JetField]:
    """Split a residual of antifield degree at most two by scaling the antifields by 0, 1 and 2."""
    r0 = evaluate(config.scale_antifields(0))
    r1 = evaluate(config)
    r2 = evaluate(config.scale_antifields(2))
    quadratic = (r2 - r1.scale(2) + r0).scale(HALF)
    linear = r1 - r0 - quadratic
    return [r0, linear, quadratic]


# residual helpers


def residual(
    check_id: str,
    anchor: str,
    value: JetField,
    *,
    required: bool = True,
    note: str | None = None,
    expect_witness: bool = False,
) -> Residual:
    """Residual row with the first nonzero coefficient as witness."""
    return Residual(
        check_id,
        anchor,
        field_witness(check_id, value),
        required=required,
        note=note,
        expect_witness=expect_witness,
    )


def lagrangian_density(config: BVConfiguration) -> JetField:
    """``e^2 F / 2 + e psi_bar gamma^3 d_omega psi / 3!``."""
    o = algebra(config)
    return wedge(o.e2, o.curvature).scale(HALF) + chain(config.e, o.psi_bar, o.gamma3, o.dwpsi).scale(
        Fraction(1, 6)
    )


def eom_all(config: BVConfiguration) -> dict[str, JetField]:
    """Equations of motion of coframe, connection and gravitino, with the reduced gravitino form."""
    o = algebra(config)
    return {
        "e": o.eom_e,
        "omega": o.eom_omega,
        "psi": o.eom_psi,
        "psi_reduced": reduced_eom_psi(config),
    }


def reduced_eom_psi(config: BVConfiguration) -> JetField:
    """``i (e gamma^3 d_omega psi - d_omega e gamma^3 psi / 2) / 3``."""
    o = algebra(config)
    return (
        chain(config.e, o.gamma3, o.dwpsi) - chain(o.dwe, o.gamma3, config.psi).scale(HALF)
    ).scale(_i(Fraction(1, 3)))


def reduced_eom_psi_gamma5(config: BVConfiguration) -> JetField:
    """``-gamma^5 (gamma_underline d_omega psi - [d_omega e, gamma] psi / 2) Vol_V / 3``."""
    o = algebra(config)
    volume = JetField.scalar(v(0) * v(1) * v(2) * v(3))
    inner = wedge(o.gu, o.dwpsi) - wedge(o.br(o.dwe, o.gamma), config.psi).scale(HALF)
    return chain(gamma5_field(), inner, volume).scale(Fraction(-1, 3))


def variational_residuals(config: BVConfiguration, seed: int) -> list[Residual]:
    """First variation of the Lagrangian against the equations of motion, sector by sector.

    Each variation carries the shift generator, so ``L(config + delta) - L(config)`` is exactly
    linear in it.
    """
    base = lagrangian_density(config)
    o = algebra(config)
    variations = sample_variation(config, seed, (FieldName.E, FieldName.OMEGA, FieldName.PSI))
    rows = []

    delta_e = variations[FieldName.E]
    shifted = config.with_fields(e=config.e + delta_e)
    value = lagrangian_density(shifted) - base - wedge(delta_e, o.eom_e)
    rows.append(residual("variational.e", "Lagrangian variation: coframe", value))

    delta_omega = variations[FieldName.OMEGA]
    shifted = config.with_fields(omega=config.omega + delta_omega)
    boundary = jet_d(wedge(o.e2, delta_omega).scale(HALF))
    value = lagrangian_density(shifted) - base - wedge(delta_omega, o.eom_omega) - boundary
    rows.append(residual("variational.omega", "Lagrangian variation: connection", value))

    delta_psi = variations[FieldName.PSI]
    shifted = config.with_fields(psi=config.psi + delta_psi)
    boundary = jet_d(chain(config.e, o.psi_bar, o.gamma3, delta_psi)).scale(Fraction(-1, 6))
    value = lagrangian_density(shifted) - base - wedge(o.eom_psi, delta_psi).scale(Fraction(1, 3)) - boundary
    rows.append(residual("variational.psi", "Lagrangian variation: gravitino", value))

    rows.append(
        residual(
            "eom.psi_reduced",
            "Reduced gravitino equation",
            reduced_eom_psi(config) - reduced_eom_psi_gamma5(config),
            required=False,
            note="compares the two printed forms of the reduced gravitino equation",
        )
    )
    rows.append(_grading_row("lagrangian.grading", "Lagrangian density grading", base, (4, 4, 0)))
    return rows


def _grading_row(check_id: str, anchor: str, value: JetField, expected: tuple[int, int, int]) -> Residual:
    try:
        observed = infer_grading(value)
    except GradingMismatchError as exc:
        return Residual(check_id, anchor, field_witness(check_id, value), note=str(exc))
    if observed is None or observed == expected:
        return Residual(check_id, anchor)
    return Residual(check_id, anchor, field_witness(check_id, value), note=f"observed grading {observed}")


# closed forms


def delta_chi_omega_closed_form(config: BVConfiguration) -> JetField:
    """Explicit ``delta_chi omega``: ``-chi_bar gamma^3 d_omega psi / 3!`` divided by ``e`` in its own frame."""
    return coframe_divide(config.e, config.e_inv, algebra(config).e_delta_chi_omega)


def delta_chi_omega_printed_form(config: BVConfiguration) -> JetField:
    """The gamma-matrix expression for ``delta_chi omega`` through the inverse vielbein."""
    o = algebra(config)
    e = config.e
    dwpsi = o.dwpsi
    return (
        wedge(o.chi_bar, o.ig(wedge(gamma_power_field(2), dwpsi))).scale(HALF)
        - chain(o.chi_bar, o.gamma, o.pair(dwpsi))
        + chain(e, o.chi_bar, o.ig2(wedge(o.gamma, dwpsi))).scale(Fraction(1, 4))
        - chain(e, o.chi_bar, o.ig(o.pair(dwpsi))).scale(HALF)
    )


def e_delta_chi_omega_bracket(config: BVConfiguration) -> JetField:
    """``[e, delta_chi omega]`` in closed form."""
    o = algebra(config)
    sigma = wedge(o.gu, o.dwpsi)
    return (
        chain(o.chi_bar, o.gamma, o.dwpsi).scale(5)
        + chain(o.chi_bar, o.gamma, o.ig(sigma))
        + wedge(o.chi_bar, o.pair(sigma))
        + chain(config.e, o.chi_bar, o.ig2(sigma)).scale(Fraction(1, 4))
    )


def half_bracket_identity(config: BVConfiguration, a: JetField) -> JetField:
    """``iota_[xi,xi] a / 2`` minus its expansion through ``iota_xi`` and ``d_omega``."""
    o = algebra(config)
    lhs = iota_vector(vector_bracket(config.xi, config.xi), a).scale(HALF)
    rhs = (
        o.ixi(o.ixi(o.dw(a))).scale(-HALF)
        + o.ixi(o.dw(o.ixi(a)))
        - o.dw(o.ixi(o.ixi(a))).scale(HALF)
    )
    return lhs - rhs


def closed_form_residuals_q0sq(config: BVConfiguration) -> list[Residual]:
    """``Q0^2`` on fields and ghosts against its closed forms, plus the supersymmetry pieces."""
    config = config.antifields_zero()
    o = algebra(config)
    q0 = q0_fields_vector_field()
    shifted = shifted_configuration(config, q0)
    sq = {name: q_squared(config, str(name), q0, shifted) for name in FIELDS}
    e, psi = config.e, config.psi
    anchor = "Q0 squared on fields"

    expected_e = o.iphi(o.torsion).scale(HALF)
    expected_psi = o.iphi(o.dwpsi).scale(HALF) - o.k_chi
    psi_k = wedge(o.psi_gamma3_chi, o.k_scalar)
    expected_e_omega = (
        o.iphi(o.eom_e).scale(HALF)
        + chain(o.psi_bar, o.gamma3, o.iphi(o.dwpsi)).scale(Fraction(1, 12))
        - psi_k.scale(Fraction(1, 6))
    )
    alternate_e_omega = (
        o.iphi(o.eom_e).scale(HALF)
        - wedge(o.psi_bar, o.iphi(wedge(o.gamma3, o.dwpsi))).scale(Fraction(1, 12))
        - psi_k.scale(Fraction(1, 6))
    )
    expected_c = o.iphi(o.delta_chi_omega).scale(HALF) + o.ixi(sq[FieldName.OMEGA])

    rows = [
        residual("q0sq.e", anchor, sq[FieldName.E] - expected_e),
        residual("q0sq.psi", anchor, sq[FieldName.PSI] - expected_psi),
        residual("q0sq.omega", anchor, wedge(e, sq[FieldName.OMEGA]) - expected_e_omega),
        residual(
            "q0sq.omega.alternate",
            anchor,
            wedge(e, sq[FieldName.OMEGA]) - alternate_e_omega,
            required=False,
            note="second printed form of e Q0^2 omega",
        ),
        residual("q0sq.c", anchor, sq[FieldName.C] - expected_c),
        residual("q0sq.chi", anchor, sq[FieldName.CHI]),
        residual("q0sq.xi", anchor, sq[FieldName.XI]),
        residual(
            "bracket.delta_chi_omega.chi",
            "Supersymmetry variation of the connection acting on chi",
            o.br(o.delta_chi_omega, config.chi) - o.k_chi,
        ),
    ]
    rows.extend(_delta_chi_squared_rows(config))
    rows.append(
        residual(
            "delta_chi_omega.closed_form",
            "Explicit supersymmetry variation of the connection",
            o.delta_chi_omega - delta_chi_omega_closed_form(config),
        )
    )
    rows.append(
        residual(
            "delta_chi_omega.printed",
            "Explicit supersymmetry variation of the connection",
            o.delta_chi_omega - delta_chi_omega_printed_form(config),
            required=False,
            note="gamma-matrix expression through the inverse vielbein, reported only",
        )
    )
    rows.append(
        residual(
            "delta_chi_omega.e_bracket",
            "Coframe bracket with the supersymmetry variation",
            eta_bracket(e, o.delta_chi_omega) - e_delta_chi_omega_bracket(config),
            required=False,
        )
    )
    rows.append(residual("half_bracket.e", "Contraction with the ghost bracket", half_bracket_identity(config, e)))
    rows.append(residual("half_bracket.psi", "Contraction with the ghost bracket", half_bracket_identity(config, psi)))
    rows.append(_derivation_row(config, q0, shifted, sq))
    rows.extend(pure_gravity_residuals(config))
    return rows


def _delta_chi_squared_rows(config: BVConfiguration) -> list[Residual]:
    o = algebra(config)
    delta = delta_chi_vector_field()
    shifted = shifted_configuration(config, delta)
    sq = {name: q_squared(config, str(name), delta, shifted) for name in FIELDS}
    anchor = "Square of the supersymmetry variation"
    note = "supplementary closed form"
    psi_k = wedge(o.psi_gamma3_chi, o.k_scalar)
    e_omega = (
        wedge(config.e, o.iphi(o.curvature)).scale(-HALF)
        + o.iphi(o.eom_e).scale(HALF)
        - wedge(o.psi_bar, o.iphi(wedge(o.gamma3, o.dwpsi))).scale(Fraction(1, 12))
        - psi_k.scale(Fraction(1, 6))
    )
    return [
        residual(
            "delta_chi_sq.e",
            anchor,
            sq[FieldName.E] - (o.lphi(config.e).scale(-HALF) + o.iphi(o.torsion).scale(HALF)),
            required=False,
            note=note,
        ),
        residual(
            "delta_chi_sq.psi",
            anchor,
            sq[FieldName.PSI] - (o.lphi(config.psi).scale(-HALF) + o.iphi(o.dwpsi).scale(HALF) - o.k_chi),
            required=False,
            note=note,
        ),
        residual(
            "delta_chi_sq.omega", anchor, wedge(config.e, sq[FieldName.OMEGA]) - e_omega, required=False, note=note
        ),
        residual(
            "delta_chi_sq.c",
            anchor,
            sq[FieldName.C] - (o.iphi(o.delta_chi_omega).scale(HALF) + o.ixi(sq[FieldName.OMEGA])),
            required=False,
            note=note,
        ),
        residual(
            "delta_chi_sq.chi", anchor, sq[FieldName.CHI] + o.lphi(config.chi).scale(HALF), required=False, note=note
        ),
        residual("delta_chi_sq.xi", anchor, sq[FieldName.XI], required=False, note=note),
    ]


def _derivation_row(
    config: BVConfiguration, vector_field: VectorField, shifted: BVConfiguration, sq: Mapping[FieldName, JetField]
) -> Residual:
    """``V^2 (e psi) = (V^2 e) psi + e V^2 psi`` for the odd vector field ``V``."""
    e_key, psi_key = str(FieldName.E), str(FieldName.PSI)

    def first_derivative(cfg: BVConfiguration) -> JetField:
        return wedge(vector_field.components[e_key](cfg), cfg.psi) + wedge(cfg.e, vector_field.components[psi_key](cfg))

    lhs = apply_vector_field(config, vector_field, first_derivative, shifted)
    rhs = wedge(sq[FieldName.E], config.psi) + wedge(config.e, sq[FieldName.PSI])
    return residual("derivation.e_psi", "Square of an odd vector field is a derivation", lhs - rhs)


def pure_gravity_residuals(config: BVConfiguration) -> list[Residual]:
    """``Q_PC^2 = 0`` on coframe, connection and ghosts with gravitino and chi switched off."""
    pure = config.pure_gravity()
    qpc = qpc_vector_field()
    shifted = shifted_configuration(pure, qpc)
    return [
        residual(f"qpc_sq.{name}", "Pure gravity nilpotency", q_squared(pure, str(name), qpc, shifted))
        for name in (FieldName.E, FieldName.OMEGA, FieldName.C, FieldName.XI)
    ]


def on_shell_row(config: BVConfiguration) -> Residual:
    """``Q0^2 e`` vanishes once the torsion constraint holds.

    The projection costs one jet order, so callers sample ``config`` one order higher than
    the other suites.

    Raises:
        InsufficientJetOrderError: If ``config`` has jet order below three.
    """
    if config.jet_order < ON_SHELL_MIN_ORDER:
        msg = f"On-shell check needs jet order {ON_SHELL_MIN_ORDER}, got {config.jet_order}"
        raise InsufficientJetOrderError(msg)
    projected = on_shell_projection(config.antifields_zero())
    q0 = q0_fields_vector_field()
    value = q_squared(projected, str(FieldName.E), q0)
    return residual("q0sq.e.on_shell", "Q0 squared on shell", value)


# classical master equation


DEGREE_TWO_REQUIRED = (FieldName.XI, FieldName.CHI)
DEGREE_TWO_GAP = "antifield degree 2 needs the quadratic vector field on antifields, which is not evaluated"


def degree_split(
    config: BVConfiguration, q: VectorField, names: tuple[FieldName, ...] = FIELDS
) -> dict[FieldName, list[JetField]]:
    """``Q^2`` on each coordinate split by antifield degree, sharing the three shifted configurations."""
    totals: dict[FieldName, list[JetField]] = {name: [] for name in names}
    for factor in (0, 1, 2):
        scaled = config.scale_antifields(factor)
        shifted = shifted_configuration(scaled, q)
        for name in names:
            totals[name].append(q_squared(scaled, str(name), q, shifted))
    parts = {}
    for name, (r0, r1, r2) in totals.items():
        quadratic = (r2 - r1.scale(2) + r0).scale(HALF)
        parts[name] = [r0, r1 - r0 - quadratic, quadratic]
    return parts


def cme_residual_suite(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> list[Residual]:
    """``Q^2`` on every field and ghost, split by antifield degree.

    Degrees zero and one only involve ``Q0`` on antifields, so they are required for all
    coordinates. Degree two also involves the quadratic part on antifields, which is not
    evaluated, so it is required only for ``xi`` and ``chi``; on ``e`` it is reported next to
    the closed form of ``qq^2 e``, on ``omega``, ``psi`` and ``c`` it is a stated gap.
    """
    parts = degree_split(config, q_total_vector_field(options))
    rows = []
    for name in FIELDS:
        r0, linear, quadratic = parts[name]
        rows.append(residual(f"cme.{name}.deg0", "Q squared, antifield degree 0", r0))
        rows.append(residual(f"cme.{name}.deg1", "Q squared, antifield degree 1", linear))
        if name in DEGREE_TWO_REQUIRED:
            rows.append(residual(f"cme.{name}.deg2", "Q squared, antifield degree 2", quadratic))
            continue
        note = DEGREE_TWO_GAP
        if name is FieldName.E:
            note = "contains qq^2 e, which is nonzero; see qq_sq.e.closed_form"
        rows.append(
            residual(f"cme.{name}.deg2", "Q squared, antifield degree 2", quadratic, required=False, note=note)
        )
    return rows


def qq_squared_e_closed_form(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> JetField:
    """``(e^2 / 2) qq^2 e + iota_phi e iota_phi(omega_check^2) / 16``, which vanishes when ``xi = 0``.

    With ``xi = 0`` the quadratic part is ``iota_phi omega_check / 2`` on ``e``; ``qq`` annihilates
    ``phi`` and ``e omega_check``, so only the square of ``omega_check`` survives.
    """
    o = algebra(config, options)
    qq = qq_vector_field(options)
    qq_sq_e = q_squared(config, str(FieldName.E), qq)
    phi_e = o.iphi(config.e)
    return wedge(o.e2.scale(HALF), qq_sq_e) + wedge(
        phi_e, o.iphi(wedge(config.omega_check, config.omega_check))
    ).scale(Fraction(1, 16))


def qq_squared_e_row(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> Residual:
    """``qq^2 e`` against its closed form on the configuration with the ghost ``xi`` switched off."""
    no_xi = config.with_fields(xi=config.xi.scale(0))
    return residual(
        "qq_sq.e.closed_form",
        "Quadratic vector field squared on e",
        qq_squared_e_closed_form(no_xi, options),
        note="evaluated at xi = 0",
    )


def quadratic_structure_residuals(config: BVConfiguration, options: EngineOptions = DEFAULT_OPTIONS) -> list[Residual]:
    """Identities of the quadratic vector field alone."""
    qq = qq_vector_field(options)
    shifted = shifted_configuration(config, qq)
    phi_shift = apply_vector_field(config, qq, lambda cfg: cfg.phi, shifted)
    qq_sq_e = q_squared(config, str(FieldName.E), qq, shifted)
    omega_check_shift = apply_vector_field(config, qq, lambda cfg: cfg.omega_check, shifted)
    c_check_shift = apply_vector_field(config, qq, lambda cfg: cfg.c_check, shifted)
    qe = qq_e(config, options)
    e = config.e
    rows = [
        residual("qq.phi", "Quadratic vector field on phi", phi_shift),
        residual(
            "qq_sq.e",
            "Quadratic vector field squared on e",
            qq_sq_e,
            required=False,
            note="nonzero in general; see qq_sq.e.closed_form",
        ),
        qq_squared_e_row(config, options),
        residual(
            "qq.omega_check",
            "Quadratic vector field on the reduced antifields",
            wedge(e, omega_check_shift) + wedge(config.omega_check, qe),
        ),
        residual(
            "qq.c_check",
            "Quadratic vector field on the reduced antifields",
            wedge(wedge_power(e, 2).scale(HALF), c_check_shift) + chain(e, qe, config.c_check),
        ),
        _grading_row("s2.grading", "Quadratic action density grading", s2_density(config, options), (4, 4, 0)),
    ]
    bracket_on_psi = replace(options, q_psi_variant=QPsiVariant.SECTION4)
    bracket_on_gamma = replace(options, q_psi_variant=QPsiVariant.APPENDIX_B)
    rows.append(
        residual(
            "qq.psi.variants",
            "Printed forms of the gravitino component",
            qq_psi(config, bracket_on_psi) - qq_psi(config, bracket_on_gamma),
            required=False,
            note="difference between the two printed forms",
        )
    )
    return rows


def negative_control_residuals(config: BVConfiguration) -> list[Residual]:
    """Perturbed vector fields whose squares must fail on ``e``."""
    rows = []
    controls: list[tuple[str, EngineOptions, int]] = [
        ("negative.no_l_correction", EngineOptions(l_correction=False), 1),
        ("negative.delta_chi_sign", EngineOptions(delta_chi_sign=-1), 0),
    ]
    controls.extend(
        (f"negative.drop.{term}", EngineOptions(qq_e_drop=frozenset({term})), 1) for term in QQ_E_TERMS
    )
    for check_id, options, degree in controls:
        q = q_total_vector_field(options)

        def evaluate(cfg: BVConfiguration, q: VectorField = q) -> JetField:
            return q_squared(cfg, str(FieldName.E), q)

        value = antifield_degree_parts(evaluate, config)[degree]
        rows.append(
            residual(
                check_id,
                "Negative control",
                value,
                expect_witness=True,
                note=f"Q squared on e, antifield degree {degree}",
            )
        )
    rows.extend(s2_line_controls(config))
    return rows


S2_LINES = (1, 2, 3, 4, 5, 6)
S2_CONTROL_FIELDS = (FieldName.E, FieldName.OMEGA, FieldName.PSI, FieldName.C)


def s2_line_controls(config: BVConfiguration, lines: tuple[int, ...] = S2_LINES) -> list[Residual]:
    """Knock each line of the quadratic action out of ``Q`` and look for ``Q^2`` at antifield degree 1.

    The witness is taken from the first of ``e``, ``omega``, ``psi`` and ``c`` that does not vanish.
    """
    rows = []
    for line in lines:
        q = q_total_vector_field(EngineOptions(s2_drop=frozenset({line})))
        parts = degree_split(config, q, S2_CONTROL_FIELDS)
        name, value = next(
            ((name, parts[name][1]) for name in S2_CONTROL_FIELDS if not parts[name][1].is_zero()),
            (FieldName.E, parts[FieldName.E][1]),
        )
        logger.debug("Line %d of the quadratic action knocked out: first defect on %s", line, name)
        rows.append(
            residual(
                f"negative.s2_line.{line}",
                "Negative control",
                value,
                expect_witness=True,
                note=f"Q squared on {name}, antifield degree 1",
            )
        )
    return rows


def grading_residuals(config: BVConfiguration) -> list[Residual]:
    """Every registered coordinate has its declared grading and spinors are Majorana."""
    rows = [
        Residual(f"grading.{name}", "Field gradings", None if ok else _flag(name), note=None if ok else "grading")
        for name, ok in grading_audit(config).items()
    ]
    rows.extend(
        Residual(f"majorana.{name}", "Majorana constraint", None if ok else _flag(name))
        for name, ok in majorana_audit(config).items()
    )
    return rows


def _flag(name: str) -> Witness:
    return Witness(str(name), "audit", [], [], "1")


# (form degree, multivector degree, coefficient parity) of each vector field output
OUTPUT_GRADINGS: dict[str, tuple[int, int, int]] = {
    FieldName.E: (1, 1, 1),
    FieldName.OMEGA: (1, 2, 1),
    FieldName.PSI: (1, 0, 0),
    FieldName.C: (0, 2, 0),
    FieldName.XI: (0, 0, 0),
    FieldName.CHI: (0, 0, 1),
    FieldName.E_DAG: (3, 3, 0),
    Canonical.OMEGA_DAG: (3, 2, 0),
    Canonical.PSI_DAG: (3, 4, 1),
    Canonical.C_DAG: (4, 2, 1),
    FieldName.XI_DAG: (4, 4, 1),
    Canonical.CHI_DAG: (4, 4, 0),
}


def vector_field_grading_residuals(config: BVConfiguration, vector_field: VectorField) -> list[Residual]:
    """Every component of an odd vector field shifts the grading of its coordinate as expected."""
    return [
        _grading_row(
            f"grading.{vector_field.name}.{key}",
            "Gradings of the BV vector field",
            fn(config),
            OUTPUT_GRADINGS[key],
        )
        for key, fn in vector_field.components.items()
    ]


def q0_antifield_residuals(config: BVConfiguration) -> list[Residual]:
    """With ghosts and antifields switched off, ``Q0`` on antifields reduces to the equations of motion."""
    bare = config.antifields_zero().with_fields(
        c=config.c.scale(0), xi=config.xi.scale(0), chi=config.chi.scale(0)
    )
    anchor = "Q0 on antifields, ghost-free part"
    return [
        residual("q0.e_dag.eom", anchor, q0_e_dag(bare) - algebra(bare).eom_e),
        residual("q0.omega_check.eom", anchor, e_q0_omega_check(bare) - algebra(bare).eom_omega),
        residual("q0.psi_dag.eom", anchor, q0_psi_dag(bare) + reduced_eom_psi(bare)),
    ]
