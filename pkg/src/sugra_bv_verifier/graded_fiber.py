"""Graded fibre calculus at a point.

A :class:`Germ` is a truncated Taylor polynomial in the four coordinates whose coefficients
live in one supercommutative algebra generated by the odd field generators, the coordinate
differentials ``dx^mu`` and the frame basis ``v_a``. Forms, multivectors and Grassmann
coefficients therefore share a single sign convention: total parity is the number of odd
generators in a monomial. A :class:`JetField` arranges germs into the shapes the multiplet
needs (scalar, spinor, cospinor, Clifford matrix, vector field, covector density).
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import cache

from sugra_bv_verifier.clifford_spin import ETA, GammaRep, antisymmetrized_gamma, build_gamma_rep
from sugra_bv_verifier.errors import (
    GradingMismatchError,
    InsufficientJetOrderError,
    UnsupportedTargetError,
)
from sugra_bv_verifier.exact_scalars import (
    DX_BIT0,
    DX_MASK,
    EPSILON_MASK,
    THETA_MASK,
    V_BIT0,
    V_MASK,
    GaussianRational,
    GrassmannElement,
    Number,
    grassmann_mul,
    mask_generators,
)
from sugra_bv_verifier.models import Residual, Witness

logger = logging.getLogger(__name__)

DIM = 4
EXACT = 1 << 16

type XExp = tuple[int, int, int, int]
X0: XExp = (0, 0, 0, 0)


def _xdeg(x: XExp) -> int:
    return x[0] + x[1] + x[2] + x[3]


def _xadd(a: XExp, b: XExp) -> XExp:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def left_derivative(x: GrassmannElement, bit: int) -> GrassmannElement:
    """Remove generator ``bit`` from the left, with the sign of moving it to the front."""
    flag = 1 << bit
    below = flag - 1
    out: dict[int, GaussianRational] = {}
    for mask, coefficient in x.terms.items():
        if mask & flag:
            out[mask ^ flag] = -coefficient if (mask & below).bit_count() & 1 else coefficient
    result = GrassmannElement()
    result.terms = out
    return result


def right_derivative(x: GrassmannElement, bit: int) -> GrassmannElement:
    """Remove generator ``bit`` from the right, with the sign of moving it to the end."""
    flag = 1 << bit
    out: dict[int, GaussianRational] = {}
    for mask, coefficient in x.terms.items():
        if mask & flag:
            out[mask ^ flag] = -coefficient if (mask >> (bit + 1)).bit_count() & 1 else coefficient
    result = GrassmannElement()
    result.terms = out
    return result


def strip_suffix(x: GrassmannElement, suffix: int, block: int = DX_MASK | V_MASK) -> GrassmannElement:
    """Coefficient of the rightmost block ``suffix`` in ``x``.

    Only the bits of ``block`` have to match ``suffix`` exactly; the rest stay in the coefficient.
    """
    return GrassmannElement({m ^ suffix: c for m, c in x.terms.items() if m & block == suffix})


class Germ:
    """Truncated polynomial in the coordinates with supercommutative coefficients.

    Attributes:
        terms: Mapping from coordinate exponent to coefficient.
        order: Highest coordinate degree that is known exactly.
    """

    __slots__ = ("order", "terms")

    terms: dict[XExp, GrassmannElement]
    order: int

    def __init__(self, terms: dict[XExp, GrassmannElement] | None = None, order: int = EXACT) -> None:
        """Initialise, dropping zero coefficients and terms beyond the order."""
        self.order = order
        self.terms = {}
        if terms:
            for x, g in terms.items():
                if not g.is_zero() and _xdeg(x) <= order:
                    self.terms[x] = g

    @classmethod
    def constant(cls, value: GrassmannElement | Number, order: int = EXACT) -> Germ:
        """Constant germ (no coordinate dependence)."""
        g = value if isinstance(value, GrassmannElement) else GrassmannElement.scalar(value)
        return cls({X0: g}, order)

    @classmethod
    def generator(cls, bit: int) -> Germ:
        """The single odd generator ``bit`` as an exact constant germ."""
        return cls.constant(GrassmannElement.generator(bit))

    def is_zero(self) -> bool:
        """Return True when no term survives."""
        return not self.terms

    def truncate(self, order: int) -> Germ:
        """Forget every term above ``order``."""
        return Germ(self.terms, min(order, self.order))

    def value(self) -> GrassmannElement:
        """Coefficient of the constant term."""
        return self.terms.get(X0, GrassmannElement())

    def map(self, fn: Callable[[GrassmannElement], GrassmannElement]) -> Germ:
        """Apply a linear map to every coefficient."""
        return Germ({x: fn(g) for x, g in self.terms.items()}, self.order)

    def scale(self, factor: Number) -> Germ:
        """Multiply by a number."""
        value = GaussianRational.coerce(factor)
        if value.is_zero():
            return Germ(order=self.order)
        return Germ({x: g.scale(value) for x, g in self.terms.items()}, self.order)

    def __add__(self, other: Germ) -> Germ:
        order = min(self.order, other.order)
        out = {x: g for x, g in self.terms.items() if _xdeg(x) <= order}
        for x, g in other.terms.items():
            if _xdeg(x) > order:
                continue
            out[x] = out[x] + g if x in out else g
        return Germ(out, order)

    def __neg__(self) -> Germ:
        return self.scale(-1)

    def __sub__(self, other: Germ) -> Germ:
        return self + (-other)

    def __mul__(self, other: Germ) -> Germ:
        order = min(self.order, other.order)
        out: dict[XExp, GrassmannElement] = {}
        for xa, ga in self.terms.items():
            da = _xdeg(xa)
            if da > order:
                continue
            for xb, gb in other.terms.items():
                if da + _xdeg(xb) > order:
                    continue
                product = grassmann_mul(ga, gb)
                if product.is_zero():
                    continue
                key = _xadd(xa, xb)
                out[key] = out[key] + product if key in out else product
        return Germ(out, order)

    def partial(self, mu: int) -> Germ:
        """Coordinate derivative; the order drops by one."""
        out: dict[XExp, GrassmannElement] = {}
        for x, g in self.terms.items():
            power = x[mu]
            if power:
                lowered = list(x)
                lowered[mu] -= 1
                out[(lowered[0], lowered[1], lowered[2], lowered[3])] = g.scale(power)
        return Germ(out, self.order - 1)

    def d(self) -> Germ:
        """De Rham differential ``dx^mu d_mu`` acting from the left."""
        if self.order < 1:
            msg = f"de Rham differential needs jet order >= 1, got {self.order}"
            raise InsufficientJetOrderError(msg)
        total = Germ(order=self.order - 1)
        for mu in range(DIM):
            derivative = self.partial(mu)
            if not derivative.is_zero():
                total = total + dx(mu) * derivative
        return total

    def iota(self, mu: int) -> Germ:
        """Contraction with the coordinate vector ``d_mu``."""
        bit = DX_BIT0 + mu
        return self.map(lambda g: left_derivative(g, bit))

    def parity(self) -> int | None:
        """Total parity of the germ, None when it vanishes.

        Raises:
            GradingMismatchError: If monomials of both parities are present.
        """
        found: int | None = None
        for g in self.terms.values():
            for mask in g.terms:
                p = mask.bit_count() & 1
                if found is None:
                    found = p
                elif found != p:
                    msg = "Germ mixes even and odd monomials"
                    raise GradingMismatchError(msg)
        return found

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Germ):
            return NotImplemented
        order = min(self.order, other.order)
        return self.truncate(order).terms == other.truncate(order).terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms)))

    def __repr__(self) -> str:
        return f"Germ(order={self.order}, terms={len(self.terms)})"


@cache
def dx(mu: int) -> Germ:
    """The coordinate differential ``dx^mu``."""
    return Germ.generator(DX_BIT0 + mu)


@cache
def v(a: int) -> Germ:
    """The frame basis vector ``v_a``."""
    return Germ.generator(V_BIT0 + a)


def germ_eta_bracket(a: Germ, b: Germ) -> Germ:
    """``sum_a eta_aa (dR_{v_a} A)(dL_{v_a} B)``: the eta-induced bracket of multivectors."""
    total = Germ(order=min(a.order, b.order))
    for index in range(DIM):
        bit = V_BIT0 + index
        left = a.map(lambda g, bit=bit: right_derivative(g, bit))
        if left.is_zero():
            continue
        right = b.map(lambda g, bit=bit: left_derivative(g, bit))
        if right.is_zero():
            continue
        total = total + (left * right).scale(ETA[index])
    return total


def germ_component(germ: Germ, dx_indices: Sequence[int] = (), v_indices: Sequence[int] = ()) -> Germ:
    """Coefficient germ of the basis monomial ``dx^I v_J`` (indices ascending)."""
    suffix = 0
    for mu in dx_indices:
        suffix |= 1 << (DX_BIT0 + mu)
    for a in v_indices:
        suffix |= 1 << (V_BIT0 + a)
    return germ.map(lambda g: strip_suffix(g, suffix))


class Target(StrEnum):
    """Shape of the values a field takes."""

    SCALAR = "scalar"
    SPINOR = "spinor"
    COSPINOR = "cospinor"
    CLIFFORD = "clifford"
    VECTOR = "vector"
    COVECTOR = "covector"


_SHAPES: dict[Target, tuple[int, int]] = {
    Target.SCALAR: (1, 1),
    Target.SPINOR: (4, 1),
    Target.COSPINOR: (1, 4),
    Target.CLIFFORD: (4, 4),
    Target.VECTOR: (4, 1),
    Target.COVECTOR: (1, 4),
}
_MATRIX_TARGETS = {(1, 1): Target.SCALAR, (4, 1): Target.SPINOR, (1, 4): Target.COSPINOR, (4, 4): Target.CLIFFORD}


@dataclass(frozen=True)
class Grading:
    """Degree bookkeeping of a field."""

    form_degree: int
    target: Target
    multivector_degree: int
    ghost_number: int
    coefficient_parity: int


class JetField:
    """A germ-valued scalar, spinor, cospinor, Clifford matrix, vector field or covector."""

    __slots__ = ("entries", "target")

    target: Target
    entries: tuple[Germ, ...]

    def __init__(self, target: Target, entries: Sequence[Germ]) -> None:
        """Initialise from a target and row-major entries.

        Raises:
            GradingMismatchError: If the number of entries does not fit the target.
        """
        rows, cols = _SHAPES[target]
        if len(entries) != rows * cols:
            msg = f"{target} needs {rows * cols} entries, got {len(entries)}"
            raise GradingMismatchError(msg)
        self.target = target
        self.entries = tuple(entries)

    @classmethod
    def scalar(cls, germ: Germ) -> JetField:
        """Wrap a germ as a scalar-target field."""
        return cls(Target.SCALAR, [germ])

    @classmethod
    def zero(cls, target: Target = Target.SCALAR, order: int = EXACT) -> JetField:
        """The zero field of a target."""
        rows, cols = _SHAPES[target]
        return cls(target, [Germ(order=order) for _ in range(rows * cols)])

    @classmethod
    def numeric(cls, matrix: Sequence[Sequence[GaussianRational]]) -> JetField:
        """Constant Clifford-target field from a numeric 4x4 matrix."""
        return cls(Target.CLIFFORD, [Germ.constant(x) for row in matrix for x in row])

    @property
    def shape(self) -> tuple[int, int]:
        """Rows and columns."""
        return _SHAPES[self.target]

    @property
    def order(self) -> int:
        """Smallest jet order among entries."""
        return min(e.order for e in self.entries)

    @property
    def germ(self) -> Germ:
        """The single entry of a scalar field."""
        if self.target is not Target.SCALAR:
            msg = f"Expected a scalar field, got {self.target}"
            raise GradingMismatchError(msg)
        return self.entries[0]

    def entry(self, row: int, col: int = 0) -> Germ:
        """Entry at (row, col)."""
        return self.entries[row * self.shape[1] + col]

    def is_zero(self) -> bool:
        """True when every entry vanishes."""
        return all(e.is_zero() for e in self.entries)

    def map(self, fn: Callable[[Germ], Germ]) -> JetField:
        """Apply a germ map entrywise."""
        return JetField(self.target, [fn(e) for e in self.entries])

    def truncate(self, order: int) -> JetField:
        """Forget terms above ``order``."""
        return self.map(lambda e: e.truncate(order))

    def scale(self, factor: Number) -> JetField:
        """Multiply by a number."""
        return self.map(lambda e: e.scale(factor))

    def parity(self) -> int | None:
        """Total parity shared by all entries, None for the zero field.

        Raises:
            GradingMismatchError: If entries disagree.
        """
        found: int | None = None
        for e in self.entries:
            p = e.parity()
            if p is None:
                continue
            if found is None:
                found = p
            elif found != p:
                msg = f"{self.target} field mixes parities across entries"
                raise GradingMismatchError(msg)
        return found

    def _check_same(self, other: JetField) -> None:
        if self.target is not other.target:
            msg = f"Cannot combine {self.target} with {other.target}"
            raise GradingMismatchError(msg)

    def __add__(self, other: JetField) -> JetField:
        self._check_same(other)
        return JetField(self.target, [a + b for a, b in zip(self.entries, other.entries, strict=True)])

    def __sub__(self, other: JetField) -> JetField:
        self._check_same(other)
        return JetField(self.target, [a - b for a, b in zip(self.entries, other.entries, strict=True)])

    def __neg__(self) -> JetField:
        return self.scale(-1)

    def __mul__(self, other: JetField | Number) -> JetField:
        if not isinstance(other, JetField):
            return self.scale(other)
        return wedge(self, other)

    def __rmul__(self, other: Number) -> JetField:
        return self.scale(other)

    def __repr__(self) -> str:
        return f"JetField({self.target}, order={self.order})"


def _broadcast(scalar: Germ, field: JetField, scalar_left: bool) -> JetField:
    if scalar_left:
        return field.map(lambda e: scalar * e)
    return field.map(lambda e: e * scalar)


def wedge(a: JetField, b: JetField) -> JetField:
    """Graded product: matrix multiplication of germ entries, keeping factor order.

    Scalar fields broadcast over any target. The result order is the minimum of the inputs.

    Raises:
        UnsupportedTargetError: For products of two vector-type fields.
        GradingMismatchError: For incompatible matrix shapes.
    """
    if a.target is Target.SCALAR:
        return _broadcast(a.entries[0], b, scalar_left=True)
    if b.target is Target.SCALAR:
        return _broadcast(b.entries[0], a, scalar_left=False)
    if a.target in (Target.VECTOR, Target.COVECTOR) or b.target in (Target.VECTOR, Target.COVECTOR):
        msg = f"Wedge of {a.target} and {b.target} is not defined"
        raise UnsupportedTargetError(msg)
    ra, ca = a.shape
    rb, cb = b.shape
    if ca != rb:
        msg = f"Shape mismatch in product: {a.shape} x {b.shape}"
        raise GradingMismatchError(msg)
    order = min(a.order, b.order)
    entries = []
    for r in range(ra):
        for c in range(cb):
            total = Germ(order=order)
            for k in range(ca):
                x, y = a.entry(r, k), b.entry(k, c)
                if x.is_zero() or y.is_zero():
                    continue
                total = total + x * y
            entries.append(total)
    return JetField(_MATRIX_TARGETS[(ra, cb)], entries)


def eta_bracket(a: JetField, b: JetField) -> JetField:
    """Eta-induced bracket; one side must be scalar-target.

    Raises:
        GradingMismatchError: If neither side is a scalar field.
    """
    if a.target is Target.SCALAR:
        return b.map(lambda e: germ_eta_bracket(a.entries[0], e))
    if b.target is Target.SCALAR:
        return a.map(lambda e: germ_eta_bracket(e, b.entries[0]))
    msg = f"Bracket of {a.target} with {b.target} is not defined"
    raise GradingMismatchError(msg)


@cache
def _sigma_matrices() -> tuple[tuple[tuple[int, int], tuple[GaussianRational, ...]], ...]:
    rep = build_gamma_rep()
    out = []
    for a in range(DIM):
        for b in range(a + 1, DIM):
            m = antisymmetrized_gamma(rep, [a, b])
            out.append(((a, b), tuple(x * Fraction(-1, 2) for row in m for x in row)))
    return tuple(out)


def rho(a: JetField) -> JetField:
    """Spinor representation ``-1/4 A^{ab} gamma_ab`` of the bivector part of ``A``."""
    germ = a.germ
    entries = [Germ(order=germ.order) for _ in range(16)]
    for (i, j), matrix in _sigma_matrices():
        suffix = (1 << (V_BIT0 + i)) | (1 << (V_BIT0 + j))
        coefficient = germ.map(lambda g, suffix=suffix: strip_suffix(g, suffix, V_MASK))
        if coefficient.is_zero():
            continue
        for k, x in enumerate(matrix):
            if not x.is_zero():
                entries[k] = entries[k] + coefficient.scale(x)
    return JetField(Target.CLIFFORD, entries)


def _sign(p: int | None, q: int | None) -> int:
    return -1 if (p or 0) * (q or 0) & 1 else 1


def rep_action(a: JetField, x: JetField) -> JetField:
    """Action ``[A, X]`` of a multivector-valued field on any matrix-target field.

    The eta-bracket part acts on frame indices; the bivector part of ``A`` also acts on
    spinor indices from the left (spinors), the right (cospinors) or by graded commutator
    (Clifford matrices).

    Raises:
        UnsupportedTargetError: For vector-field and covector targets.
    """
    if a.target is not Target.SCALAR:
        msg = f"Representation action needs a multivector-valued field, got {a.target}"
        raise UnsupportedTargetError(msg)
    if x.target in (Target.VECTOR, Target.COVECTOR):
        msg = f"No frame action on {x.target} fields"
        raise UnsupportedTargetError(msg)
    result = eta_bracket(a, x)
    if x.target is Target.SCALAR:
        return result
    spin = rho(a)
    if spin.is_zero():
        return result
    if x.target is Target.SPINOR:
        return result + wedge(spin, x)
    sign = _sign(a.parity(), x.parity())
    if x.target is Target.COSPINOR:
        return result - wedge(x, spin).scale(sign)
    return result + wedge(spin, x) - wedge(x, spin).scale(sign)


def jet_d(a: JetField) -> JetField:
    """De Rham differential entrywise.

    Raises:
        InsufficientJetOrderError: If any entry has order below one.
    """
    return a.map(lambda e: e.d())


def covariant_d(omega: JetField, a: JetField) -> JetField:
    """``d_omega a = d a + [omega, a]``; vector targets only get ``d``."""
    if a.target in (Target.VECTOR, Target.COVECTOR):
        return jet_d(a)
    return jet_d(a) + rep_action(omega, a)


def curvature(omega: JetField) -> JetField:
    """``F = d omega + 1/2 [omega, omega]``."""
    return jet_d(omega) + eta_bracket(omega, omega).scale(Fraction(1, 2))


def iota_vector(xi: JetField, a: JetField) -> JetField:
    """Interior product ``xi^mu iota_mu`` with the vector components on the left.

    Raises:
        GradingMismatchError: If ``xi`` is not a vector field.
    """
    if xi.target is not Target.VECTOR:
        msg = f"Interior product needs a vector field, got {xi.target}"
        raise GradingMismatchError(msg)
    components = xi.entries

    def contract(e: Germ) -> Germ:
        total = Germ(order=min(e.order, xi.order))
        for mu in range(DIM):
            if components[mu].is_zero():
                continue
            inner = e.iota(mu)
            if not inner.is_zero():
                total = total + components[mu] * inner
        return total

    return a.map(contract)


def iota_coordinate(mu: int, a: JetField) -> JetField:
    """Contraction with the coordinate vector ``d_mu``."""
    return a.map(lambda e: e.iota(mu))


def lie_covariant(xi: JetField, omega: JetField, a: JetField) -> JetField:
    """Covariant Lie derivative as the graded commutator ``[iota_xi, d_omega]``."""
    p = xi.parity()
    iota_parity = ((p or 0) + 1) & 1
    first = iota_vector(xi, covariant_d(omega, a))
    second = covariant_d(omega, iota_vector(xi, a))
    if iota_parity:
        return first + second
    return first - second


def vector_bracket(x: JetField, y: JetField) -> JetField:
    """Graded Lie bracket of vector fields ``X^nu d_nu Y^mu -+ Y^nu d_nu X^mu``."""
    sign = _sign(x.parity(), y.parity())
    entries = []
    for mu in range(DIM):
        total = Germ(order=min(x.order, y.order) - 1)
        for nu in range(DIM):
            total = total + x.entries[nu] * y.entries[mu].partial(nu)
            total = total - (y.entries[nu] * x.entries[mu].partial(nu)).scale(sign)
        entries.append(total)
    return JetField(Target.VECTOR, entries)


type InverseVielbein = tuple[tuple[Germ, ...], ...]


def iota_gamma_hat(e_inv: InverseVielbein, a: JetField) -> JetField:
    """``gamma^a e_a^mu iota_mu a`` with the gamma matrix on the left.

    Args:
        e_inv: Inverse vielbein germs indexed ``[mu][a]``.
        a: Spinor, Clifford or scalar field; scalars become Clifford-valued.

    Raises:
        UnsupportedTargetError: For cospinor or vector targets.
    """
    if a.target is Target.SCALAR:
        a = wedge(JetField.numeric(_identity_matrix()), a)
    if a.target not in (Target.SPINOR, Target.CLIFFORD):
        msg = f"gamma-hat contraction is not defined on {a.target}"
        raise UnsupportedTargetError(msg)
    rep = build_gamma_rep()
    total = JetField.zero(a.target, a.order)
    for index in range(DIM):
        contracted = JetField.zero(a.target, a.order)
        for mu in range(DIM):
            coefficient = e_inv[mu][index]
            if coefficient.is_zero():
                continue
            inner = iota_coordinate(mu, a)
            if not inner.is_zero():
                contracted = contracted + wedge(JetField.scalar(coefficient), inner)
        if not contracted.is_zero():
            total = total + wedge(JetField.numeric(rep.gamma_upper[index]), contracted)
    return total


def e_pair(e_inv: InverseVielbein, sigma: JetField) -> JetField:
    """``v_a eta^{ab} e_b^mu iota_mu sigma``: trade a form index for a frame index."""
    total = JetField.zero(sigma.target, sigma.order)
    for index in range(DIM):
        contracted = JetField.zero(sigma.target, sigma.order)
        for mu in range(DIM):
            coefficient = e_inv[mu][index]
            if coefficient.is_zero():
                continue
            inner = iota_coordinate(mu, sigma)
            if not inner.is_zero():
                contracted = contracted + wedge(JetField.scalar(coefficient), inner)
        if not contracted.is_zero():
            total = total + wedge(JetField.scalar(v(index).scale(ETA[index])), contracted)
    return total


def iota_frame(e_inv: InverseVielbein, index: int, germ: Germ) -> Germ:
    """Contraction ``e_a^mu iota_mu`` with the frame vector ``e_a``."""
    total = Germ(order=germ.order)
    for mu in range(DIM):
        coefficient = e_inv[mu][index]
        if coefficient.is_zero():
            continue
        inner = germ.iota(mu)
        if not inner.is_zero():
            total = total + coefficient * inner
    return total


def _frame_derivative(index: int, germ: Germ) -> Germ:
    return germ.map(lambda g, bit=V_BIT0 + index: left_derivative(g, bit))


def coframe_divide(e: JetField, e_inv: InverseVielbein, y: JetField) -> JetField:
    """The (1,2)-form ``x`` with ``e x = y``, written out in the frame of ``e``.

    With ``x = e^a x_a`` and ``e^a = e^a_mu dx^mu``, the frame contractions give
    ``P_ab = iota_b iota_a y = v_b x_a - v_a x_b``. Then ``D_a = sum_b dL_{v_b} P_ab`` equals
    ``x_a + v_a U`` and ``sum_a dL_{v_a} D_a = 4 U``.

    Args:
        e: The coframe.
        e_inv: Inverse vielbein germs of ``e``.
        y: A scalar (2,3)-form.

    Returns:
        The unique scalar (1,2)-form ``x``.
    """
    germ = y.germ
    parts = []
    for a in range(DIM):
        once = iota_frame(e_inv, a, germ)
        total = Germ(order=germ.order)
        for b in range(DIM):
            total = total + _frame_derivative(b, iota_frame(e_inv, b, once))
        parts.append(total)
    u = Germ(order=germ.order)
    for a, part in enumerate(parts):
        u = u + _frame_derivative(a, part)
    u = u.scale(Fraction(1, 4))
    result = Germ(order=germ.order)
    for a, part in enumerate(parts):
        coframe = Germ(order=e.order)
        for mu in range(DIM):
            coefficient = germ_component(e.germ, (mu,), (a,))
            if not coefficient.is_zero():
                coframe = coframe + coefficient * dx(mu)
        result = result + coframe * (part - v(a) * u)
    return JetField.scalar(result)


def _identity_matrix() -> list[list[GaussianRational]]:
    return [[GaussianRational(1 if r == c else 0) for c in range(4)] for r in range(4)]


@cache
def gamma_field() -> JetField:
    """The frame-valued constant ``gamma = gamma^a v_a``."""
    rep = build_gamma_rep()
    entries = []
    for r in range(4):
        for c in range(4):
            total = Germ()
            for a in range(DIM):
                x = rep.gamma_upper[a][r][c]
                if not x.is_zero():
                    total = total + v(a).scale(x)
            entries.append(total)
    return JetField(Target.CLIFFORD, entries)


@cache
def gamma_power_field(n: int) -> JetField:
    """Wedge power ``gamma^n``."""
    result = JetField.numeric(_identity_matrix())
    for _ in range(n):
        result = wedge(result, gamma_field())
    return result


def gamma_underline(e: JetField) -> JetField:
    """``[e, gamma] = gamma_mu dx^mu``."""
    return eta_bracket(e, gamma_field())


def gamma5_field(rep: GammaRep | None = None) -> JetField:
    """Constant ``gamma^5``."""
    return JetField.numeric((rep or build_gamma_rep()).gamma5)


def iter_terms(field: JetField) -> Iterator[tuple[int, XExp, int, GaussianRational]]:
    """Iterate ``(entry index, exponent, mask, coefficient)`` in a deterministic order."""
    for index, entry in enumerate(field.entries):
        for x in sorted(entry.terms):
            for mask, coefficient in entry.terms[x].items():
                yield index, x, mask, coefficient


def field_witness(label: str, field: JetField, order: int | None = None) -> Witness | None:
    """First nonzero coefficient of a field as a witness, or None for an exact zero.

    Args:
        label: Name recorded in the witness.
        field: Residual field.
        order: Only consider coordinate degrees up to this order.
    """
    for index, x, mask, coefficient in iter_terms(field):
        if order is not None and _xdeg(x) > order:
            continue
        return Witness(
            field=label,
            component=f"{field.target}[{index}]",
            derivative_index=list(x),
            monomial=mask_generators(mask),
            coefficient=str(coefficient),
        )
    return None


def infer_grading(field: JetField) -> tuple[int, int, int] | None:
    """Observed (form degree, multivector degree, coefficient parity), None for zero.

    Raises:
        GradingMismatchError: If the field is not homogeneous.
    """
    found: set[tuple[int, int, int]] = set()
    for entry in field.entries:
        for g in entry.terms.values():
            for mask in g.terms:
                found.add(
                    (
                        (mask & DX_MASK).bit_count(),
                        (mask & V_MASK).bit_count(),
                        (mask & THETA_MASK).bit_count() & 1,
                    )
                )
    if not found:
        return None
    if len(found) > 1:
        msg = f"Inhomogeneous {field.target} field with gradings {sorted(found)}"
        raise GradingMismatchError(msg)
    return found.pop()


def audit_grading(field: JetField, expected: Grading) -> bool:
    """Check a field against its declared grading; the zero field always passes."""
    if field.target is not expected.target:
        return False
    observed = infer_grading(field)
    if observed is None:
        return True
    return observed == (expected.form_degree, expected.multivector_degree, expected.coefficient_parity)


def v_gamma_power_residual(a: int, n: int) -> JetField:
    """``[v_a, gamma^n] - n [v_a, gamma] gamma^(n-1) - n(n-1) v_a gamma^(n-2)``."""
    va = JetField.scalar(v(a))
    lhs = eta_bracket(va, gamma_power_field(n))
    first = wedge(eta_bracket(va, gamma_field()), gamma_power_field(n - 1)).scale(n)
    residual = lhs - first
    if n >= 2:
        residual = residual - wedge(va, gamma_power_field(n - 2)).scale(n * (n - 1))
    return residual


def check_v_gamma_powers(max_power: int = 4) -> list[Residual]:
    """One row per power ``n`` covering every frame index ``a``."""
    rows = []
    for n in range(1, max_power + 1):
        witness = None
        for a in range(DIM):
            witness = field_witness(f"v_gamma:{a}", v_gamma_power_residual(a, n))
            if witness is not None:
                break
        rows.append(Residual(f"gamma:v_a_power:{n}", "[v_a, gamma^N] expansion", witness))
    return rows


def body_field(field: JetField) -> JetField:
    """Numeric part of a field: constant term with the field generators set to zero."""

    def body(e: Germ) -> Germ:
        value = e.value()
        return Germ({X0: GrassmannElement({m: c for m, c in value.terms.items() if not m & THETA_MASK})})

    return field.map(body)


def wedge_power(a: JetField, n: int) -> JetField:
    """``a^n`` for a scalar field, with ``a^0 = 1``."""
    result = JetField.scalar(Germ.constant(1))
    for _ in range(n):
        result = wedge(result, a)
    return result


def majorana_bar_field(spinor: JetField) -> JetField:
    """Row field ``psi^t C``."""
    if spinor.target is not Target.SPINOR:
        msg = f"Bar needs a spinor field, got {spinor.target}"
        raise GradingMismatchError(msg)
    c = build_gamma_rep().C
    entries = []
    for beta in range(4):
        total = Germ(order=spinor.order)
        for alpha in range(4):
            if not c[alpha][beta].is_zero():
                total = total + spinor.entries[alpha].scale(c[alpha][beta])
        entries.append(total)
    return JetField(Target.COSPINOR, entries)


def unbar_field(cospinor: JetField) -> JetField:
    """Inverse of :func:`majorana_bar_field`."""
    if cospinor.target is not Target.COSPINOR:
        msg = f"Unbar needs a cospinor field, got {cospinor.target}"
        raise GradingMismatchError(msg)
    c_inv = build_gamma_rep().C_inv
    entries = []
    for alpha in range(4):
        total = Germ(order=cospinor.order)
        for beta in range(4):
            if not c_inv[beta][alpha].is_zero():
                total = total + cospinor.entries[beta].scale(c_inv[beta][alpha])
        entries.append(total)
    return JetField(Target.SPINOR, entries)


def majorana_violation(field: JetField) -> Witness | None:
    """First component coefficient that is not fixed by the star operation.

    With the charge conjugation equal to ``gamma^0`` the Majorana constraint says each
    component is star-self-conjugate: real on field-generator degrees 0, 1 mod 4 and
    imaginary on 2, 3 mod 4.
    """
    for index, x, mask, coefficient in iter_terms(field):
        degree = (mask & THETA_MASK & ~EPSILON_MASK).bit_count()
        ok = coefficient.im == 0 if degree % 4 in (0, 1) else coefficient.re == 0
        if not ok:
            return Witness("majorana", f"{field.target}[{index}]", list(x), mask_generators(mask), str(coefficient))
    return None
