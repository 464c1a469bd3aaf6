"""Exact coefficient arithmetic.

Gaussian rationals over :class:`fractions.Fraction` and a finite Grassmann algebra whose
monomials are stored as bitmasks of generator indices. Generator 0 is reserved for the odd
derivation parameter used by the nilpotency evaluator.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from enum import StrEnum
from fractions import Fraction
from functools import lru_cache
from random import Random

from sugra_bv_verifier.errors import NonInvertibleError

logger = logging.getLogger(__name__)

EPSILON_GENERATOR = 0
EPSILON_MASK = 1 << EPSILON_GENERATOR

# Generator layout shared by every graded object: odd field generators occupy the low
# bits, coordinate differentials dx^mu and the frame basis v_a sit above them so that
# canonical monomials read theta..., dx..., v...
MAX_ODD_GENERATORS = 32
DX_BIT0 = 32
V_BIT0 = 36
THETA_MASK = (1 << MAX_ODD_GENERATORS) - 1
DX_MASK = 0b1111 << DX_BIT0
V_MASK = 0b1111 << V_BIT0

type Number = int | Fraction | GaussianRational


class GaussianRational:
    """An element ``re + i*im`` of Q(i), kept exact."""

    __slots__ = ("im", "re")

    re: Fraction
    im: Fraction

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        """Initialise from real and imaginary parts.

        Args:
            re: Real part.
            im: Imaginary part.
        """
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def coerce(cls, value: Number) -> GaussianRational:
        """Convert an int, Fraction or GaussianRational into a GaussianRational."""
        if isinstance(value, GaussianRational):
            return value
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        """Parse the ``"re im"`` pair format written by :meth:`to_pair`.

        Args:
            text: Two whitespace-separated rationals in ``p/q`` form.

        Returns:
            The parsed number.

        Raises:
            ValueError: If the text does not hold exactly two rationals.
        """
        parts = text.split()
        if len(parts) != 2:
            msg = f"Expected 're im' rational pair, got: {text!r}"
            raise ValueError(msg)
        return cls(Fraction(parts[0]), Fraction(parts[1]))

    def to_pair(self) -> str:
        """Render as ``"p/q p/q"`` with explicit denominators."""
        return f"{_fraction_text(self.re)} {_fraction_text(self.im)}"

    def is_zero(self) -> bool:
        """Return True when both parts vanish."""
        return not self.re and not self.im

    def is_real(self) -> bool:
        """Return True when the imaginary part vanishes."""
        return not self.im

    def conjugate(self) -> GaussianRational:
        """Return the complex conjugate."""
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> GaussianRational:
        """Return the multiplicative inverse.

        Raises:
            NonInvertibleError: If the number is zero.
        """
        if self.is_zero():
            msg = "Cannot invert the Gaussian rational 0"
            raise NonInvertibleError(msg)
        if not self.im:
            return GaussianRational(1 / self.re)
        norm = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / norm, -self.im / norm)

    def __add__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> GaussianRational:
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Number) -> GaussianRational:
        return GaussianRational.coerce(other) - self

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: Number) -> GaussianRational:
        if not isinstance(other, GaussianRational):
            return GaussianRational(self.re * other, self.im * other)
        if not self.im and not other.im:
            return GaussianRational(self.re * other.re)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> GaussianRational:
        return self * GaussianRational.coerce(other).inverse()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int | Fraction):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class Parity(StrEnum):
    """Grassmann parity of an element."""

    EVEN = "even"
    ODD = "odd"
    MIXED = "mixed"


@lru_cache(maxsize=1 << 20)
def reorder_sign(left: int, right: int) -> int:
    """Sign of sorting the concatenated monomials ``left * right`` into ascending order.

    Args:
        left: Bitmask of the left monomial.
        right: Bitmask of the right monomial; must be disjoint from ``left``.

    Returns:
        +1 or -1.
    """
    swaps = 0
    rest = right
    while rest:
        low = rest & -rest
        swaps += (left >> low.bit_length()).bit_count()
        rest ^= low
    return -1 if swaps & 1 else 1


def mask_generators(mask: int) -> list[int]:
    """Return the ascending list of generator indices present in ``mask``."""
    out = []
    index = 0
    while mask:
        if mask & 1:
            out.append(index)
        mask >>= 1
        index += 1
    return out


def generators_mask(generators: Iterable[int]) -> int:
    """Build a bitmask from generator indices, ignoring ordering signs."""
    mask = 0
    for g in generators:
        mask |= 1 << g
    return mask


def star_sign(mask: int) -> int:
    """Sign picked up by reversing the order of the generators of a monomial."""
    degree = mask.bit_count()
    return -1 if (degree * (degree - 1) // 2) & 1 else 1


class GrassmannElement:
    """Sparse element of a finite Grassmann algebra with Gaussian-rational coefficients.

    Terms are keyed by the bitmask of their generators in ascending order; zero
    coefficients are never stored.
    """

    __slots__ = ("terms",)

    terms: dict[int, GaussianRational]

    def __init__(self, terms: Mapping[int, Number] | None = None) -> None:
        """Initialise from a mask-to-coefficient mapping.

        Args:
            terms: Mapping of monomial bitmask to coefficient. Zeros are pruned.
        """
        self.terms = {}
        if terms:
            for mask, coefficient in terms.items():
                value = GaussianRational.coerce(coefficient)
                if not value.is_zero():
                    self.terms[mask] = value

    @classmethod
    def scalar(cls, value: Number) -> GrassmannElement:
        """Return the constant element ``value``."""
        return cls({0: value})

    @classmethod
    def generator(cls, index: int, coefficient: Number = 1) -> GrassmannElement:
        """Return ``coefficient * theta_index``."""
        return cls({1 << index: coefficient})

    @classmethod
    def monomial(cls, generators: Iterable[int], coefficient: Number = 1) -> GrassmannElement:
        """Return ``coefficient * theta_g1 * theta_g2 * ...`` in the given order.

        Raises:
            ValueError: If a generator repeats (the monomial would vanish silently otherwise).
        """
        result = cls.scalar(coefficient)
        for g in generators:
            result = grassmann_mul(result, cls.generator(g))
            if result.is_zero():
                msg = f"Generator {g} repeated in monomial"
                raise ValueError(msg)
        return result

    def is_zero(self) -> bool:
        """Return True when no terms are stored."""
        return not self.terms

    @property
    def body(self) -> GaussianRational:
        """Coefficient of the empty monomial."""
        return self.terms.get(0, ZERO)

    @property
    def soul(self) -> GrassmannElement:
        """Nilpotent remainder ``x - body(x)``."""
        return GrassmannElement({m: c for m, c in self.terms.items() if m})

    @property
    def parity(self) -> Parity:
        """Parity of the element; zero counts as even."""
        parities = {mask.bit_count() & 1 for mask in self.terms}
        if len(parities) > 1:
            return Parity.MIXED
        return Parity.ODD if parities == {1} else Parity.EVEN

    def star(self) -> GrassmannElement:
        """Superalgebra conjugation: conjugate coefficients and reverse products."""
        return GrassmannElement({m: c.conjugate() * star_sign(m) for m, c in self.terms.items()})

    def scale(self, factor: Number) -> GrassmannElement:
        """Multiply every coefficient by a number."""
        value = GaussianRational.coerce(factor)
        if value.is_zero():
            return GrassmannElement()
        return GrassmannElement({m: c * value for m, c in self.terms.items()})

    def items(self) -> Iterator[tuple[int, GaussianRational]]:
        """Iterate over ``(mask, coefficient)`` pairs in ascending mask order."""
        return iter(sorted(self.terms.items()))

    def __add__(self, other: GrassmannElement) -> GrassmannElement:
        out = dict(self.terms)
        for mask, coefficient in other.terms.items():
            total = out.get(mask, ZERO) + coefficient
            if total.is_zero():
                out.pop(mask, None)
            else:
                out[mask] = total
        result = GrassmannElement()
        result.terms = out
        return result

    def __neg__(self) -> GrassmannElement:
        return self.scale(-1)

    def __sub__(self, other: GrassmannElement) -> GrassmannElement:
        return self + (-other)

    def __mul__(self, other: GrassmannElement | Number) -> GrassmannElement:
        if isinstance(other, GrassmannElement):
            return grassmann_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Number) -> GrassmannElement:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "GrassmannElement(0)"
        parts = [f"({c})*{mask_generators(m)}" for m, c in self.items()]
        return "GrassmannElement(" + " + ".join(parts) + ")"


def grassmann_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    """Supercommutative product of two Grassmann elements.

    Args:
        x: Left factor.
        y: Right factor.

    Returns:
        The product with monomials re-sorted and reordering signs applied.
    """
    out: dict[int, GaussianRational] = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            if mx & my:
                continue
            value = cx * cy
            if reorder_sign(mx, my) < 0:
                value = -value
            key = mx | my
            if key in out:
                total = out[key] + value
                if total.is_zero():
                    del out[key]
                else:
                    out[key] = total
            else:
                out[key] = value
    result = GrassmannElement()
    result.terms = out
    return result


def grassmann_inverse(x: GrassmannElement) -> GrassmannElement:
    """Inverse of an even element with nonzero body via the finite Neumann series.

    Args:
        x: Even element with invertible body.

    Returns:
        The unique ``y`` with ``x * y == 1``.

    Raises:
        NonInvertibleError: If the body vanishes or ``x`` is not even.
    """
    if x.parity is not Parity.EVEN:
        msg = f"Only even elements can be inverted, got parity {x.parity}"
        raise NonInvertibleError(msg)
    body = x.body
    if body.is_zero():
        msg = "Cannot invert a Grassmann element with zero body"
        raise NonInvertibleError(msg)
    inv_body = body.inverse()
    step = x.soul.scale(-inv_body)
    term = GrassmannElement.scalar(1)
    total = GrassmannElement.scalar(1)
    while True:
        term = grassmann_mul(term, step)
        if term.is_zero():
            break
        total = total + term
    return total.scale(inv_body)


def random_rational(rng: Random, bound: int = 4, denominators: tuple[int, ...] = (1, 2, 3, 4)) -> Fraction:
    """Draw a nonzero rational ``p/q`` with ``0 < |p| <= bound`` from a seeded generator."""
    numerator = rng.randint(1, bound) * rng.choice((-1, 1))
    return Fraction(numerator, rng.choice(denominators))


def epsilon_linear_part(x: GrassmannElement) -> GrassmannElement:
    """Coefficient of the reserved generator after moving it to the front.

    Generator 0 is the lowest bit, so canonical monomials already carry it first.

    Args:
        x: Any element.

    Returns:
        The epsilon-free element ``y`` with ``x = x|_{eps=0} + eps * y``.
    """
    return GrassmannElement({m ^ EPSILON_MASK: c for m, c in x.terms.items() if m & EPSILON_MASK})
