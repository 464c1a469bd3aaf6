"""Tests for exact scalars and the Grassmann algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sugra_bv_verifier.errors import NonInvertibleError
from sugra_bv_verifier.exact_scalars import (
    EPSILON_GENERATOR,
    I,
    ONE,
    GaussianRational,
    GrassmannElement,
    Parity,
    epsilon_linear_part,
    generators_mask,
    grassmann_inverse,
    mask_generators,
)

GENERATORS = 6

gaussian = st.builds(
    GaussianRational,
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
    st.fractions(min_value=-4, max_value=4, max_denominator=6),
)


def _elements(masks: st.SearchStrategy[int]) -> st.SearchStrategy[GrassmannElement]:
    return st.dictionaries(masks, gaussian, max_size=6).map(GrassmannElement)


elements = _elements(st.integers(min_value=0, max_value=(1 << GENERATORS) - 1))
even_elements = _elements(
    st.integers(min_value=0, max_value=(1 << GENERATORS) - 1).filter(lambda m: m.bit_count() % 2 == 0)
)
odd_elements = _elements(
    st.integers(min_value=0, max_value=(1 << GENERATORS) - 1).filter(lambda m: m.bit_count() % 2 == 1)
)
epsilon_free = _elements(st.integers(min_value=0, max_value=(1 << GENERATORS) - 1).map(lambda m: m & ~1))


def test_gaussian_arithmetic() -> None:
    """Test i squares to -1 and division is exact."""
    assert I * I == GaussianRational(-1)
    z = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert z * z.inverse() == ONE
    assert z / z == ONE
    assert (z + z.conjugate()).is_real()


def test_gaussian_zero_inverse_raises() -> None:
    """Test inverting zero raises NonInvertibleError."""
    with pytest.raises(NonInvertibleError):
        GaussianRational(0).inverse()


def test_gaussian_pair_format() -> None:
    """Test the re/im pair format keeps explicit denominators."""
    z = GaussianRational(Fraction(3), Fraction(-2, 7))
    assert z.to_pair() == "3/1 -2/7"
    assert GaussianRational.parse(z.to_pair()) == z


def test_gaussian_parse_rejects_single_value() -> None:
    """Test a lone rational is not a valid pair."""
    with pytest.raises(ValueError, match="rational pair"):
        GaussianRational.parse("1/2")


def test_monomial_ordering_sign() -> None:
    """Test swapping two generators flips the sign."""
    assert GrassmannElement.monomial([1, 0]) == -GrassmannElement.monomial([0, 1])
    assert GrassmannElement.monomial([2, 0, 1]) == GrassmannElement.monomial([0, 1, 2])


def test_monomial_repeated_generator_raises() -> None:
    """Test a repeated generator is reported rather than silently vanishing."""
    with pytest.raises(ValueError, match="repeated"):
        GrassmannElement.monomial([3, 3])


def test_mask_round_trip() -> None:
    """Test generator lists and bitmasks agree."""
    assert mask_generators(generators_mask([5, 1, 3])) == [1, 3, 5]
    assert mask_generators(0) == []


def test_parity() -> None:
    """Test parity of homogeneous and mixed elements."""
    assert GrassmannElement.scalar(2).parity is Parity.EVEN
    assert GrassmannElement.generator(1).parity is Parity.ODD
    assert (GrassmannElement.scalar(1) + GrassmannElement.generator(1)).parity is Parity.MIXED
    assert GrassmannElement().parity is Parity.EVEN


@settings(max_examples=50, deadline=None)
@given(elements, elements, elements)
def test_product_associative(x: GrassmannElement, y: GrassmannElement, z: GrassmannElement) -> None:
    """Test the product is associative."""
    assert (x * y) * z == x * (y * z)


@settings(max_examples=50, deadline=None)
@given(elements, elements, elements)
def test_product_distributive(x: GrassmannElement, y: GrassmannElement, z: GrassmannElement) -> None:
    """Test the product distributes over addition."""
    assert x * (y + z) == x * y + x * z


@settings(max_examples=50, deadline=None)
@given(odd_elements, odd_elements, even_elements)
def test_supercommutativity(a: GrassmannElement, b: GrassmannElement, e: GrassmannElement) -> None:
    """Test odd elements anticommute and even elements are central."""
    assert a * b == -(b * a)
    assert a * e == e * a
    assert a * a == GrassmannElement()


@settings(max_examples=50, deadline=None)
@given(elements, elements)
def test_star_reverses_products(x: GrassmannElement, y: GrassmannElement) -> None:
    """Test conjugation is an involutive anti-automorphism."""
    assert x.star().star() == x
    assert (x * y).star() == y.star() * x.star()


@settings(max_examples=50, deadline=None)
@given(even_elements, gaussian)
def test_inverse(x: GrassmannElement, body: GaussianRational) -> None:
    """Test the Neumann-series inverse of an even element with nonzero body."""
    if body.is_zero():
        body = ONE
    y = x.soul + GrassmannElement.scalar(body)
    assert y * grassmann_inverse(y) == GrassmannElement.scalar(1)


def test_inverse_rejects_nilpotent() -> None:
    """Test elements with zero body are not invertible."""
    with pytest.raises(NonInvertibleError):
        grassmann_inverse(GrassmannElement.monomial([1, 2]))


def test_inverse_rejects_odd() -> None:
    """Test odd elements are not invertible."""
    with pytest.raises(NonInvertibleError):
        grassmann_inverse(GrassmannElement.generator(1))


@settings(max_examples=50, deadline=None)
@given(epsilon_free, epsilon_free)
def test_epsilon_linear_part(a: GrassmannElement, b: GrassmannElement) -> None:
    """Test the shift coefficient is read off exactly."""
    eps = GrassmannElement.generator(EPSILON_GENERATOR)
    assert epsilon_linear_part(a + eps * b) == b
    assert epsilon_linear_part(a).is_zero()
