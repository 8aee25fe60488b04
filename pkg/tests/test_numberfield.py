from __future__ import annotations

import math

import numpy as np
import pytest
from fractions import Fraction
from hypothesis import given, settings
from hypothesis import strategies as st

from nfbounds.errors import EmptyInput, NotMonic, NotSquarefree, NotTotallyReal, ValidationError
from nfbounds.numberfield import (
    Polynomial,
    count_real_roots,
    min_product_distance,
    parse_field,
    real_roots,
)

PHI = (1 + math.sqrt(5)) / 2


def test_polynomial_validation():
    with pytest.raises(NotMonic):
        Polynomial((1, 1, 2))
    with pytest.raises(NotSquarefree):
        Polynomial((1, 2, 1))  # (x+1)^2
    with pytest.raises(ValidationError):
        Polynomial((0, 1, 1))  # zero constant coefficient
    with pytest.raises(ValidationError):
        Polynomial((1, 1))  # degree 1


def test_parse_field_golden(q5):
    assert q5.degree == 2
    assert q5.signature == (2, 0)
    assert np.allclose(sorted(q5.embeddings), [1 - PHI, PHI], atol=1e-12)
    assert q5.poly_discriminant == 5


def test_parse_field_quartic_sign_change_oracle(quartic):
    # sign changes of f at consecutive integers isolate all four roots
    f = quartic.min_poly
    values = [f(x) for x in (-2, -1, 0, 1, 2, 3)]
    crossings = sum(1 for u, v in zip(values, values[1:]) if u * v < 0)
    assert crossings == 4
    assert len(quartic.embeddings) == 4
    for lo, hi, root in zip((-2, -1, 0, 2), (-1, 0, 1, 3), quartic.embeddings):
        assert lo < root < hi


def test_parse_field_rejects_complex_roots():
    with pytest.raises(NotTotallyReal):
        parse_field(Polynomial((1, 0, 1)))  # x^2 + 1
    with pytest.raises(NotTotallyReal):
        parse_field(Polynomial((-2, 0, 0, 1)))  # x^3 - 2 has one real root


def test_real_roots_golden():
    roots = [float(r) for r in real_roots(Polynomial((-1, -1, 1)), 1e-12)]
    assert roots == pytest.approx([1 - PHI, PHI], abs=1e-12)


def test_real_roots_octic():
    roots = [float(r) for r in real_roots((2, 0, -16, 0, 20, 0, -8, 0, 1))]
    assert len(roots) == 8
    assert roots == pytest.approx([-r for r in roots[::-1]], abs=1e-12)  # symmetric
    assert roots[-1] == pytest.approx(2 * math.cos(math.pi / 16), abs=1e-12)


def test_real_roots_cubic():
    roots = real_roots((-2, 0, 0, 1))
    assert len(roots) == 1
    assert float(roots[0]) == pytest.approx(2 ** (1 / 3), abs=1e-12)


def test_real_root_count():
    assert count_real_roots((1, 0, 1)) == 0
    assert count_real_roots((-1, -1, 1)) == 2
    assert count_real_roots((2, 0, -16, 0, 20, 0, -8, 0, 1)) == 8


def test_exact_integer_roots_handled():
    # x^2 - x - 2 = (x-2)(x+1) is squarefree with integer roots
    roots = [float(r) for r in real_roots((-2, -1, 1))]
    assert roots == pytest.approx([-1.0, 2.0], abs=0)


def test_embed_examples(q5):
    theta = q5.theta()
    assert np.allclose(sorted(theta.embed()), [1 - PHI, PHI], atol=1e-12)
    one = q5.one()
    assert np.allclose(one.embed(), [1, 1])
    sqrt5 = q5.element([-1, 2])  # 2*theta - 1
    assert np.allclose(sorted(sqrt5.embed()), [-math.sqrt(5), math.sqrt(5)], atol=1e-12)


def test_norm_examples(q5):
    assert q5.theta().norm() == -1
    assert q5.element([2, 1]).norm() == 5
    # both values to be confirmed by the resultant: a=1,b=1 and a=-1,b=2
    assert q5.element([1, 1]).norm() == 1
    assert q5.element([-1, 2]).norm() == -5
    assert q5.zero().norm() == 0


def test_height_examples(q5):
    assert q5.one().height() == pytest.approx(1.0, abs=1e-12)
    assert q5.theta().height() == pytest.approx(PHI, abs=1e-12)
    assert (q5.theta() ** 4).height() == pytest.approx(PHI ** 4, abs=1e-12)
    assert q5.zero().height() == 0.0


def test_min_product_distance(q5):
    one = q5.one()
    theta = q5.theta()
    assert min_product_distance([one, q5.element([2, 1])]) == 1
    assert min_product_distance([theta, theta ** 2]) == 1  # units only
    assert min_product_distance([q5.element([2, 1]), q5.element([3, 0])]) == 5
    with pytest.raises(EmptyInput):
        min_product_distance([])
    with pytest.raises(ValidationError):
        min_product_distance([q5.zero()])


coords2 = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@given(coords2, coords2)
@settings(max_examples=80, deadline=None)
def test_norm_multiplicative_quadratic(a, b):
    field = parse_field(Polynomial((-1, -1, 1)))
    x, y = field.element(a), field.element(b)
    assert (x * y).norm() == x.norm() * y.norm()


coords4 = st.tuples(*[st.integers(-9, 9)] * 4)


@given(coords4, coords4)
@settings(max_examples=40, deadline=None)
def test_norm_multiplicative_quartic(a, b):
    field = parse_field(Polynomial((1, 1, -3, -1, 1)))
    x, y = field.element(a), field.element(b)
    assert (x * y).norm() == x.norm() * y.norm()


@given(coords2)
@settings(max_examples=60, deadline=None)
def test_norm_height_inequalities(a):
    field = parse_field(Polynomial((-1, -1, 1)))
    x = field.element(a)
    if x.is_zero():
        return
    h = x.height()
    n = abs(x.norm())
    assert n <= h ** field.degree * (1 + 1e-9)
    assert h >= n ** (1 / field.degree) * (1 - 1e-12)
    assert h >= 1 - 1e-12


@given(coords2, coords2)
@settings(max_examples=60, deadline=None)
def test_embed_additive(a, b):
    field = parse_field(Polynomial((-1, -1, 1)))
    x, y = field.element(a), field.element(b)
    lhs = (x + y).embed()
    rhs = x.embed() + y.embed()
    assert np.allclose(lhs, rhs, atol=1e-9)


@given(st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000)))
@settings(max_examples=60, deadline=None)
def test_embed_product_matches_norm(a):
    field = parse_field(Polynomial((-1, -1, 1)))
    x = field.element(a)
    if x.is_zero():
        return
    prod = float(np.prod(x.embed()))
    assert prod == pytest.approx(x.norm(), rel=1e-9)


def test_division_and_inverse(q5):
    theta = q5.theta()
    x = q5.element([2, 1])
    assert q5.divide_exact(x * theta, theta) == x
    assert q5.divide_exact(x, q5.element([3, 0])) is None
    inv = q5.inverse_coords_rational((2, 1))
    assert inv == [Fraction(3, 5), Fraction(-1, 5)]  # (2+theta)(3-theta) = 5


def test_mixed_field_arithmetic_rejected(q5, quartic):
    with pytest.raises(ValidationError):
        q5.theta() + quartic.theta()
    with pytest.raises(ValidationError):
        q5.element([1, 2, 3])
