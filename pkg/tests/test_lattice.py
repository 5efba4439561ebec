"""Exact arithmetic on the triangular lattice and its scalar fields."""

import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from kochawave.lattice import (
    EisensteinInt,
    QOmega,
    SqrtThreeScalar,
    cross2,
    omega_pow,
)

coords = st.integers(min_value=-1000, max_value=1000)
eis = st.builds(EisensteinInt, coords, coords)
rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000)


@given(eis, eis, eis)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + EisensteinInt(0, 0) == x
    assert x * EisensteinInt(1, 0) == x
    assert x + (-x) == EisensteinInt(0, 0)


@given(eis, eis)
def test_norm_is_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


@given(eis)
def test_conjugation_involution_and_norm(x):
    assert x.conjugate().conjugate() == x
    assert x * x.conjugate() == EisensteinInt(x.norm(), 0)


def test_omega_powers():
    w = EisensteinInt(0, 1)
    assert w * w == EisensteinInt(-1, 1)  # omega**2 = omega - 1
    assert omega_pow(0) == EisensteinInt(1, 0)
    assert omega_pow(1) == w
    assert omega_pow(3) == EisensteinInt(-1, 0)
    assert omega_pow(6) == EisensteinInt(1, 0)
    assert omega_pow(-1) == omega_pow(5)
    assert omega_pow(-2) == EisensteinInt(0, -1)  # omega**-2 = omega**4 = -omega
    for k in range(-12, 13):
        assert omega_pow(k) == omega_pow(k % 6)
        assert omega_pow(k).norm() == 1


@given(eis)
def test_float_embedding_matches_exact_parts(x):
    z = x.to_complex()
    assert math.isclose(z.real, x.a + x.b / 2, rel_tol=0, abs_tol=1e-9)
    assert math.isclose(z.imag, x.b * math.sqrt(3) / 2, rel_tol=0, abs_tol=1e-9)


@settings(max_examples=200)
@given(eis, eis)
def test_float_embedding_is_a_homomorphism(x, y):
    scale = max(1.0, abs((x * y).to_complex()))
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-9 * scale
    assert abs((x + y).to_complex() - (x.to_complex() + y.to_complex())) < 1e-9


def test_cross2_orientation():
    assert cross2(EisensteinInt(1, 0), EisensteinInt(0, 1)) > 0
    assert cross2(EisensteinInt(0, 1), EisensteinInt(1, 0)) < 0
    assert cross2(EisensteinInt(2, 1), EisensteinInt(4, 2)) == 0


def test_divide_int_requires_exactness():
    assert EisensteinInt(3, 6).divide_int(3) == EisensteinInt(1, 2)
    try:
        EisensteinInt(1, 0).divide_int(3)
    except ValueError:
        pass
    else:
        raise AssertionError("inexact division should raise")


@given(rationals, rationals, rationals, rationals)
def test_qomega_field_ops(ax, ay, bx, by):
    u = QOmega(ax, ay)
    v = QOmega(bx, by)
    assert u + v == v + u
    assert u * v == v * u
    if not (v.x == 0 and v.y == 0):
        assert (u / v) * v == u


def test_qomega_norm_and_inverse():
    w = QOmega(0, 1)
    assert w * w == QOmega(-1, 1)
    # (1+omega)(1-omega**2) = 3: the subdivision similarity has norm 3
    assert QOmega(1, 1) * (QOmega(1) - w * w) == QOmega(3)
    assert QOmega(1, 1).norm() == 3
    assert QOmega(1, 1).inverse() == QOmega(Fraction(2, 3), Fraction(-1, 3))


def test_sqrt3_scalar_exact_comparisons():
    s = SqrtThreeScalar(0, 1)  # sqrt(3)
    assert s * s == SqrtThreeScalar(3)
    assert SqrtThreeScalar(Fraction(17, 10)) < s < SqrtThreeScalar(Fraction(18, 10))
    assert (1 / s) == SqrtThreeScalar(0, Fraction(1, 3))
    assert s ** 3 == SqrtThreeScalar(0, 3)
    assert abs(SqrtThreeScalar(-2)) == SqrtThreeScalar(2)
    assert float(s) == math.sqrt(3)


@given(rationals, rationals)
def test_sqrt3_scalar_float_agrees(p, q):
    x = SqrtThreeScalar(p, q)
    want = float(p) + float(q) * math.sqrt(3)
    assert math.isclose(float(x), want, rel_tol=1e-12, abs_tol=1e-12)
