from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kproj.scalar import FieldMismatchError, Scalar, cyclotomic_polynomial, euler_phi
from conftest import scalars

x = sympy.symbols("x")


def as_sympy(s: Scalar):
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(s.coords))


def from_sympy(expr, order: int) -> Scalar:
    phi = sympy.cyclotomic_poly(order, x)
    r = sympy.Poly(sympy.rem(sympy.expand(expr), phi, x), x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(r.all_coeffs())]
    return Scalar(coeffs + [0] * (euler_phi(order) - len(coeffs)), order)


def test_rational_addition():
    assert Scalar(Fraction(1, 2)) + Scalar(Fraction(1, 3)) == Scalar(Fraction(5, 6))


def test_cube_root_of_unity():
    z = Scalar.zeta(3)
    assert z * z * z == 1
    assert z + z ** 2 == -1


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15])
def test_cyclotomic_polynomial_matches_sympy(order):
    want = sympy.Poly(sympy.cyclotomic_poly(order, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(order)) == [int(c) for c in want]


@pytest.mark.parametrize("order", [3, 4, 5, 8, 12])
def test_zeta_has_exact_order(order):
    z = Scalar.zeta(order)
    powers = [z ** e for e in range(1, order + 1)]
    assert powers[-1] == 1
    assert all(p != 1 for p in powers[:-1])


@pytest.mark.parametrize("order", [3, 5, 8, 12])
@given(data=st.data())
def test_multiplication_matches_sympy_reduction(order, data):
    a = data.draw(scalars(order))
    b = data.draw(scalars(order))
    assert a * b == from_sympy(as_sympy(a) * as_sympy(b), order)


@pytest.mark.parametrize("order", [1, 3, 4, 7])
@given(data=st.data())
def test_field_axioms(order, data):
    a, b, c = (data.draw(scalars(order)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    if a:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


def test_division_by_zero_is_explicit():
    with pytest.raises(ZeroDivisionError):
        Scalar(1) / Scalar(0)
    with pytest.raises(ZeroDivisionError):
        Scalar.zeta(5) / Scalar(0, 5)


def test_mixing_fields_needs_divisibility():
    with pytest.raises(FieldMismatchError):
        Scalar.zeta(3) + Scalar.zeta(4)
    # zeta_2 = -1 embeds in Q(zeta_4)
    i = Scalar.zeta(4)
    assert (Scalar.zeta(2) + i) * (Scalar.zeta(2) - i) == 2
    assert Scalar.zeta(4).embed(8) == Scalar.zeta(8) ** 2


def test_canonical_form_is_reduced():
    # x^2 reduces to -1 - x modulo x^2 + x + 1
    assert Scalar([0, 0, 1], 3).coords == (-1, -1)
    assert Scalar([Fraction(2, 4)]).coords == (Fraction(1, 2),)


def test_rational_mixes_with_int():
    assert Scalar(3) * 2 == 6
    assert 1 - Scalar(Fraction(1, 3)) == Scalar(Fraction(2, 3))
