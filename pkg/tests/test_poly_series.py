from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kproj.errors import HypothesisError
from kproj.poly import Poly, PolyMatrix
from kproj.scalar import Scalar
from kproj.series import TruncatedSeries, matrix_apply, series_mul, series_substitute_power
from conftest import small_fractions

x = sympy.symbols("x")
polys = st.lists(small_fractions, max_size=7).map(Poly)
series = st.lists(small_fractions, min_size=1, max_size=12).map(TruncatedSeries)


def coeffs(s) -> list:
    return [c.to_fraction() for c in s.coeffs]


def to_sympy(p: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * x ** i
               for i, c in enumerate(coeffs(p)))


# --- polynomials

def test_zero_polynomial_is_empty():
    assert Poly([0, 0]).coeffs == ()
    assert Poly().degree == -1


@given(polys, polys)
def test_degree_is_additive(p, q):
    if p and q:
        assert (p * q).degree == p.degree + q.degree
    else:
        assert not p * q


@given(polys, polys)
def test_divmod_matches_sympy(p, q):
    if not q:
        return
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree
    squo, srem = sympy.div(to_sympy(p), to_sympy(q), x)
    assert sympy.expand(to_sympy(quo) - squo) == 0
    assert sympy.expand(to_sympy(rem) - srem) == 0


def test_polynomial_helpers():
    z = Poly.z()
    p = (1 + z) ** 3
    assert coeffs(p) == [1, 3, 3, 1]
    assert coeffs(p.derivative()) == [3, 6, 3]
    assert coeffs(p.substitute_power(2)) == [1, 0, 3, 0, 3, 0, 1]
    assert coeffs(p.segment(1, 3)) == [0, 3, 3]
    assert p(Fraction(1)) == 8


def test_poly_matrix_degree_bound():
    z = Poly.z()
    with pytest.raises(ValueError):
        PolyMatrix([[z ** 2]], degree_bound=1)
    m = PolyMatrix([[1 + z, 0], [z, 1]], degree_bound=1)
    assert m.coefficient(1) == ((1, 0), (1, 0))


# --- series

def test_geometric_square():
    ones = TruncatedSeries([1, 1, 1, 1])
    assert coeffs(series_mul(ones, ones)) == [1, 2, 3, 4]


def test_unit_and_small_products():
    a = TruncatedSeries([3, 1, 4, 1, 5])
    assert series_mul(a, TruncatedSeries([1], 5)) == a
    assert coeffs(series_mul(TruncatedSeries([1, 1]), TruncatedSeries([1, -1]))) == [1, 0]


def test_truncation_is_min_of_inputs():
    a = TruncatedSeries([1] * 7)
    b = TruncatedSeries([1] * 4)
    assert (a * b).trunc_order == 4
    assert (a + b).trunc_order == 4
    assert (a - b).trunc_order == 4


@given(series, series, series)
def test_mul_is_associative_and_commutative(a, b, c):
    n = min(len(a), len(b), len(c))
    a, b, c = a.truncate(n), b.truncate(n), c.truncate(n)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(series, series)
def test_mul_matches_sympy(a, b):
    n = min(len(a), len(b))
    prod = sympy.expand(to_sympy(a.to_poly()) * to_sympy(b.to_poly()))
    want = [sympy.Poly(prod, x).coeff_monomial(x ** i) if prod != 0 else 0 for i in range(n)]
    assert coeffs(a * b) == [Fraction(int(sympy.Rational(w).p), int(sympy.Rational(w).q)) for w in want]


def test_substitute_power_examples():
    assert coeffs(series_substitute_power(TruncatedSeries([1, 2, 3], 5), 2)) == [1, 0, 2, 0, 3]
    a = TruncatedSeries([1, 2, 3])
    assert series_substitute_power(a, 1) == a
    assert coeffs(series_substitute_power(TruncatedSeries([0, 1], 4), 3)) == [0, 0, 0, 1]


@given(series, st.integers(1, 4), st.integers(1, 4))
def test_substitute_power_composes(a, e1, e2):
    lhs = a.substitute_power(e1 * e2)
    rhs = a.substitute_power(e2).substitute_power(e1)
    assert lhs == rhs
    assert lhs.trunc_order == a.trunc_order


def test_valuation_report():
    s = TruncatedSeries([0, 0, 5, 1])
    assert s.valuation() == 2 and s.ord_report() == "2"
    z = TruncatedSeries.zero(6)
    assert z.valuation() is None and z.ord_report() == ">= 6"


def test_from_rational_geometric_and_pole():
    one, z = Poly([1]), Poly.z()
    assert coeffs(TruncatedSeries.from_rational(one, one - z, 5)) == [1] * 5
    with pytest.raises(HypothesisError):
        TruncatedSeries.from_rational(one, z, 5)
    # common factors of z cancel
    assert coeffs(TruncatedSeries.from_rational(z, z - z * z, 3)) == [1, 1, 1]


@given(series, series)
def test_divide_inverts_mul(a, b):
    if not b[0]:
        return
    n = min(len(a), len(b))
    a, b = a.truncate(n), b.truncate(n)
    assert (a * b).divide(b) == a


# --- matrix_apply

def test_matrix_apply_identity_and_shift():
    v = [TruncatedSeries([1, 2, 3]), TruncatedSeries([4, 5, 6])]
    assert matrix_apply(PolyMatrix.identity(2), v) == v
    z = Poly.z()
    assert coeffs(matrix_apply(PolyMatrix([[z]]), [TruncatedSeries([1, 1, 1])])[0]) == [0, 1, 1]


def test_matrix_apply_quadratic_product_matrix():
    # level-0 matrix of prod (1 + z^(2^y) + z^(2^(y+1))) in the state (f_y, z f_y)
    z = Poly.z()
    m = PolyMatrix([[1 + z, 1], [z, 1 + z]], degree_bound=1)
    out = matrix_apply(m, [TruncatedSeries([1, 0, 0, 0]), TruncatedSeries.zero(4)])
    assert [coeffs(s) for s in out] == [[1, 1, 0, 0], [0, 1, 0, 0]]


def test_matrix_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        matrix_apply(PolyMatrix.identity(2), [TruncatedSeries([1])])


def test_cyclotomic_series_coefficients():
    z3 = Scalar.zeta(3)
    a = TruncatedSeries([1, z3])
    b = TruncatedSeries([1, z3 ** 2])
    assert (a * b).coeffs == (Scalar(1, 3), Scalar(-1, 3))
