from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy

from kproj.builtins import load_builtin
from kproj.errors import HypothesisError, SpecError, TruncationError
from kproj.generators import InfiniteProduct, RecursiveWord, thue_morse_spec
from kproj.levels import LevelTable
from kproj.pade import (DNParams, PadePair, block_pair, certified_order, dn_check,
                        measure_witness_check, pade_solve, quadratic_key_inequality,
                        quadratic_pair)
from kproj.poly import Poly
from kproj.scalar import Scalar
from kproj.sequences import gen_series
from kproj.series import TruncatedSeries


def fr(x: Scalar) -> Fraction:
    return x.to_fraction()


def geometric(n: int) -> TruncatedSeries:
    return TruncatedSeries([1] * n, n)


def thue_morse(n: int) -> TruncatedSeries:
    return gen_series(RecursiveWord(thue_morse_spec()), n)


def ternary():
    return load_builtin("ternary-product").sequence


def quadratic_family():
    return load_builtin("deg2-dn-family").sequence


# --- pade_solve

def test_geometric_series():
    pair = pade_solve(geometric(64), 1, 0, 64)
    assert pair.Q == Poly([1, -1]) and pair.P == Poly([1])
    assert pair.order == 64 and pair.recheck(geometric(64))


def test_thue_morse_small_degrees_have_no_pair():
    f = thue_morse(8)
    assert pade_solve(f, 3, 3, 8) is None


def test_thue_morse_nearby_solutions():
    pair = pade_solve(thue_morse(8), 4, 3, 8)
    assert pair.Q == Poly([1, 0, 0, 0, 1])
    assert pair.P == Poly([1, -1, -1, 1])
    low = pade_solve(thue_morse(7), 3, 3, 7)
    assert low.Q == Poly([0, 1, 1]) and low.P == Poly([0, 1, 0, -2])
    assert low.recheck(thue_morse(7))


def test_insufficient_truncation():
    with pytest.raises(TruncationError):
        pade_solve(geometric(5), 1, 1, 6)


def test_generic_series_overdetermined():
    rng = random.Random(3)
    for _ in range(5):
        f = TruncatedSeries([Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(12)], 12)
        assert pade_solve(f, 2, 2, 9) is None


def _sympy_solutions(f: TruncatedSeries, dq: int, dp: int, order: int):
    rows = []
    for m in range(order):
        row = [sympy.Rational(str(fr(f[m - i]))) if m >= i else 0 for i in range(dq + 1)]
        row += [-1 if m == i else 0 for i in range(dp + 1)]
        rows.append(row)
    basis = sympy.Matrix(rows).nullspace()
    return [v for v in basis], any(any(v[:dq + 1]) for v in basis)


@pytest.mark.parametrize("seed", range(12))
def test_solver_against_sympy_nullspace(seed):
    rng = random.Random(seed)
    dq, dp = rng.randint(0, 4), rng.randint(0, 4)
    order = rng.randint(1, 12)
    # mix of structured and random inputs so both outcomes occur
    if seed % 3 == 0:
        f = TruncatedSeries.from_rational(Poly([1, rng.randint(-2, 2)]),
                                          Poly([1, rng.randint(-2, 2), rng.randint(-2, 2)]), 12)
    else:
        f = TruncatedSeries([rng.randint(-3, 3) for _ in range(12)], 12)
    pair = pade_solve(f, dq, dp, order)
    basis, exists = _sympy_solutions(f, dq, dp, order)
    assert (pair is not None) == exists
    if pair is None:
        return
    assert pair.order >= order and pair.recheck(f)
    assert pair.Q.degree <= dq and pair.P.degree <= dp
    # the returned vector lies in sympy's solution space
    vec = [sympy.Rational(str(fr(c))) for c in pair.Q.coeffs] + [0] * (dq + 1 - len(pair.Q.coeffs))
    vec += [sympy.Rational(str(fr(c))) for c in pair.P.coeffs] + [0] * (dp + 1 - len(pair.P.coeffs))
    span = sympy.Matrix.hstack(*basis)
    assert span.rank() == sympy.Matrix.hstack(span, sympy.Matrix(vec)).rank()
    nonzero = [c for c in pair.Q.coeffs if c]
    assert pair.Q[0] == 1 or (not pair.Q[0] and nonzero[0] == 1)


def test_pair_invariants():
    with pytest.raises(SpecError):
        PadePair(0, Poly([1]), Poly([]), 0, 4)
    with pytest.raises(SpecError):
        PadePair(0, Poly([1]), Poly([1]), 5, 4)


# --- growth parameters

def test_params_validation():
    DNParams(Fraction(1), Fraction(2), 1, 2, (0, 1, 2))
    with pytest.raises(SpecError):
        DNParams(Fraction(2), Fraction(1), 1, 2)
    with pytest.raises(SpecError):
        DNParams(Fraction(1), Fraction(2), 0, 2)
    with pytest.raises(SpecError):
        DNParams(Fraction(1), Fraction(2), 1, 2, (0, 2))
    p = DNParams(Fraction(1), Fraction(2), 2, 2, (0, 2), m_slope=1)
    assert [p.m(i) for i in range(4)] == [0, 2, 3, 4]


# --- constructions

def test_block_pairs_exact_orders_and_conditions():
    prod = ternary()
    pairs = [block_pair(prod, y, 1, 2) for y in range(6)]
    assert [p.order for p in pairs] == [3 * 3 ** y for y in range(6)]
    f = gen_series(prod, pairs[-1].truncation)
    assert all(p.recheck(f) for p in pairs)
    report = dn_check(f, pairs, DNParams(Fraction(2), Fraction(3), 1, 3, tuple(range(6))))
    assert report["ok"] and report["range"] == [0, 5] and report["range_limited"]
    for a, b in zip(pairs, pairs[1:]):
        assert a.P * b.Q - b.P * a.Q


def test_block_pair_controls():
    zero = InfiniteProduct(3, 2, LevelTable([(1, 2), (0, 2)], 1))
    with pytest.raises(HypothesisError, match="a_\\(1,1\\)"):
        block_pair(zero, 2, 1, 2)
    flat = InfiniteProduct(3, 2, LevelTable.constant((1, 1)))
    with pytest.raises(HypothesisError, match="ratio"):
        block_pair(flat, 2, 1, 2)
    with pytest.raises(SpecError):
        block_pair(ternary(), 2, 2, 1)
    with pytest.raises(SpecError):
        block_pair(quadratic_family(), 2, 1, 2)


def test_dn_check_negative_controls():
    f = geometric(64)
    pairs = [PadePair(n, Poly([1]), Poly([1, -1]), 64, 64) for n in range(4)]
    report = dn_check(f, pairs, DNParams(Fraction(1), Fraction(2), 1, 2, (0, 1, 2, 3)))
    assert not report["ok"]
    assert [r["cross_nonzero"] for r in report["rows"]] == [False, False, False, None]

    prod = ternary()
    good = [block_pair(prod, y, 1, 2) for y in range(4)]
    g = gen_series(prod, good[-1].truncation)
    tight = dn_check(g, good, DNParams(Fraction(1, 10), Fraction(3), 1, 3, (0, 1, 2, 3)))
    assert not tight["ok"]
    assert all(r["degree_ok"] is False for r in tight["rows"])


def test_quadratic_pairs_exact_orders():
    prod = quadratic_family()
    for n in (0, 2, 4, 6):
        pair = quadratic_pair(prod, n)
        assert pair.order == 4 * 2 ** n
        assert pair.Q == Poly([1]) - Poly.monomial(1, 2 ** n)


def test_quadratic_pair_controls():
    with pytest.raises(HypothesisError, match="a_1\\(n\\) = 1"):
        quadratic_pair(InfiniteProduct(2, 2, LevelTable.constant((1, 0))), 2)
    with pytest.raises(HypothesisError):
        quadratic_pair(quadratic_family(), 1)


def test_quadratic_segments_oracle():
    # segment [3N, 4N) repeats [2N, 3N) at a qualifying level
    prod = quadratic_family()
    for n in (2, 4):
        N = 2 ** n
        c = [fr(x) for x in gen_series(prod, 4 * N).coeffs]
        assert c[3 * N:4 * N] == c[2 * N:3 * N]


def test_key_inequality():
    prod = quadratic_family()
    assert all(quadratic_key_inequality(prod, n) for n in (2, 4, 6))
    assert not quadratic_key_inequality(prod, 0)


# --- measure witnesses

def test_measure_witness_examples():
    f = geometric(40)
    assert not measure_witness_check(f, Poly([1, -1]), Poly([1]), 4, 4)["ok"]
    assert measure_witness_check(f, Poly([]), Poly([1]), 4, 4)["ok"]
    with pytest.raises(SpecError):
        measure_witness_check(f, Poly([]), Poly([]), 4, 4)
    with pytest.raises(TruncationError):
        measure_witness_check(geometric(10), Poly([1]), Poly([1]), 4, 4)


def test_measure_witness_generic():
    rng = random.Random(8)
    f = TruncatedSeries([rng.randint(-9, 9) for _ in range(60)], 60)
    for _ in range(10):
        a = Poly([rng.randint(-5, 5) for _ in range(5)] + [1])
        b = Poly([rng.randint(-5, 5) for _ in range(6)])
        res = measure_witness_check(f, a, b, 4, 5)
        assert res["ok"] and res["order"] == certified_order(f, a, b)
