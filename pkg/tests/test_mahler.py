from __future__ import annotations

import random

import pytest

from kproj.builtins import load_builtin
from kproj.errors import HypothesisError, SpecError, TruncationError
from kproj.generators import (InfiniteProduct, RecursiveWord, quadratic_product_cartier,
                              recursive_word_to_cartier, thue_morse_spec)
from kproj.levels import LevelTable
from kproj.mahler import (CartierSequence, CartierSystem, ChainLevel, ChainMahlerSpec,
                          MatrixProductSequence, MatrixProductSpec, becker_lift, becker_s,
                          cartier_to_matrix, cartier_to_product, chain_solve, find_relation,
                          level_series, product_coeffs, relation_residual, verify_cartier)
from kproj.poly import Poly, PolyMatrix
from kproj.sequences import gen_series, prefix
from kproj.series import TruncatedSeries
from kproj.switching import switching_chain, switching_product

z = Poly.z()


def ints(values) -> list[int]:
    return [int(v.to_fraction()) for v in values]


def tm_system() -> CartierSystem:
    return CartierSystem(2, LevelTable.constant((((1,),), ((-1,),))), LevelTable.constant((1,)))


def stern_system() -> CartierSystem:
    return quadratic_product_cartier(LevelTable.constant((1, 1)))


def chain(k: int, levels: list[list], period: int | None = None, f0=1) -> ChainMahlerSpec:
    rows = [ChainLevel.make(c, f0=f0) for c in levels]
    return ChainMahlerSpec(k, LevelTable(rows, period or len(rows)))


# --- Cartier systems and the matrix bridge

def test_cartier_to_matrix_examples():
    eye = ((1, 0), (0, 1))
    sys = CartierSystem(2, LevelTable.constant((eye, eye)), LevelTable.constant((1, 0)))
    assert cartier_to_matrix(sys, 0) == PolyMatrix([[1 + z, 0], [0, 1 + z]])
    assert cartier_to_matrix(tm_system(), 3) == PolyMatrix([[1 - z]])
    assert cartier_to_matrix(stern_system(), 0) == PolyMatrix([[1 + z, 1], [z, 1 + z]])


def test_product_coeffs_examples():
    trivial = MatrixProductSpec(2, LevelTable.constant(PolyMatrix([[1]])), LevelTable.constant((1,)))
    assert ints(product_coeffs(trivial, 5).coeffs) == [1, 0, 0, 0, 0]
    stern = cartier_to_product(stern_system())
    assert ints(product_coeffs(stern, 4).coeffs) == [1, 1, 2, 1]


def stern_oracle(n: int) -> int:
    """Representations of n as sum eps_y 2^y with eps_y in {0, 1, 2}."""
    memo = {0: 1}

    def r(m):
        if m not in memo:
            memo[m] = r((m - 1) // 2) if m % 2 else r(m // 2) + r(m // 2 - 1)
        return memo[m]
    return r(n)


def test_stern_product_against_representation_count():
    got = ints(product_coeffs(cartier_to_product(stern_system()), 300).coeffs)
    assert got == [stern_oracle(n) for n in range(300)]


def test_tail_product_anchor():
    # the level-n component has z^2 coefficient a_{1,n+1} + a_{2,n}
    table = LevelTable.cycle([(2, 1), (1, 1), (3, 5)])
    spec = cartier_to_product(quadratic_product_cartier(table))
    levels = level_series(spec, 8, y_max=5)
    for n in range(6):
        assert levels[n][0][2] == table[n + 1][0] + table[n][1]


def test_truncation_soundness():
    spec = cartier_to_product(load_builtin("deg2-dn-family").system)
    short = product_coeffs(spec, 100)
    assert product_coeffs(spec, 400).truncate(100) == short
    assert level_series(spec, 100, y_max=4)[0][0] == short


def test_verify_cartier_thue_morse():
    rep = verify_cartier(tm_system(), RecursiveWord(thue_morse_spec()), 6, 64)
    assert rep.ok and rep.checked_terms == 64 * 2 ** 6


def test_verify_cartier_reports_corruption():
    bad = tm_system().with_entry(1, 0, 0, 0, 1)
    rep = verify_cartier(bad, RecursiveWord(thue_morse_spec()), 3, 8)
    assert not rep.ok
    assert rep.violation == (0, 1, 0)
    assert rep.to_dict()["violation"] == {"y": 0, "j": 1, "n": 0}


def test_verify_cartier_against_product_route():
    sys = stern_system()
    rep = verify_cartier(sys, MatrixProductSequence(cartier_to_product(sys)), 4, 16)
    assert rep.ok


def test_verify_cartier_flags_seed_inconsistency():
    sys = CartierSystem(2, LevelTable.constant((((1,),), ((1,),))), LevelTable([(2,), (1,)]))
    rep = verify_cartier(sys, CartierSequence(sys), 2, 4)
    assert not rep.ok and "seed" in rep.detail


@pytest.mark.parametrize("name", ["thue-morse", "signed-word", "stern", "rudin-shapiro-type",
                                  "deg2-dn-family", "ternary-product"])
def test_bridge_equivalence(name):
    doc = load_builtin(name)
    sys = doc.cartier_system()
    direct = prefix(doc.sequence, 1024)
    assert product_coeffs(cartier_to_product(sys), 1024).coeffs == tuple(direct)
    assert prefix(CartierSequence(sys), 1024) == direct


def test_recursive_word_conversion_keeps_values():
    spec = load_builtin("signed-word").sequence.spec
    sys = recursive_word_to_cartier(spec)
    assert prefix(CartierSequence(sys), 256) == prefix(RecursiveWord(spec), 256)


def test_matrix_product_degree_bound_enforced():
    with pytest.raises((SpecError, ValueError)):
        MatrixProductSpec(2, LevelTable.constant(PolyMatrix([[z ** 2]])), LevelTable.constant((1,)))


def test_max_coeffs_cap(monkeypatch):
    monkeypatch.setenv("KPROJ_MAX_COEFFS", "50")
    with pytest.raises(SpecError):
        product_coeffs(cartier_to_product(stern_system()), 51)


# --- chains

def test_chain_constant_solution():
    c = chain(2, [[1, -1]])
    assert ints(chain_solve(c, 16).coeffs) == [1] + [0] * 15


def test_chain_constant_term_conflict_names_level():
    published = chain(2, [[1, 1 + z]])
    with pytest.raises(HypothesisError, match="level"):
        chain_solve(published, 16)


def test_chain_power_series_condition():
    bad = ChainMahlerSpec(2, LevelTable.constant(ChainLevel.make([z, -1], f0=1)))
    with pytest.raises(HypothesisError, match="level"):
        chain_solve(bad, 8)


def test_chain_with_rational_coefficients():
    # (1 - z) f_y = f_{y+1}(z^2): f = prod 1 / (1 - z^(2^y)), binary partitions
    c = ChainMahlerSpec(2, LevelTable.constant(ChainLevel.make([1 - z, -1], f0=1)))
    got = ints(chain_solve(c, 20).coeffs)
    binary_partitions = [1, 1, 2, 2, 4, 4, 6, 6, 10, 10, 14, 14, 20, 20, 26, 26, 36, 36, 46, 46]
    assert got == binary_partitions


def test_switching_chain_matches_product():
    choices = LevelTable.cycle([1, 2, 2, 1, 2])
    want = product_coeffs(switching_product(choices), 256)
    assert chain_solve(switching_chain(choices), 256) == want


# --- lift

@pytest.mark.parametrize("k, degree, s", [(2, 1, 1), (2, 3, 3), (2, 0, 0), (3, 2, 1), (3, 5, 2)])
def test_becker_s(k, degree, s):
    assert becker_s(k, degree) == s
    assert k * s <= s + degree <= k * s + k - 1


def test_lift_of_first_order_chain():
    c = chain(2, [[1, -(1 + z)]])
    lift = becker_lift(c)
    assert lift.dim == 2
    assert product_coeffs(lift, 256) == chain_solve(c, 256)
    assert ints(chain_solve(c, 8).coeffs) == [1] * 8


def test_lift_of_degree_three_chain_uses_s_3():
    choices = LevelTable.cycle([2, 2, 1])
    c = switching_chain(choices)
    lift = becker_lift(c)
    assert lift.dim == c.depth * (3 + 1)
    assert product_coeffs(lift, 512) == chain_solve(c, 512)
    smaller = becker_lift(c, s=2)
    assert product_coeffs(smaller, 128) == chain_solve(c, 128)
    with pytest.raises(SpecError):
        becker_lift(c, s=1)


def test_lift_constant_coefficients_is_scalar_system():
    c = chain(2, [[1, -2, 1], [1, -3, 2]])
    lift = becker_lift(c)
    assert lift.dim == 2
    assert all(m.degree <= 0 for m in lift.matrices.entries)
    assert product_coeffs(lift, 128) == chain_solve(c, 128)


def test_lift_rejects_degree_bound_violation():
    with pytest.raises(SpecError):
        becker_lift(chain(2, [[1, -(1 + z ** 4)]]), degree_bound=3)


def test_lift_radix_three_random_family():
    rng = random.Random(3)
    rows = []
    for _ in range(4):
        a1 = [rng.randint(-2, 2) for _ in range(3)]
        a2 = [-1 - a1[0]] + [rng.randint(-2, 2) for _ in range(2)]  # keeps f_y(0) = 1
        rows.append([1, Poly(a1), Poly(a2)])
    c = chain(3, rows)
    assert product_coeffs(becker_lift(c), 300) == chain_solve(c, 300)


# --- relations

def test_relation_of_identical_series():
    f = gen_series(load_builtin("stern").sequence, 40)
    rel = find_relation([f, f], None, 0)
    assert [ints(c.coeffs) for c in rel.coeffs] == [[1], [-1]]


def test_thue_morse_mahler_equation():
    f = gen_series(RecursiveWord(thue_morse_spec()), 64)
    rel = find_relation([f, f], [1, 2], 1)
    assert rel is not None and rel.nullity == 1
    assert [ints(c.coeffs) for c in rel.coeffs] == [[1], [-1, 1]]
    assert relation_residual(rel, [f, f]).valuation() is None


def test_random_pair_has_no_small_relation():
    rng = random.Random(11)
    a = TruncatedSeries([rng.randint(-50, 50) for _ in range(40)])
    b = TruncatedSeries([rng.randint(-50, 50) for _ in range(40)])
    assert find_relation([a, b], [1, 2], 2) is None


def test_relation_needs_enough_terms():
    f = TruncatedSeries([1] * 10)
    with pytest.raises(TruncationError):
        find_relation([f, f], None, 3)


def test_stern_relation_is_recovered():
    f = gen_series(InfiniteProduct(2, 2, LevelTable.constant((1, 1))), 80)
    rel = find_relation([f, f], [1, 2], 2)
    assert [ints(c.coeffs) for c in rel.coeffs] == [[1], [-1, -1, -1]]
    assert relation_residual(rel, [f, f]).valuation() is None
