"""Cartier-matrix systems, polynomial-matrix infinite products and chain equations.

A :class:`CartierSystem` describes level vectors ``A_y(n)`` in ``K^d`` through

    A_y(k n + j) = C_{j,y} A_{y+1}(n),    A_y(0) = v_y,

and the sequence is the first coordinate of ``A_0``.  Summing over ``n`` turns
this into the generating-function recursion ``F_y(z) = A_y(z) F_{y+1}(z^k)``
with ``A_y(z) = sum_j z^j C_{j,y}``, which :func:`product_coeffs` evaluates
bottom-up.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .errors import HypothesisError, SpecError, TruncationError
from .levels import LevelTable
from .linalg import Matrix, Vector
from .poly import Poly, PolyMatrix, as_scalar
from .scalar import Scalar
from .sequences import SequenceSpec
from .series import NotAPowerSeries, TruncatedSeries, matrix_apply

__all__ = [
    "CartierSystem", "MatrixProductSpec", "ChainLevel", "ChainMahlerSpec",
    "CartierSequence", "MatrixProductSequence", "ChainSequence", "CartierReport", "Relation",
    "cartier_to_matrix", "cartier_to_product", "product_to_cartier", "product_coeffs", "level_series",
    "verify_cartier", "chain_solve", "chain_level_series", "becker_lift", "becker_s",
    "find_relation", "max_coeffs",
]

DEFAULT_MAX_COEFFS = 1 << 20


def max_coeffs() -> int:
    raw = os.environ.get("KPROJ_MAX_COEFFS")
    if raw is None:
        return DEFAULT_MAX_COEFFS
    try:
        value = int(raw)
    except ValueError:
        raise SpecError(f"KPROJ_MAX_COEFFS must be an integer, got {raw!r}") from None
    if value < 1:
        raise SpecError("KPROJ_MAX_COEFFS must be positive")
    return value


def _check_n(n: int) -> None:
    if n < 1:
        raise SpecError("coefficient count must be at least 1")
    cap = max_coeffs()
    if n > cap:
        raise SpecError(f"requested {n} coefficients exceeds the configured maximum {cap}")


def _min_levels(k: int, n: int) -> int:
    """Smallest ``Y`` with ``k**Y >= n``."""
    y, p = 0, 1
    while p < n:
        p *= k
        y += 1
    return y


# --- Cartier systems --------------------------------------------------------

class CartierSystem:
    """Level-indexed scalar matrices ``C_{j,y}`` with seed vectors ``v_y``.

    ``matrices[y]`` is a tuple of ``k`` square matrices (one per digit);
    ``seeds[y]`` is ``A_y(0)``.  The sequence is coordinate 0 of ``A_0``.
    """

    def __init__(self, radix: int, matrices: LevelTable, seeds: LevelTable,
                 field_order: int = 1, name: str = ""):
        if radix < 2:
            raise SpecError("radix must be at least 2")
        first = matrices.entries[0]
        if len(first) != radix:
            raise SpecError(f"expected {radix} digit matrices per level, got {len(first)}")
        d = len(first[0])
        for y, mats in enumerate(matrices.entries):
            if len(mats) != radix:
                raise SpecError(f"level {y}: expected {radix} digit matrices")
            for j, m in enumerate(mats):
                if len(m) != d or any(len(r) != d for r in m):
                    raise SpecError(f"level {y}, digit {j}: matrix is not {d}x{d}")
        for y, v in enumerate(seeds.entries):
            if len(v) != d:
                raise SpecError(f"seed vector at level {y} has length {len(v)}, expected {d}")
        self.radix = radix
        self.dim = d
        self.matrices = matrices.map(lambda ms: tuple(linalg.matrix(m) for m in ms))
        self.seeds = seeds.map(linalg.vector)
        self.field_order = field_order
        self.name = name
        self._memo: dict[tuple[int, int], Vector] = {}

    def C(self, j: int, y: int) -> Matrix:
        return self.matrices[y][j]

    def seed(self, y: int) -> Vector:
        return self.seeds[y]

    def vector(self, y: int, n: int) -> Vector:
        """``A_y(n)`` unrolled along the base-``k`` digits of ``n``."""
        if n == 0:
            return self.seeds[y]
        key = (y, n)
        v = self._memo.get(key)
        if v is None:
            n1, j = divmod(n, self.radix)
            v = linalg.mat_vec(self.C(j, y), self.vector(y + 1, n1))
            self._memo[key] = v
        return v

    def with_entry(self, j: int, level_index: int, row: int, col: int, value) -> CartierSystem:
        """Copy with one table entry replaced (used for negative controls)."""
        entries = [list(ms) for ms in self.matrices.entries]
        m = [list(r) for r in entries[level_index][j]]
        m[row][col] = as_scalar(value)
        entries[level_index][j] = tuple(tuple(r) for r in m)
        return CartierSystem(self.radix, LevelTable([tuple(e) for e in entries],
                                                    self.matrices.period),
                             self.seeds, self.field_order, self.name)

    def __repr__(self):
        return f"CartierSystem(k={self.radix}, d={self.dim}, name={self.name!r})"


class CartierSequence(SequenceSpec):
    kind = "cartier_system"

    def __init__(self, system: CartierSystem):
        super().__init__(system.radix, system.field_order)
        self.system = system

    def _compute(self, n):
        return self.system.vector(0, n)[0]


def cartier_to_matrix(sys: CartierSystem, y: int) -> PolyMatrix:
    """``A_y(z) = sum_j z^j C_{j,y}``, a matrix of degree at most ``k - 1``."""
    if y < 0:
        raise ValueError("level must be nonnegative")
    return PolyMatrix.from_coefficients(sys.matrices[y], degree_bound=sys.radix - 1)


def cartier_to_product(sys: CartierSystem) -> MatrixProductSpec:
    mats = LevelTable([PolyMatrix.from_coefficients(ms, sys.radix - 1)
                       for ms in sys.matrices.entries], sys.matrices.period)
    return MatrixProductSpec(sys.radix, mats, sys.seeds, output_row=0,
                             field_order=sys.field_order, name=sys.name)


def product_to_cartier(spec: MatrixProductSpec) -> CartierSystem:
    """Inverse of :func:`cartier_to_product`: ``C_{j,y}`` is the ``z^j`` coefficient of ``A_y``."""
    if spec.output_row != 0:
        raise SpecError("Cartier form reads coordinate 0; reorder the state so the output is first")
    k = spec.radix
    mats = spec.matrices.map(lambda m: tuple(m.coefficient(j) for j in range(k)))
    return CartierSystem(k, mats, spec.seeds, spec.field_order, spec.name)


@dataclass
class CartierReport:
    ok: bool
    checked_terms: int
    checked_levels: int
    violation: tuple[int, int, int] | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked_terms": self.checked_terms,
                "checked_levels": self.checked_levels,
                "violation": None if self.violation is None else
                dict(zip(("y", "j", "n"), self.violation)),
                "detail": self.detail}


def verify_cartier(sys: CartierSystem, spec: SequenceSpec, e_max: int, n: int) -> CartierReport:
    """Check the system against ``spec`` on the first ``n * k**e_max`` terms.

    Two things are verified: seed consistency ``v_y = C_{0,y} v_{y+1}`` for every
    level reached, and ``a(m) = A_0(m)[0]``.  Since ``A_0(k^e n + j)`` is the
    product of ``C`` along the digits of ``j`` applied to ``A_e(n)``, the second
    check covers every kernel relation up to level ``e_max``.  A mismatch at
    ``m`` is reported as ``(0, m mod k, m div k)``.
    """
    if spec.radix != sys.radix:
        raise SpecError(f"radix mismatch: system {sys.radix}, sequence {spec.radix}")
    k = sys.radix
    total = n * k ** e_max
    top = _min_levels(k, max(total, 1)) + 1
    for y in range(top + 1):
        lhs = sys.seed(y)
        rhs = linalg.mat_vec(sys.C(0, y), sys.seed(y + 1))
        if lhs != rhs:
            return CartierReport(False, 0, e_max, (y, 0, 0),
                                 f"seed at level {y} is not C_0 applied to the seed at level {y + 1}")
    for m in range(total):
        got = sys.vector(0, m)[0]
        want = spec.value(m)
        if got != want:
            return CartierReport(False, m, e_max, (0, m % k, m // k),
                                 f"term {m}: system gives {got}, sequence gives {want}")
    return CartierReport(True, total, e_max)


# --- matrix products --------------------------------------------------------

class MatrixProductSpec:
    """Polynomial matrices ``A_y(z)`` of degree ``<= k-1`` with seed constants."""

    def __init__(self, radix: int, matrices: LevelTable, seeds: LevelTable,
                 output_row: int = 0, field_order: int = 1, name: str = ""):
        d = matrices.entries[0].rows
        for y, m in enumerate(matrices.entries):
            if m.rows != d or m.cols != d:
                raise SpecError(f"matrix at level {y} is {m.rows}x{m.cols}, expected {d}x{d}")
            if m.degree > radix - 1:
                raise SpecError(f"matrix at level {y} has degree {m.degree} > {radix - 1}")
        for y, v in enumerate(seeds.entries):
            if len(v) != d:
                raise SpecError(f"seed vector at level {y} has length {len(v)}, expected {d}")
        if not 0 <= output_row < d:
            raise SpecError(f"output row {output_row} outside 0..{d - 1}")
        self.radix = radix
        self.dim = d
        self.matrices = matrices
        self.seeds = seeds.map(linalg.vector)
        self.output_row = output_row
        self.field_order = field_order
        self.name = name

    def A(self, y: int) -> PolyMatrix:
        return self.matrices[y]

    def __repr__(self):
        return f"MatrixProductSpec(k={self.radix}, d={self.dim}, name={self.name!r})"


def level_series(spec: MatrixProductSpec, n: int, y_max: int = 0) -> list[list[TruncatedSeries]]:
    """Component series ``F_y`` for ``y = 0..y_max``, each exact to order ``n``."""
    _check_n(n)
    k = spec.radix
    top = y_max + _min_levels(k, n)
    f = [TruncatedSeries.constant(c, n) for c in spec.seeds[top + 1]]
    out: list[list[TruncatedSeries]] = [None] * (y_max + 1)  # type: ignore[list-item]
    for y in range(top, -1, -1):
        f = matrix_apply(spec.A(y), [s.substitute_power(k) for s in f])
        if y <= y_max:
            out[y] = f
    return out


def product_coeffs(spec: MatrixProductSpec, n: int) -> TruncatedSeries:
    """First ``n`` coefficients of the output component of the infinite product."""
    return level_series(spec, n, 0)[0][spec.output_row]


class MatrixProductSequence(SequenceSpec):
    kind = "matrix_product"

    def __init__(self, spec: MatrixProductSpec):
        super().__init__(spec.radix, spec.field_order)
        self.spec = spec
        self._known = 0

    def _compute(self, n):
        if n >= self._known:
            size = max(64, 2 * self._known, n + 1)
            coeffs = product_coeffs(self.spec, size)
            for i, c in enumerate(coeffs):
                self._memo.setdefault(i, c)
            self._known = size
        return self._memo[n]


# --- chain Mahler equations ---------------------------------------------------

RationalFn = tuple[Poly, Poly]


def _ratfn(x) -> RationalFn:
    if isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], Poly):
        num, den = x
        if not den:
            raise SpecError("rational function with zero denominator")
        return num, den
    if isinstance(x, Poly):
        return x, Poly([1])
    return Poly([x]), Poly([1])


@dataclass(frozen=True)
class ChainLevel:
    """One level of ``sum_i a_i(z) f_{y+i}(z^{k^i}) = b(z)`` with ``f_y(0)``.

    ``coeffs[i]`` and ``rhs`` are (numerator, denominator) pairs.
    """

    coeffs: tuple[RationalFn, ...]
    rhs: RationalFn
    f0: Scalar

    @classmethod
    def make(cls, coeffs: Sequence, f0, rhs=0) -> ChainLevel:
        return cls(tuple(_ratfn(c) for c in coeffs), _ratfn(rhs), as_scalar(f0))


class ChainMahlerSpec:
    """Level family of chain equations linking ``f_y, f_{y+1}(z^k), ..., f_{y+d}(z^{k^d})``."""

    def __init__(self, radix: int, levels: LevelTable, name: str = ""):
        depth = len(levels.entries[0].coeffs) - 1
        if depth < 1:
            raise SpecError("a chain equation needs at least one shifted term")
        for y, lv in enumerate(levels.entries):
            if len(lv.coeffs) != depth + 1:
                raise SpecError(f"level {y} has {len(lv.coeffs) - 1} shifted terms, expected {depth}")
            if not lv.coeffs[0][0]:
                raise SpecError(f"level {y}: leading coefficient a_(y,0) is zero")
        self.radix = radix
        self.depth = depth
        self.levels = levels
        self.name = name

    def level(self, y: int) -> ChainLevel:
        return self.levels[y]


def _ratio_series(num: Poly, den: Poly, n: int, y: int, what: str) -> TruncatedSeries:
    try:
        return TruncatedSeries.from_rational(num, den, n)
    except NotAPowerSeries as exc:
        raise HypothesisError(f"level {y}: {what} is not a power series ({exc})") from None


def chain_level_series(chain: ChainMahlerSpec, n: int, y_max: int = 0) -> list[TruncatedSeries]:
    """Solve bottom-up for ``f_0..f_{y_max}`` to order ``n``.

    Each level is ``f_y = (b_y - sum_{i>=1} a_{y,i} f_{y+i}(z^{k^i})) / a_{y,0}``;
    levels above the working height are replaced by their constants, which
    only perturbs coefficients of order ``>= k**(height+1-y)``.  The computed
    constant term must agree with the declared ``f_y(0)``.
    """
    _check_n(n)
    k, d = chain.radix, chain.depth
    top = y_max + _min_levels(k, n)
    known: dict[int, TruncatedSeries] = {
        y: TruncatedSeries.constant(chain.level(y).f0, n) for y in range(top + 1, top + d + 1)}
    for y in range(top, -1, -1):
        lv = chain.level(y)
        a0n, a0d = lv.coeffs[0]
        bn, bd = lv.rhs
        acc = _ratio_series(bn * a0d, bd * a0n, n, y, "b/a_0") if bn else TruncatedSeries.zero(n)
        for i in range(1, d + 1):
            an, ad = lv.coeffs[i]
            if not an:
                continue
            r = _ratio_series(an * a0d, ad * a0n, n, y, f"a_{i}/a_0")
            acc = acc - r * known[y + i].substitute_power(k ** i)
        if n and acc[0] != lv.f0:
            raise HypothesisError(
                f"level {y}: equation forces f_y(0) = {acc[0]} but {lv.f0} was declared")
        known[y] = acc
        del known[y + d]
    return [known[y] for y in range(y_max + 1)]


def chain_solve(chain: ChainMahlerSpec, n: int) -> TruncatedSeries:
    return chain_level_series(chain, n, 0)[0]


def becker_s(k: int, degree: int) -> int:
    """Largest ``s`` with ``k s <= s + degree <= k s + k - 1``."""
    return degree // (k - 1)


def _valid_s(k: int, degree: int, s: int) -> bool:
    return k * s <= s + degree <= k * s + k - 1


def becker_lift(chain: ChainMahlerSpec, s: int | None = None,
                degree_bound: int | None = None) -> MatrixProductSpec:
    """Rewrite ``f_y = sum_i c_{y,i} f_{y+i}(z^{k^i})`` as a matrix product.

    Input equations must read ``f_y + sum_i a_{y,i} f_{y+i}(z^{k^i}) = 0`` with
    polynomial ``a_{y,i}``, so ``c_{y,i} = -a_{y,i}``.  The state vector holds
    ``z^j f_{y+i}(z^{k^i})`` for ``0 <= i < d`` and ``0 <= j <= s``, indexed
    ``i*(s+1) + j``; the output is component ``(0, 0)``.
    """
    k, d = chain.radix, chain.depth
    one = Poly([1])
    degree = 0
    for y, lv in enumerate(chain.levels.entries):
        if lv.rhs[0]:
            raise SpecError(f"level {y}: lift needs a homogeneous equation (b = 0)")
        for i, (num, den) in enumerate(lv.coeffs):
            if den.degree != 0:
                raise SpecError(f"level {y}: coefficient a_{i} is not a polynomial")
            if i == 0 and num != den:
                raise SpecError(f"level {y}: lift needs a_(y,0) = 1")
            if i:
                degree = max(degree, num.degree)
    if degree_bound is not None:
        if degree > degree_bound:
            raise SpecError(f"coefficient degree {degree} exceeds the bound {degree_bound}")
        degree = degree_bound
    if s is None:
        s = becker_s(k, degree)
    elif not _valid_s(k, degree, s):
        raise SpecError(f"s = {s} violates k*s <= s+L <= k*s+k-1 for k={k}, L={degree}")
    width = s + 1
    dim = d * width

    def matrix_at(y: int) -> PolyMatrix:
        lv = chain.level(y)
        grid = [[Poly() for _ in range(dim)] for _ in range(dim)]
        for j in range(width):
            for ip in range(1, d + 1):
                num, den = lv.coeffs[ip]
                c = -(num * den.leading().inverse())
                shifted = c.shift(j)
                for t in range(0, (shifted.degree // k) + 1 if shifted else 0):
                    block = Poly(shifted.coeffs[t * k:(t + 1) * k])
                    if block:
                        if t > s:
                            raise SpecError(f"level {y}: lift width s={s} too small")
                        grid[j][(ip - 1) * width + t] = block
            for i in range(1, d):
                grid[i * width + j][(i - 1) * width + j // k] = Poly.monomial(1, j % k)
        return PolyMatrix(grid, degree_bound=k - 1)

    def seed_at(y: int) -> tuple:
        return tuple(chain.level(y + i).f0 if j == 0 else Scalar(0)
                     for i in range(d) for j in range(width))

    mats = chain.levels.derived(matrix_at)
    seeds = chain.levels.derived(seed_at, lookahead=d)
    return MatrixProductSpec(k, mats, seeds, output_row=0, name=chain.name)


# --- relation finding ---------------------------------------------------------

@dataclass
class Relation:
    """``sum_t coeffs[t](z) * g_t(z^{p_t}) = 0 mod z^order`` (certified to ``order`` only)."""

    coeffs: tuple[Poly, ...]
    order: int
    nullity: int
    powers: tuple[int, ...] = field(default=())

    def __str__(self):
        return " ; ".join(str(c) for c in self.coeffs) + f"  (mod z^{self.order})"


def find_relation(series: Sequence[TruncatedSeries], powers: Sequence[int] | None,
                  degree: int, margin: int = 8) -> Relation | None:
    """Exact search for polynomial coefficients of degree ``<= degree`` annihilating the family.

    ``powers[t]`` is the substitution exponent applied to ``series[t]``.  The
    returned relation has its first nonzero coefficient equal to 1.
    """
    t_count = len(series)
    if t_count == 0:
        raise SpecError("empty series family")
    powers = tuple(powers) if powers is not None else (1,) * t_count
    if len(powers) != t_count:
        raise SpecError("one substitution power per series is required")
    n = min(s.trunc_order for s in series)
    unknowns = t_count * (degree + 1)
    if n <= unknowns + margin:
        raise TruncationError(
            f"need more than {unknowns + margin} coefficients for degree {degree} "
            f"and {t_count} series; got {n}")
    subs = [s.truncate(n).substitute_power(p) for s, p in zip(series, powers)]
    rows = []
    zero = Scalar(0)
    for m in range(n):
        row = []
        for g in subs:
            for e in range(degree + 1):
                row.append(g[m - e] if m >= e else zero)
        rows.append(row)
    basis = linalg.nullspace(rows, unknowns)
    if not basis:
        return None
    v = basis[0]
    lead = next(x for x in v if x)
    v = tuple(x / lead for x in v)
    coeffs = tuple(Poly(v[t * (degree + 1):(t + 1) * (degree + 1)]) for t in range(t_count))
    return Relation(coeffs, n, len(basis), powers)


def relation_residual(rel: Relation, series: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """Independent re-substitution of a relation; vanishes when the relation holds."""
    n = rel.order
    acc = TruncatedSeries.zero(n)
    for c, s, p in zip(rel.coeffs, series, rel.powers):
        acc = acc + s.truncate(n).substitute_power(p).mul_poly(c)
    return acc


class ChainSequence(SequenceSpec):
    """Coefficients of ``f_0`` for a chain family, solved in growing batches."""

    kind = "chain"

    def __init__(self, chain: ChainMahlerSpec):
        super().__init__(chain.radix, 1)
        self.chain = chain
        self._known = 0

    def _compute(self, n):
        if n >= self._known:
            size = max(64, 2 * self._known, n + 1)
            for i, c in enumerate(chain_solve(self.chain, size)):
                self._memo.setdefault(i, c)
            self._known = size
        return self._memo[n]
