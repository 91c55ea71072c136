"""Concrete sequence families: recursive words, digit patterns, lacunary products and sums."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import SpecError
from .levels import LevelTable
from .mahler import CartierSystem, MatrixProductSpec
from .poly import Poly, PolyMatrix, as_scalar
from .scalar import Scalar
from .sequences import SequenceSpec
from .series import TruncatedSeries

__all__ = [
    "RecursiveWordSpec", "RecursiveWord", "expand", "signed_word_spec", "thue_morse_spec",
    "recursive_word_to_cartier", "digits", "count_pattern", "DigitPatternSpec", "DigitPattern",
    "digit_sequence", "InfiniteProduct", "InfiniteSum", "infinite_product_series",
    "infinite_sum_series", "product_cartier", "quadratic_product_cartier", "sum_product_spec",
    "Ooto", "ooto_sequence", "GapWitness", "gap_multiple",
]


# --- recursive words ----------------------------------------------------------

class RecursiveWordSpec:
    """Words ``A_{n,s}`` of length ``k**n`` built by concatenating scaled level-``n`` words.

    ``rules[n][s][l] = (i, f)`` says that block ``l`` of ``A_{n+1,s}`` is
    ``f * A_{n,i}``.  Slot 0 must start with ``(0, 1)`` at every level so that
    ``A_{n,0}`` is a prefix of ``A_{n+1,0}``.
    """

    def __init__(self, radix: int, seeds: Sequence, rules: LevelTable, field_order: int = 1,
                 name: str = ""):
        d = len(seeds)
        if d < 1:
            raise SpecError("at least one seed is required")
        normalized = []
        for n, rule in enumerate(rules.entries):
            if len(rule) != d:
                raise SpecError(f"level {n}: expected {d} slots, got {len(rule)}")
            slots = []
            for s, pairs in enumerate(rule):
                if len(pairs) != radix:
                    raise SpecError(f"level {n}, slot {s}: expected {radix} blocks")
                row = []
                for src, mult in pairs:
                    if not 0 <= src < d:
                        raise SpecError(f"level {n}, slot {s}: source {src} outside 0..{d - 1}")
                    row.append((int(src), as_scalar(mult)))
                slots.append(tuple(row))
            if slots[0][0] != (0, Scalar(1)):
                raise SpecError(f"level {n}: slot 0 must begin with (0, 1) for prefix nesting")
            normalized.append(tuple(slots))
        self.radix = radix
        self.dim = d
        self.seeds = tuple(as_scalar(s) for s in seeds)
        self.rules: LevelTable = LevelTable(normalized, rules.period)
        self.field_order = field_order
        self.name = name


class RecursiveWord(SequenceSpec):
    """The limit of slot 0, evaluated digit by digit from the top level down."""

    kind = "recursive_word"

    def __init__(self, spec: RecursiveWordSpec):
        super().__init__(spec.radix, spec.field_order)
        self.spec = spec

    def _compute(self, n):
        k = self.radix
        top = 0
        while k ** top <= n:
            top += 1
        value = Scalar(1)
        slot = 0
        for level in range(top - 1, -1, -1):
            digit = (n // k ** level) % k
            slot, mult = self.spec.rules[level][slot][digit]
            value = value * mult
        return value * self.spec.seeds[slot]


def expand(spec: RecursiveWordSpec, n: int) -> list[list[Scalar]]:
    """All ``d`` words at level ``n``, each of length ``k**n``."""
    if n < 0:
        raise ValueError("level must be nonnegative")
    words = [[s] for s in spec.seeds]
    for level in range(n):
        rule = spec.rules[level]
        nxt = []
        for s in range(spec.dim):
            w: list[Scalar] = []
            for src, mult in rule[s]:
                block = words[src]
                w.extend(block if mult == 1 else [mult * x for x in block])
            nxt.append(w)
        words = nxt
    return words


def signed_word_spec(signs: LevelTable) -> RecursiveWordSpec:
    """``A_{n+1} = A_n B_n``, ``B_{n+1} = B_n (f_n A_n)`` with ``A_0 = B_0 = 1``."""
    def rule(f):
        f = as_scalar(f)
        if f not in (1, -1):
            raise SpecError(f"signs must be +1 or -1, got {f}")
        return (((0, 1), (1, 1)), ((1, 1), (0, f)))
    return RecursiveWordSpec(2, (1, 1), signs.map(rule), name="signed-word")


def thue_morse_spec() -> RecursiveWordSpec:
    return RecursiveWordSpec(2, (1,), LevelTable.constant((((0, 1), (0, -1)),)),
                             name="thue-morse")


def recursive_word_to_cartier(spec: RecursiveWordSpec) -> CartierSystem:
    """Cartier form of a recursive word.

    With ``M_{l,n}[s][i] = f`` when block ``l`` of slot ``s`` is ``f * A_{n,i}``,
    the word value is ``seeds . M_{l_0,0}^T ... e_0`` read along the digits, so
    ``C_{l,n} = M_{l,n}^T`` with all seeds ``e_0``.  Level 0 is premultiplied by
    the matrix whose first row is the seed vector, which puts the word value in
    coordinate 0.
    """
    k, d = spec.radix, spec.dim
    zero, one = Scalar(0), Scalar(1)

    def transposed(rule) -> tuple:
        mats = []
        for l in range(k):
            m = [[zero] * d for _ in range(d)]
            for s in range(d):
                src, mult = rule[s][l]
                m[src][s] = mult
            mats.append(tuple(tuple(r) for r in m))
        return tuple(mats)

    rules = spec.rules
    length = len(rules.entries) + rules.period
    table = [transposed(rules[y]) for y in range(length)]
    t = [list(spec.seeds)] + [[one if i == j else zero for j in range(d)] for i in range(1, d)]
    table[0] = tuple(linalg.mat_mul(linalg.matrix(t), m) for m in table[0])
    e0 = tuple(one if i == 0 else zero for i in range(d))
    seeds = LevelTable([linalg.mat_vec(linalg.matrix(t), e0), e0])
    return CartierSystem(k, LevelTable(table, rules.period), seeds, spec.field_order,
                         name=spec.name)


# --- digit patterns -------------------------------------------------------------

def digits(n: int, k: int) -> list[int]:
    """Base-``k`` digits of ``n``, least significant first (empty for 0)."""
    out = []
    while n:
        n, r = divmod(n, k)
        out.append(r)
    return out


def count_pattern(n: int, pattern: Sequence[int], y: int, k: int) -> int:
    """1 if digits ``y, y+1, ...`` of ``n`` read ``pattern[0], pattern[1], ...``.

    ``pattern[0]`` sits at the lowest position ``y``; positions beyond the
    length of ``n`` count as zero digits.
    """
    if not pattern or not any(pattern):
        raise SpecError("pattern must be nonempty and not all zero")
    if any(not 0 <= p < k for p in pattern):
        raise SpecError(f"pattern digits must lie in 0..{k - 1}")
    ds = digits(n, k)
    for i, p in enumerate(pattern):
        pos = y + i
        if (ds[pos] if pos < len(ds) else 0) != p:
            return 0
    return 1


@dataclass(frozen=True)
class DigitPatternSpec:
    """Weighted digit-window counts.

    ``patterns`` pairs a low-first digit tuple with a weight table ``mu(y)``.
    ``mode`` is ``"additive"``, ``"multiplicative"`` or ``"modular"`` (with
    ``modulus``).
    """

    radix: int
    patterns: tuple[tuple[tuple[int, ...], LevelTable], ...]
    mode: str = "additive"
    modulus: int | None = None
    name: str = ""

    def __post_init__(self):
        k = self.radix
        if k < 2:
            raise SpecError("radix must be at least 2")
        if self.mode not in ("additive", "multiplicative", "modular"):
            raise SpecError(f"unknown digit-pattern mode {self.mode!r}")
        for pat, weights in self.patterns:
            if not pat or not any(pat) or any(not 0 <= p < k for p in pat):
                raise SpecError(f"invalid pattern {pat!r} for radix {k}")
            if self.mode == "multiplicative":
                tail = weights.entries[len(weights.entries) - weights.period:]
                if any(as_scalar(w) != 1 for w in tail):
                    raise SpecError("multiplicative weights must have a tail identically 1")
            if self.mode == "modular":
                for w in weights.entries:
                    w = as_scalar(w)
                    if not w.is_rational() or w.to_fraction().denominator != 1:
                        raise SpecError("modular mode requires integer weights")
        if self.mode == "modular" and (self.modulus is None or self.modulus < 1):
            raise SpecError("modular mode requires a positive modulus")


class DigitPattern(SequenceSpec):
    kind = "digit_pattern"

    def __init__(self, spec: DigitPatternSpec):
        order = 1
        for _, w in spec.patterns:
            for x in w.entries:
                order = max(order, as_scalar(x).order)
        super().__init__(spec.radix, order)
        self.spec = spec
        self._weights = [(pat, weights.map(as_scalar)) for pat, weights in spec.patterns]

    def _matches(self, n: int):
        ds = digits(n, self.radix)
        for pat, weights in self._weights:
            for y in range(len(ds)):
                if all((ds[y + i] if y + i < len(ds) else 0) == p for i, p in enumerate(pat)):
                    yield weights[y]

    def _compute(self, n):
        if self.spec.mode == "multiplicative":
            acc = Scalar(1)
            for w in self._matches(n):
                acc = acc * w
            return acc
        acc = Scalar(0)
        for w in self._matches(n):
            acc = acc + w
        if self.spec.mode == "modular":
            return Scalar(int(acc.to_fraction()) % self.spec.modulus)
        return acc


def digit_sequence(spec: DigitPatternSpec) -> SequenceSpec:
    return DigitPattern(spec)


# --- lacunary products and sums -------------------------------------------------

def _coeff_table(table: LevelTable, width: int) -> LevelTable:
    def norm(row):
        row = tuple(as_scalar(x) for x in row)
        if len(row) != width:
            raise SpecError(f"coefficient rows must have {width} entries, got {len(row)}")
        return row
    return table.map(norm)


class InfiniteProduct(SequenceSpec):
    """Coefficients of ``prod_y (1 + sum_{s=1}^{L} a_{s,y} z^{s k^y})``."""

    kind = "infinite_product"

    def __init__(self, radix: int, degree: int, table: LevelTable, name: str = ""):
        coeffs = _coeff_table(table, degree)
        order = max(x.order for row in coeffs.entries for x in row)
        super().__init__(radix, order)
        self.degree = degree
        self.table = coeffs
        self.name = name
        self._level_memo: dict[tuple[int, int], Scalar] = {}

    def a(self, s: int, y: int) -> Scalar:
        return Scalar(1) if s == 0 else self.table[y][s - 1]

    def level_value(self, level: int, n: int) -> Scalar:
        """Coefficient of ``z^n`` in the tail product starting at ``level`` (rescaled)."""
        if n == 0:
            return Scalar(1)
        key = (level, n)
        v = self._level_memo.get(key)
        if v is None:
            k = self.radix
            v = Scalar(0)
            for s in range(n % k, min(self.degree, n) + 1, k):
                c = self.a(s, level)
                if c:
                    v = v + c * self.level_value(level + 1, (n - s) // k)
            self._level_memo[key] = v
        return v

    def _compute(self, n):
        return self.level_value(0, n)


def infinite_product_series(radix: int, degree: int, table: LevelTable, n: int,
                            start_level: int = 0) -> TruncatedSeries:
    """Direct truncated expansion of the product over levels ``y >= start_level``."""
    coeffs = _coeff_table(table, degree)
    acc = TruncatedSeries.constant(1, n)
    y, step = start_level, 1
    while step < n:
        factor = [Scalar(0)] * (degree * step + 1)
        factor[0] = Scalar(1)
        for s, c in enumerate(coeffs[y], start=1):
            factor[s * step] = c
        acc = acc.mul_poly(Poly(factor))
        y += 1
        step *= radix
    return acc


class InfiniteSum(SequenceSpec):
    """Coefficients of ``sum_y sum_{s=1}^{L} a_{s,y} z^{s k^y}``."""

    kind = "infinite_sum"

    def __init__(self, radix: int, degree: int, table: LevelTable, name: str = ""):
        coeffs = _coeff_table(table, degree)
        order = max(x.order for row in coeffs.entries for x in row)
        super().__init__(radix, order)
        self.degree = degree
        self.table = coeffs
        self.name = name

    def _compute(self, n):
        acc = Scalar(0)
        if n == 0:
            return acc
        y, q = 0, n
        while q:
            if q <= self.degree:
                acc = acc + self.table[y][q - 1]
            if q % self.radix:
                break
            q //= self.radix
            y += 1
        return acc


def infinite_sum_series(radix: int, degree: int, table: LevelTable, n: int) -> TruncatedSeries:
    coeffs = _coeff_table(table, degree)
    out = [Scalar(0)] * n
    y, step = 0, 1
    while step < n:
        for s, c in enumerate(coeffs[y], start=1):
            if s * step < n:
                out[s * step] = out[s * step] + c
        y += 1
        step *= radix
    return TruncatedSeries(out)


def product_cartier(radix: int, table: LevelTable, name: str = "") -> CartierSystem:
    """One-dimensional system for a product whose factors have degree ``<= k - 1``.

    ``f_y(z) = (1 + sum_s a_{s,y} z^s) f_{y+1}(z^k)`` gives ``C_{j,y} = [a_{j,y}]``.
    """
    coeffs = _coeff_table(table, radix - 1)
    mats = coeffs.map(lambda row: tuple(((c,),) for c in (Scalar(1),) + row))
    return CartierSystem(radix, mats, LevelTable.constant((1,)), name=name)


def quadratic_product_cartier(table: LevelTable, name: str = "") -> CartierSystem:
    """Two-dimensional system for ``prod (1 + a_{1,y} z^{2^y} + a_{2,y} z^{2^{y+1}})``.

    The state is ``(f_y, z f_y)``, giving
    ``A_y(z) = [[1 + a_1 z, a_2], [z, a_1 + a_2 z]]`` and seeds ``(1, 0)``.
    """
    coeffs = _coeff_table(table, 2)

    def mats(row):
        a1, a2 = row
        zero, one = Scalar(0), Scalar(1)
        return (((one, a2), (zero, a1)), ((a1, zero), (one, a2)))

    return CartierSystem(2, coeffs.map(mats), LevelTable.constant((1, 0)), name=name)


def sum_product_spec(radix: int, degree: int, table: LevelTable, name: str = "") -> MatrixProductSpec:
    """Matrix-product form of the lacunary sum.

    The state at level ``y`` is ``(f_y, 1, z, ..., z^S)`` with ``S = L // k``;
    ``z^s = z^{s mod k} (z^k)^{s div k}`` routes each term through the power
    components.
    """
    k = radix
    coeffs = _coeff_table(table, degree)
    top = degree // k
    dim = top + 2

    def matrix(row):
        grid = [[Poly() for _ in range(dim)] for _ in range(dim)]
        grid[0][0] = Poly([1])
        for s, c in enumerate(row, start=1):
            q, r = divmod(s, k)
            grid[0][1 + q] = grid[0][1 + q] + Poly.monomial(c, r)
        for q in range(top + 1):
            grid[1 + q][1 + q // k] = Poly.monomial(1, q % k)
        return PolyMatrix(grid, degree_bound=k - 1)

    seeds = tuple(1 if i == 1 else 0 for i in range(dim))
    return MatrixProductSpec(k, coeffs.map(matrix), LevelTable.constant(seeds), name=name)


# --- the exponent-parity sequence ---------------------------------------------------

class Ooto(SequenceSpec):
    """``a(n) = 1`` iff ``n = 2^e`` with ``e = 4^j * l``, ``l`` odd; else 0."""

    kind = "ooto"

    def __init__(self):
        super().__init__(2, 1)

    def _compute(self, n):
        if n < 2 or n & (n - 1):
            return Scalar(0)
        e = n.bit_length() - 1
        v = (e & -e).bit_length() - 1
        return Scalar(1 if v % 2 == 0 else 0)


def ooto_sequence() -> SequenceSpec:
    return Ooto()


# --- multiples with a digit gap ------------------------------------------------------

@dataclass(frozen=True)
class GapWitness:
    radix: int
    l: int
    x: int
    positions: tuple[int, ...]
    digits: tuple[int, ...]

    def validate(self, t: int, match_position: int | None = None) -> bool:
        k = self.radix
        if self.x < 1 or not self.positions:
            return False
        if sum(s * k ** w for s, w in zip(self.digits, self.positions)) != self.x * self.l:
            return False
        if self.digits[0] != 1 or any(not 1 <= s <= k - 1 for s in self.digits):
            return False
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            return False
        if len(self.positions) > 1 and self.positions[1] - self.positions[0] <= t:
            return False
        return match_position is None or self.positions[0] == match_position


def _witness(k: int, l: int, x: int) -> GapWitness:
    ds = digits(x * l, k)
    pos = tuple(i for i, d in enumerate(ds) if d)
    return GapWitness(k, l, x, pos, tuple(ds[i] for i in pos))


def gap_multiple(k: int, l: int, t: int, match_position: int | None = None,
                 budget: int = 10 ** 7) -> GapWitness:
    """Smallest ``x >= 1`` whose multiple ``x*l`` has lowest digit 1 followed by more than ``t`` zeros.

    A multiple with a single nonzero digit satisfies the gap condition
    vacuously.  With ``match_position`` the lowest nonzero digit must also sit
    at that position.
    """
    if k < 2 or l < 1 or t < 0:
        raise ValueError("need k >= 2, l >= 1, t >= 0")
    if match_position is not None and l % k ** (match_position + 1) == 0:
        raise SpecError(f"every multiple of {l} is divisible by {k}^{match_position + 1}; "
                        f"no nonzero digit can sit at position {match_position}")
    for x in range(1, budget + 1):
        w = _witness(k, l, x)
        if w.validate(t, match_position):
            return w
    raise SpecError(f"no witness with x <= {budget} for k={k}, l={l}, t={t}")
