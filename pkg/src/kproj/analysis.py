"""Finite-window word diagnostics and the block decomposition of Cartier systems.

Every report here describes a finite prefix and says so; nothing claims an
asymptotic property.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from . import linalg
from .errors import HypothesisError, SpecError
from .mahler import CartierSystem, cartier_to_product, level_series
from .scalar import Scalar
from .sequences import SequenceSpec

__all__ = [
    "as_word", "factor_counts", "ComplexityReport", "complexity", "check_complexity_bound",
    "PeriodicityReport", "detect_periodicity", "RepetitionDecomposition", "long_repetitions",
    "FractalDecomposition", "FractalMismatch", "fractal_decompose", "fractal_copy_census",
]


def as_word(source: SequenceSpec | Sequence, length: int | None = None) -> list:
    if isinstance(source, SequenceSpec):
        if length is None:
            raise ValueError("a window length is required for a sequence spec")
        return source.prefix(length)
    word = list(source)
    return word if length is None else word[:length]


def _symbols(word: Sequence[Hashable]) -> tuple[list[int], int]:
    ids: dict = {}
    out = [ids.setdefault(x, len(ids)) for x in word]
    return out, len(ids)


# --- subword complexity --------------------------------------------------------

def factor_counts(word: Sequence[Hashable], m_max: int) -> list[int]:
    """``counts[m]`` = number of distinct length-``m`` factors, for ``0 <= m <= m_max``.

    Built on a suffix automaton: each state ``v`` owns exactly the factors of
    lengths ``len(link(v))+1 .. len(v)``, so a difference array over those
    ranges gives all counts in linear time.
    """
    syms, _ = _symbols(word)
    length = [0]
    link = [-1]
    trans: list[dict[int, int]] = [{}]
    last = 0
    for c in syms:
        cur = len(length)
        length.append(length[last] + 1)
        link.append(-1)
        trans.append({})
        p = last
        while p != -1 and c not in trans[p]:
            trans[p][c] = cur
            p = link[p]
        if p == -1:
            link[cur] = 0
        else:
            q = trans[p][c]
            if length[p] + 1 == length[q]:
                link[cur] = q
            else:
                clone = len(length)
                length.append(length[p] + 1)
                link.append(link[q])
                trans.append(dict(trans[q]))
                while p != -1 and trans[p].get(c) == q:
                    trans[p][c] = clone
                    p = link[p]
                link[q] = clone
                link[cur] = clone
        last = cur
    diff = [0] * (m_max + 2)
    for v in range(1, len(length)):
        lo = length[link[v]] + 1
        hi = min(length[v], m_max)
        if lo <= hi:
            diff[lo] += 1
            diff[hi + 1] -= 1
    counts = [1]
    run = 0
    for m in range(1, m_max + 1):
        run += diff[m]
        counts.append(run)
    return counts


@dataclass
class ComplexityReport:
    """Distinct factor counts of a length-``window`` prefix (lower bounds for the infinite word)."""

    window: int
    counts: list[int]
    alphabet: int
    bound: dict | None = None

    def p(self, m: int) -> int:
        return self.counts[m]

    @property
    def m_max(self) -> int:
        return len(self.counts) - 1

    def to_dict(self) -> dict:
        out = {"window": self.window, "alphabet_size": self.alphabet,
               "counts_are_lower_bounds": True,
               "p": {str(m): self.counts[m] for m in range(1, len(self.counts))}}
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def complexity(source: SequenceSpec | Sequence, window: int, m_max: int) -> ComplexityReport:
    if not window >= m_max >= 1:
        raise SpecError("need window >= m_max >= 1")
    word = as_word(source, window)
    if len(word) < window:
        raise SpecError(f"word has only {len(word)} symbols, window {window} requested")
    return ComplexityReport(window, factor_counts(word, m_max), len(set(word)))


def check_complexity_bound(report: ComplexityReport, b: int, d: int, k: int) -> dict:
    """Flag ``p(m) <= b**(2d) * k * m`` for each ``m``."""
    base = b ** (2 * d) * k
    rows = []
    for m in range(1, report.m_max + 1):
        rows.append({"m": m, "p": report.counts[m], "bound": base * m,
                     "ok": report.counts[m] <= base * m})
    failed = [r["m"] for r in rows if not r["ok"]]
    result = {"b": b, "d": d, "k": k, "ok": not failed, "failed_m": failed, "rows": rows}
    report.bound = result
    return result


# --- periodicity ---------------------------------------------------------------------

@dataclass
class PeriodicityReport:
    window: int
    periods: list[tuple[int, int]]
    constant_progressions: list[tuple[int, int]]

    def to_dict(self) -> dict:
        return {"window": self.window, "finite_window_evidence": True,
                "periods": [{"N": n, "l": l} for n, l in self.periods],
                "constant_progressions": [{"N": n, "l": l} for n, l in self.constant_progressions]}


def detect_periodicity(source: SequenceSpec | Sequence, window: int, l_max: int,
                       n_max: int) -> PeriodicityReport:
    """Eventual periods and constant arithmetic progressions seen in a finite window.

    ``periods`` lists, for each ``l <= l_max``, the least ``N <= n_max`` with
    ``a(n) = a(n+l)`` for all ``N <= n < window - l`` (every larger ``N`` then
    works too).  ``constant_progressions`` lists ``(N, l)`` with ``a(N + l n)``
    constant across the window.
    """
    if window <= n_max + 2 * l_max:
        raise SpecError(f"window {window} must exceed N_max + 2*l_max = {n_max + 2 * l_max}")
    word = as_word(source, window)
    periods = []
    for l in range(1, l_max + 1):
        last_bad = -1
        for n in range(window - l - 1, -1, -1):
            if word[n] != word[n + l]:
                last_bad = n
                break
        if last_bad + 1 <= n_max:
            periods.append((last_bad + 1, l))
    progressions = []
    for l in range(1, l_max + 1):
        for start in range(n_max + 1):
            first = word[start]
            if all(word[i] == first for i in range(start, window, l)):
                progressions.append((start, l))
    return PeriodicityReport(window, periods, progressions)


# --- long repetitions -------------------------------------------------------------------

_MOD = (1 << 61) - 1
_BASE = 1_000_003


@dataclass(frozen=True)
class RepetitionDecomposition:
    """Prefix ``U V W V`` with the given lengths."""

    u: int
    v: int
    w: int

    def validate(self, word: Sequence) -> bool:
        a = self.u
        b = self.u + self.v + self.w
        return self.v > 0 and b + self.v <= len(word) and list(word[a:a + self.v]) == list(word[b:b + self.v])

    def to_dict(self) -> dict:
        return {"U": [0, self.u], "V": [self.u, self.u + self.v],
                "W": [self.u + self.v, self.u + self.v + self.w],
                "V_again": [self.u + self.v + self.w, self.u + 2 * self.v + self.w],
                "U_over_V": self.u / self.v, "W_over_V": self.w / self.v}


def long_repetitions(source: SequenceSpec | Sequence, window: int,
                     ratio_caps: tuple[float, float] = (4.0, 4.0),
                     schedule: Sequence[int] | None = None) -> list[tuple[int, RepetitionDecomposition | None]]:
    """For each scale ``|V|``, the first prefix factorization ``U V W V`` within the caps.

    Candidate positions come from a rolling hash; every reported match is
    confirmed symbol by symbol.
    """
    if window < 4:
        raise SpecError("window must be at least 4")
    word, _ = _symbols(as_word(source, window))
    n = len(word)
    cu, cw = ratio_caps
    if schedule is None:
        schedule = []
        v = 8
        while 2 * v <= n:
            schedule.append(v)
            v *= 2
    prefix = [0] * (n + 1)
    for i, c in enumerate(word):
        prefix[i + 1] = (prefix[i] * _BASE + c + 1) % _MOD
    out = []
    for v in schedule:
        powv = pow(_BASE, v, _MOD)
        u_max = int(cu * v)
        w_max = int(cw * v)
        last_start = min(n - v, u_max + v + w_max)

        def h(p: int) -> int:
            return (prefix[p + v] - prefix[p] * powv) % _MOD

        where: dict[int, list[int]] = {}
        for p in range(0, last_start + 1):
            where.setdefault(h(p), []).append(p)
        found = None
        for u in range(0, min(u_max, n - 2 * v) + 1):
            for p in where.get(h(u), ()):
                if u + v <= p <= u + v + w_max and word[u:u + v] == word[p:p + v]:
                    found = RepetitionDecomposition(u, v, p - u - v)
                    break
            if found:
                break
        out.append((v, found))
    return out


# --- block decomposition of Cartier systems ------------------------------------------------

class FractalMismatch(HypothesisError):
    """The block identity failed; ``location`` is ``(n, j)`` at kernel level ``level``."""

    def __init__(self, message: str, location: tuple[int, int], level: int = 0):
        super().__init__(message)
        self.location = location
        self.level = level


@dataclass
class FractalDecomposition:
    """Level-``y`` blocks: index ``n k^y + j`` carries ``B_{j,y} A_y(n)``.

    ``coords[n]`` is ``A_y(n)`` in the standard basis, so ``blocks[i][j] = B_{j,y} e_i``.
    """

    level: int
    radix: int
    boundary: list[linalg.Matrix]
    blocks: list[list[linalg.Vector]]
    coords: list[linalg.Vector]
    n_max: int
    checked_terms: int = 0
    target_checked: bool = False

    def to_dict(self) -> dict:
        def vec(v):
            return [str(x) for x in v]
        return {
            "level": self.level,
            "n_max": self.n_max,
            "checked_terms": self.checked_terms,
            "target_checked": self.target_checked,
            "boundary_maps": [[vec(r) for r in b] for b in self.boundary],
            "coordinates": [vec(c) for c in self.coords[: self.n_max + 1]],
        }


def boundary_maps(sys: CartierSystem, y: int) -> list[linalg.Matrix]:
    """``B_{j,y} = C_{j_1,0} C_{j_2,1} ... C_{j_y,y-1}`` for ``j = j_1 + j_2 k + ...``."""
    k = sys.radix
    maps = [linalg.identity(sys.dim)]
    for level in range(y):
        step = k ** level
        nxt = [None] * (step * k)
        for j_low, b in enumerate(maps):
            for digit in range(k):
                nxt[j_low + digit * step] = linalg.mat_mul(b, sys.C(digit, level))
        maps = nxt
    return maps


def fractal_decompose(sys: CartierSystem, y: int, n_max: int,
                      target: SequenceSpec | None = None,
                      reference: CartierSystem | None = None) -> FractalDecomposition:
    """Decompose the level-0 vector sequence into images of level-``y`` vectors.

    Both vector sequences are read from the generating-function route, and the
    identity ``A_0(n k^y + j) = B_{j,y} A_y(n)`` is checked for ``n <= n_max``.
    The declared seeds must match the computed constant terms.  With
    ``target`` the first coordinate is also compared with an independent
    evaluation of the sequence, which is what exposes a corrupted table.
    Entries that only feed the companion coordinates leave the sequence
    unchanged; ``reference`` catches those by comparing the vectors of every
    level ``0..y`` with a trusted system unrolled digit by digit.
    """
    if y < 0 or n_max < 0:
        raise ValueError("level and n_max must be nonnegative")
    k = sys.radix
    span = k ** y
    total = (n_max + 1) * span
    series = level_series(cartier_to_product(sys), max(total, n_max + 2), y)
    d = sys.dim

    def at(level: int, n: int) -> tuple[Scalar, ...]:
        return tuple(series[level][i][n] for i in range(d))

    for lv in range(y + 1):
        if at(lv, 0) != sys.seed(lv):
            raise FractalMismatch(f"level {lv}: seed does not match the product constant term",
                                  (0, 0))
    maps = boundary_maps(sys, y)
    coords = [at(y, n) for n in range(n_max + 2)]
    for n in range(n_max + 1):
        for j in range(span):
            m = n * span + j
            got = linalg.mat_vec(maps[j], coords[n])
            if got != at(0, m):
                raise FractalMismatch(f"block identity fails at n={n}, j={j}", (n, j))
            if target is not None and got[0] != target.value(m):
                raise FractalMismatch(
                    f"term {m} (n={n}, j={j}): system gives {got[0]}, sequence gives "
                    f"{target.value(m)}", (n, j))
    if reference is not None:
        for lv in range(y + 1):
            step = k ** (y - lv)
            for i in range((n_max + 1) * step):
                if at(lv, i) != reference.vector(lv, i):
                    raise FractalMismatch(
                        f"level {lv} vector {i} differs from the reference system",
                        divmod(i, step), lv)
    eye = linalg.identity(d)
    blocks = [[linalg.mat_vec(b, eye[i]) for b in maps] for i in range(d)]
    return FractalDecomposition(y, k, maps, blocks, coords, n_max, total, target is not None)


def fractal_copy_census(dec: FractalDecomposition) -> dict:
    """Distinct consecutive coordinate pairs ``(A_y(n), A_y(n+1))`` for ``n <= n_max``.

    Any factor of length at most ``k^y`` sits inside two consecutive blocks,
    so ``census * k^y`` bounds the number of such factors that were observed.
    """
    pairs = {(dec.coords[n], dec.coords[n + 1]) for n in range(dec.n_max + 1)}
    span = dec.radix ** dec.level
    return {"level": dec.level, "pairs": len(pairs), "block_length": span,
            "factor_bound": len(pairs) * span}
