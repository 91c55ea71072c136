"""Polynomial approximation pairs and range-limited checks of the growth conditions
that bound an irrationality measure."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import HypothesisError, SpecError, TruncationError
from .generators import InfiniteProduct
from .poly import Poly
from .scalar import Scalar
from .sequences import gen_series
from .series import TruncatedSeries
from .sturm import positive_rooted, real_rooted

__all__ = ["PadePair", "DNParams", "pade_solve", "certified_order", "dn_check",
           "block_pair", "quadratic_pair", "quadratic_key_inequality", "measure_witness_check",
           "real_rooted", "positive_rooted"]


def certified_order(f: TruncatedSeries, q: Poly, p: Poly) -> int:
    """``ord(Q f - P)``, capped at the truncation order of ``f``."""
    r = f.mul_poly(q) - TruncatedSeries.from_poly(p, f.trunc_order)
    v = r.valuation()
    return f.trunc_order if v is None else v


@dataclass(frozen=True)
class PadePair:
    n: int
    P: Poly
    Q: Poly
    order: int
    truncation: int

    def __post_init__(self):
        if not self.Q:
            raise SpecError("Q must be nonzero")
        if self.order > self.truncation:
            raise SpecError("certified order cannot exceed the truncation")

    def recheck(self, f: TruncatedSeries) -> bool:
        n = min(self.truncation, f.trunc_order)
        return certified_order(f.truncate(n), self.Q, self.P) >= self.order

    def to_dict(self) -> dict:
        return {"n": self.n, "P": [str(c) for c in self.P.coeffs],
                "Q": [str(c) for c in self.Q.coeffs],
                "degP": self.P.degree, "degQ": self.Q.degree,
                "certified_order": self.order, "truncation": self.truncation}


@dataclass(frozen=True)
class DNParams:
    """Growth constants; ``m(i) = table[i]`` and then grows by ``slope`` per step."""

    c1: Fraction
    c2: Fraction
    c3: int
    r: int
    m_table: tuple[int, ...] = (0,)
    m_slope: int = 1

    def __post_init__(self):
        if not 0 < self.c1 < self.c2:
            raise SpecError("need 0 < c1 < c2")
        if self.c3 < 1:
            raise SpecError("need c3 >= 1")
        if not self.m_table or self.m_table[0] < 0:
            raise SpecError("m must start at a nonnegative value")
        steps = [b - a for a, b in zip(self.m_table, self.m_table[1:])] + [self.m_slope]
        if any(not 1 <= s <= self.c3 for s in steps):
            raise SpecError("m must increase with steps between 1 and c3")

    def m(self, i: int) -> int:
        if i < len(self.m_table):
            return self.m_table[i]
        return self.m_table[-1] + self.m_slope * (i - len(self.m_table) + 1)


def pade_solve(f: TruncatedSeries, deg_q: int, deg_p: int, ord_target: int,
               n: int = 0) -> PadePair | None:
    """Exact solve for ``ord(Q f - P) >= ord_target``; ``None`` when only ``Q = 0`` works.

    ``Q`` is scaled so that ``Q(0) = 1`` when possible, otherwise its lowest
    nonzero coefficient is 1.
    """
    if f.trunc_order < ord_target:
        raise TruncationError(
            f"series known to order {f.trunc_order}; need at least {ord_target} coefficients")
    nq, np_ = deg_q + 1, deg_p + 1
    zero, one = Scalar(0), Scalar(1)
    rows = []
    for m in range(ord_target):
        row = [f[m - i] if m >= i else zero for i in range(nq)]
        row += [-one if m == i else zero for i in range(np_)]
        rows.append(row)
    basis = linalg.nullspace(rows, nq + np_)
    vec = None
    for v in basis:
        if any(v[:nq]):
            vec = v
            break
    if vec is None:
        return None
    # prefer a solution with nonzero constant term in Q when the space allows one
    with_const = next((v for v in basis if v[0]), None)
    if with_const is not None:
        vec = with_const
    q_coeffs = vec[:nq]
    lead = q_coeffs[0] if q_coeffs[0] else next(x for x in q_coeffs if x)
    vec = tuple(x / lead for x in vec)
    q, p = Poly(vec[:nq]), Poly(vec[nq:])
    return PadePair(n, p, q, certified_order(f, q, p), f.trunc_order)


def dn_check(f: TruncatedSeries, pairs: Sequence[PadePair], params: DNParams) -> dict:
    """Per-index verification of the three growth and nonvanishing conditions.

    Pair ``i`` in the list is compared with pair ``i+1``; the result is a
    certificate for the tested range only.
    """
    rows = []
    for i, pair in enumerate(pairs):
        scale = params.r ** params.m(i)
        row: dict = {"index": i, "n": pair.n, "m": params.m(i)}
        if i + 1 < len(pairs):
            nxt = pairs[i + 1]
            cross = pair.P * nxt.Q - nxt.P * pair.Q
            row["cross_nonzero"] = bool(cross)
        else:
            row["cross_nonzero"] = None
        row["degree_ok"] = max(pair.P.degree, pair.Q.degree) <= params.c1 * scale
        order = certified_order(f.truncate(min(f.trunc_order, pair.truncation)), pair.Q, pair.P)
        row["order"] = order
        row["order_ok"] = order >= params.c2 * scale
        row["ok"] = row["degree_ok"] and row["order_ok"] and row["cross_nonzero"] is not False
        rows.append(row)
    return {"ok": all(r["ok"] for r in rows) and len(pairs) >= 2,
            "range": [pairs[0].n, pairs[-1].n] if pairs else [],
            "range_limited": True, "rows": rows}


def _block_multipliers(f: TruncatedSeries, span: int, count: int) -> list[Scalar]:
    """Leading coefficient of each length-``span`` block; block ``b`` is ``f_b`` times block 0."""
    return [f[b * span] for b in range(count)]


def block_pair(product: InfiniteProduct, level: int, s: int, t: int) -> PadePair:
    """Pair built from the block structure of a full-degree lacunary product.

    With ``K = k^level`` the coefficient word splits into blocks ``f_b A`` of
    length ``K``.  For ``rho = f_t / f_s`` put ``Q = 1 - rho z^{(t-s)K}`` and
    ``P = sum_{b<t} F_b - rho z^{(t-s)K} sum_{b<s} F_b`` (``F_b`` the blocks);
    then ``Q f - P`` starts at block ``t+1``.
    """
    k = product.radix
    if product.degree != k - 1:
        raise SpecError(f"the factors must have full degree k-1 = {k - 1}")
    if not 1 <= s < t <= k - 1:
        raise SpecError(f"need 1 <= s < t <= {k - 1}")
    span = k ** level
    truncation = (t + 2) * span
    for y in range(level + 2):
        for j in range(1, k):
            if not product.a(j, y):
                raise HypothesisError(f"hypothesis 1 fails: coefficient a_({j},{y}) is zero")
    f = gen_series(product, truncation)
    mult = _block_multipliers(f, span, t + 1)
    if not mult[s]:
        raise HypothesisError(f"block multiplier f_{s} vanishes at level {level}")
    if mult[t] * mult[s - 1] == mult[t - 1] * mult[s]:
        raise HypothesisError(
            f"ratio condition fails at level {level}: f_{t}/f_{s} = f_{t - 1}/f_{s - 1}")
    rho = mult[t] / mult[s]
    shift = (t - s) * span
    q = Poly([1]) - Poly.monomial(rho, shift)
    head = f.to_poly().segment(0, t * span)
    low = f.to_poly().segment(0, s * span)
    p = head - (low * rho).shift(shift)
    order = certified_order(f, q, p)
    want = (t + 1) * span
    if order < want:
        raise HypothesisError(f"certified order {order} < {want} at level {level}")
    return PadePair(level, p, q, order, truncation)


def quadratic_pair(product: InfiniteProduct, n: int) -> PadePair:
    """Pair for ``prod (1 + a_{1,y} z^{2^y} + a_{2,y} z^{2^{y+1}})`` at a qualifying level ``n``.

    The level must satisfy ``a_{1,n+1} + a_{2,n} = a_{1,n} a_{1,n+1} = a_{1,n} != 1``; then
    coefficients ``[3N, 4N)`` repeat ``[2N, 3N)`` with ``N = 2^n``, and
    ``Q = 1 - z^N``, ``P = (P_0 + P_1) Q + P_2`` certify order ``4N``.
    """
    if product.radix != 2 or product.degree != 2:
        raise SpecError("need a radix-2 product with quadratic factors")
    a1n, a2n, a1m = product.a(1, n), product.a(2, n), product.a(1, n + 1)
    if a1m + a2n != a1n * a1m:
        raise HypothesisError(f"level {n}: a_1(n+1) + a_2(n) != a_1(n) a_1(n+1)")
    if a1m + a2n != a1n:
        raise HypothesisError(f"level {n}: a_1(n+1) + a_2(n) != a_1(n)")
    if a1n == 1:
        raise HypothesisError(f"level {n}: a_1(n) = 1")
    span = 2 ** n
    truncation = 5 * span
    f = gen_series(product, truncation)
    fp = f.to_poly()
    p0, p1, p2 = fp.segment(0, span), fp.segment(span, 2 * span), fp.segment(2 * span, 3 * span)
    q = Poly([1]) - Poly.monomial(1, span)
    p = (p0 + p1) * q + p2
    order = certified_order(f, q, p)
    if order < 4 * span:
        raise HypothesisError(f"certified order {order} < {4 * span} at level {n}")
    return PadePair(n, p, q, order, truncation)


def quadratic_key_inequality(product: InfiniteProduct, n: int) -> bool:
    """``P_1 z^N != P_2`` for the segments used by :func:`quadratic_pair`."""
    span = 2 ** n
    fp = gen_series(product, 3 * span).to_poly()
    return fp.segment(span, 2 * span).shift(span) != fp.segment(2 * span, 3 * span)


def measure_witness_check(f: TruncatedSeries, a: Poly, b: Poly, mu: Fraction | int,
                          m: int) -> dict:
    """Does ``(A, B)`` respect ``ord(A f - B) <= mu M``?"""
    if not a and not b:
        raise SpecError("A and B cannot both be zero")
    if max(a.degree, b.degree) > m:
        raise SpecError(f"max(deg A, deg B) exceeds M = {m}")
    limit = Fraction(mu) * m
    if f.trunc_order <= limit:
        raise TruncationError(f"series must be known beyond order {limit}")
    r = f.mul_poly(a) - TruncatedSeries.from_poly(b, f.trunc_order)
    v = r.valuation()
    return {"ok": v is not None and v <= limit,
            "order": v if v is not None else f">= {f.trunc_order}",
            "limit": str(limit)}
