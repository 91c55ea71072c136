"""Power-series prefixes with explicit truncation order."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import HypothesisError
from .poly import Poly, PolyMatrix, as_scalar
from .scalar import Scalar

__all__ = ["TruncatedSeries", "NotAPowerSeries", "matrix_apply", "series_mul",
           "series_substitute_power"]

_ZERO = Scalar(0)


class NotAPowerSeries(HypothesisError):
    """A quotient has a pole at z = 0."""


class TruncatedSeries:
    """The series ``sum c_i z**i`` known exactly modulo ``z**trunc_order``.

    ``coeffs`` always has length ``trunc_order``; nothing is claimed about
    coefficients at or beyond it.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, trunc_order: int | None = None):
        c = [as_scalar(x) for x in coeffs]
        if trunc_order is not None:
            if trunc_order < len(c):
                c = c[:trunc_order]
            else:
                c.extend([_ZERO] * (trunc_order - len(c)))
        self.coeffs: tuple[Scalar, ...] = tuple(c)

    @classmethod
    def zero(cls, n: int) -> TruncatedSeries:
        return cls((), n)

    @classmethod
    def constant(cls, c, n: int) -> TruncatedSeries:
        return cls((c,) if n else (), n)

    @classmethod
    def from_poly(cls, p: Poly, n: int) -> TruncatedSeries:
        return cls(p.coeffs[:n], n)

    @classmethod
    def from_rational(cls, num: Poly, den: Poly, n: int) -> TruncatedSeries:
        """Expand ``num / den``; raises :class:`NotAPowerSeries` on a pole at 0."""
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            return cls.zero(n)
        vd = den.valuation()
        vn = num.valuation()
        if vn < vd:
            raise NotAPowerSeries(f"quotient has a pole of order {vd - vn} at z=0")
        num = Poly(num.coeffs[vd:])
        den = Poly(den.coeffs[vd:])
        return cls.from_poly(num, n).divide(cls.from_poly(den, n))

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or ``None`` if the whole prefix vanishes."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def ord_report(self) -> str:
        v = self.valuation()
        return f">= {self.trunc_order}" if v is None else str(v)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, n: int) -> TruncatedSeries:
        if n > self.trunc_order:
            raise ValueError(f"cannot extend a series known to order {self.trunc_order} to {n}")
        return TruncatedSeries(self.coeffs[:n])

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        return TruncatedSeries(x + y for x, y in zip(self.coeffs, other.coeffs))

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return TruncatedSeries(x - y for x, y in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return TruncatedSeries(-x for x in self.coeffs)

    def scale(self, c) -> TruncatedSeries:
        c = as_scalar(c)
        return TruncatedSeries(x * c for x in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        if isinstance(other, Poly):
            return self.mul_poly(other)
        return self.scale(other)

    __rmul__ = __mul__

    def mul_poly(self, p: Poly) -> TruncatedSeries:
        """``p * self``; the truncation order is unchanged."""
        n = self.trunc_order
        out = [_ZERO] * n
        src = [(i, x) for i, x in enumerate(self.coeffs) if x]
        for j, c in enumerate(p.coeffs[:n]):
            if c:
                for i, x in src:
                    if i + j >= n:
                        break
                    out[i + j] = out[i + j] + c * x
        return TruncatedSeries(out)

    def divide(self, other: TruncatedSeries) -> TruncatedSeries:
        """Series quotient; ``other`` needs a nonzero constant term."""
        n = min(self.trunc_order, other.trunc_order)
        if n == 0:
            return TruncatedSeries(())
        if not other.coeffs[0]:
            raise NotAPowerSeries("divisor has zero constant term")
        inv0 = other.coeffs[0].inverse()
        b = [(j, y) for j, y in enumerate(other.coeffs[:n]) if y and j]
        out: list[Scalar] = []
        for i in range(n):
            acc = self.coeffs[i]
            for j, y in b:
                if j > i:
                    break
                acc = acc - y * out[i - j]
            out.append(acc * inv0)
        return TruncatedSeries(out)

    def substitute_power(self, e: int) -> TruncatedSeries:
        return series_substitute_power(self, e)

    def to_poly(self) -> Poly:
        return Poly(self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:12])
        more = ", ..." if self.trunc_order > 12 else ""
        return f"TruncatedSeries([{shown}{more}], N={self.trunc_order})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product of prefixes, known to ``min`` of the input orders."""
    n = min(a.trunc_order, b.trunc_order)
    out = [_ZERO] * n
    bb = [(j, y) for j, y in enumerate(b.coeffs[:n]) if y]
    for i, x in enumerate(a.coeffs[:n]):
        if x:
            lim = n - i
            for j, y in bb:
                if j >= lim:
                    break
                out[i + j] = out[i + j] + x * y
    return TruncatedSeries(out)


def series_substitute_power(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """``a(z**e)``, still known modulo ``z**N`` for the same ``N``."""
    if e < 1:
        raise ValueError("exponent must be positive")
    n = a.trunc_order
    if e == 1:
        return a
    out = [_ZERO] * n
    for i in range(0, (n - 1) // e + 1 if n else 0):
        out[i * e] = a.coeffs[i]
    return TruncatedSeries(out)


def matrix_apply(m: PolyMatrix, v: Sequence[TruncatedSeries]) -> list[TruncatedSeries]:
    """Row-wise sums of polynomial-times-series products."""
    if m.cols != len(v):
        raise ValueError(f"matrix has {m.cols} columns but vector has {len(v)} entries")
    n = min((s.trunc_order for s in v), default=0)
    v = [s if s.trunc_order == n else s.truncate(n) for s in v]
    out = []
    for row in m.entries:
        acc = [_ZERO] * n
        for p, s in zip(row, v):
            if not p:
                continue
            src = [(i, x) for i, x in enumerate(s.coeffs) if x]
            for j, c in enumerate(p.coeffs[:n]):
                if c:
                    for i, x in src:
                        if i + j >= n:
                            break
                        acc[i + j] = acc[i + j] + c * x
        out.append(TruncatedSeries(acc))
    return out
