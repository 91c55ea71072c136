"""Dense univariate polynomials and polynomial matrices over Q(zeta_L)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import Scalar

__all__ = ["Poly", "PolyMatrix", "as_scalar"]


def as_scalar(x) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x)


class Poly:
    """Polynomial in ``z`` with canonical coefficient tuple (lowest degree first).

    The zero polynomial has no coefficients and ``degree == -1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_scalar(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs: tuple[Scalar, ...] = tuple(c)

    @classmethod
    def monomial(cls, coeff, exponent: int) -> Poly:
        return cls([0] * exponent + [coeff])

    @classmethod
    def z(cls) -> Poly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Scalar(0)

    def valuation(self) -> int | None:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def leading(self) -> Scalar:
        return self.coeffs[-1]

    def __eq__(self, other):
        if _is_number(other):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if _is_number(other):
            s = as_scalar(other)
            return Poly([c * s for c in self.coeffs])
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Scalar(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        b = [(j, y) for j, y in enumerate(other.coeffs) if y]
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in b:
                    out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        result = Poly([1])
        for _ in range(e):
            result = result * self
        return result

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        db = other.degree
        lead_inv = other.leading().inverse()
        q = [Scalar(0)] * max(0, len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c:
                t = c * lead_inv
                q[i - db] = t
                for j, bj in enumerate(other.coeffs):
                    if bj:
                        r[i - db + j] = r[i - db + j] - t * bj
        return Poly(q), Poly(r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> Poly:
        return self * self.leading().inverse() if self else self

    def __call__(self, x):
        acc = Scalar(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly([c * i for i, c in enumerate(self.coeffs)][1:])

    def substitute_power(self, e: int) -> Poly:
        """``p(z**e)``."""
        if e < 1:
            raise ValueError("exponent must be positive")
        if e == 1 or not self.coeffs:
            return self
        out = [Scalar(0)] * (self.degree * e + 1)
        for i, c in enumerate(self.coeffs):
            out[i * e] = c
        return Poly(out)

    def shift(self, m: int) -> Poly:
        """``z**m * p``."""
        return Poly([0] * m + list(self.coeffs)) if self.coeffs else self

    def truncate(self, n: int) -> Poly:
        return Poly(self.coeffs[:n])

    def segment(self, lo: int, hi: int) -> Poly:
        """Terms with exponent in ``[lo, hi)``, keeping their positions."""
        return Poly([0] * lo + list(self.coeffs[lo:hi])) if lo < len(self.coeffs) else Poly()

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms).replace("+ -", "- ")


def _is_number(x) -> bool:
    return isinstance(x, (int, Fraction, Scalar))


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if _is_number(x):
        return Poly([x])
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


class PolyMatrix:
    """A rows x cols grid of polynomials with an optional declared degree bound."""

    __slots__ = ("rows", "cols", "entries", "degree_bound")

    def __init__(self, entries: Sequence[Sequence], degree_bound: int | None = None):
        grid = tuple(tuple(_as_poly(e) for e in row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix must be nonempty")
        if any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("ragged matrix rows")
        if degree_bound is not None:
            for i, row in enumerate(grid):
                for j, p in enumerate(row):
                    if p.degree > degree_bound:
                        raise ValueError(
                            f"entry ({i},{j}) has degree {p.degree} > bound {degree_bound}")
        self.rows = len(grid)
        self.cols = len(grid[0])
        self.entries = grid
        self.degree_bound = degree_bound

    @classmethod
    def identity(cls, d: int) -> PolyMatrix:
        return cls([[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @classmethod
    def from_coefficients(cls, mats: Sequence[Sequence[Sequence]],
                          degree_bound: int | None = None) -> PolyMatrix:
        """Build ``sum_j z**j * mats[j]`` from scalar matrices."""
        r, c = len(mats[0]), len(mats[0][0])
        return cls([[Poly([m[i][j] for m in mats]) for j in range(c)] for i in range(r)],
                   degree_bound)

    def coefficient(self, j: int) -> tuple[tuple[Scalar, ...], ...]:
        """Scalar matrix of the ``z**j`` coefficients."""
        return tuple(tuple(p[j] for p in row) for row in self.entries)

    @property
    def degree(self) -> int:
        return max(p.degree for row in self.entries for p in row)

    def __getitem__(self, ij: tuple[int, int]) -> Poly:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __matmul__(self, other: PolyMatrix) -> PolyMatrix:
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Poly()
                for t in range(self.cols):
                    a, b = self.entries[i][t], other.entries[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def substitute_power(self, e: int) -> PolyMatrix:
        return PolyMatrix([[p.substitute_power(e) for p in row] for row in self.entries])

    def __repr__(self):
        return f"PolyMatrix({[[str(p) for p in row] for row in self.entries]})"
