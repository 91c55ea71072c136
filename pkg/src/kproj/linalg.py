"""Exact dense linear algebra over Scalars (small matrices only)."""

from __future__ import annotations

from typing import Sequence

from .poly import as_scalar
from .scalar import Scalar

Matrix = tuple[tuple[Scalar, ...], ...]
Vector = tuple[Scalar, ...]


def matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(as_scalar(x) for x in row) for row in rows)


def vector(xs: Sequence) -> Vector:
    return tuple(as_scalar(x) for x in xs)


def identity(d: int) -> Matrix:
    one, zero = Scalar(1), Scalar(0)
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def mat_vec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        acc = Scalar(0)
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(_dot(row, col) for col in cols) for row in a)


def _dot(u, v) -> Scalar:
    acc = Scalar(0)
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def rref(rows: Sequence[Sequence[Scalar]], ncols: int) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else x for x in m[r]]
        piv = m[r]
        nz = [(j, x) for j, x in enumerate(piv) if x]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row = m[i]
                for j, x in nz:
                    row[j] = row[j] - f * x
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int) -> list[Vector]:
    """Basis of ``{x : A x = 0}``, one vector per free column, in column order."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Scalar(0)] * ncols
        x[f] = Scalar(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis
