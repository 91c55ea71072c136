"""Declarative sequence specifications with memoized exact evaluation.

Every specification is an immutable node.  Generator kinds live here and in
:mod:`kproj.generators` / :mod:`kproj.mahler`; combinators wrap child nodes
and never materialize them eagerly.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import SpecError
from .poly import as_scalar
from .scalar import Scalar
from .series import TruncatedSeries

__all__ = [
    "SequenceSpec", "SpecError", "ExplicitPrefix", "Add", "PointwiseMul", "ScalarMul",
    "Cauchy", "ArithSubseq", "BarTransform", "eval_term", "prefix", "gen_series", "cartier",
    "kernel_level", "add", "pointwise_mul", "scalar_mul", "cauchy", "arith_subseq",
    "bar_transform", "ones", "zeros", "delta",
]


class SequenceSpec:
    """Base class for sequence nodes.

    Subclasses implement :meth:`_compute`.  ``value`` memoizes into a plain
    dict; concurrent readers may race to fill a slot but always store the
    same value, so no lock is needed.
    """

    kind = "abstract"

    def __init__(self, radix: int, field_order: int = 1):
        if radix < 2:
            raise SpecError(f"radix must be at least 2, got {radix}")
        if field_order < 1:
            raise SpecError("cyclotomic order must be positive")
        self.radix = radix
        self.field_order = field_order
        self._memo: dict[int, Scalar] = {}

    def value(self, n: int) -> Scalar:
        if n < 0:
            raise ValueError("sequence index must be nonnegative")
        v = self._memo.get(n)
        if v is None:
            v = self._compute(n)
            self._memo[n] = v
        return v

    __call__ = value

    def _compute(self, n: int) -> Scalar:
        raise NotImplementedError

    def prefix(self, n: int) -> list[Scalar]:
        return [self.value(i) for i in range(n)]

    @property
    def children(self) -> tuple[SequenceSpec, ...]:
        return ()

    def __repr__(self):
        return f"<{type(self).__name__} k={self.radix} L={self.field_order}>"


def _joint_order(a: int, b: int) -> int:
    if a % b == 0:
        return a
    if b % a == 0:
        return b
    raise SpecError(f"scalar fields Q(zeta_{a}) and Q(zeta_{b}) are incompatible")


def _check_pair(a: SequenceSpec, b: SequenceSpec) -> tuple[int, int]:
    if a.radix != b.radix:
        raise SpecError(f"radix mismatch: {a.radix} vs {b.radix}")
    return a.radix, _joint_order(a.field_order, b.field_order)


class ExplicitPrefix(SequenceSpec):
    """Finitely many listed values followed by a constant pad."""

    kind = "explicit_prefix"

    def __init__(self, values: Iterable, pad=0, radix: int = 2, field_order: int = 1):
        super().__init__(radix, field_order)
        self.values = tuple(as_scalar(v) for v in values)
        self.pad = as_scalar(pad)

    def _compute(self, n):
        return self.values[n] if n < len(self.values) else self.pad


def ones(radix: int = 2) -> ExplicitPrefix:
    return ExplicitPrefix((), 1, radix)


def zeros(radix: int = 2) -> ExplicitPrefix:
    return ExplicitPrefix((), 0, radix)


def delta(radix: int = 2) -> ExplicitPrefix:
    """The unit for Cauchy convolution: 1, 0, 0, ..."""
    return ExplicitPrefix((1,), 0, radix)


class Add(SequenceSpec):
    kind = "add"

    def __init__(self, a: SequenceSpec, b: SequenceSpec):
        super().__init__(*_check_pair(a, b))
        self.a, self.b = a, b

    @property
    def children(self):
        return (self.a, self.b)

    def _compute(self, n):
        return self.a.value(n) + self.b.value(n)


class PointwiseMul(SequenceSpec):
    kind = "pointwise_mul"

    def __init__(self, a: SequenceSpec, b: SequenceSpec):
        super().__init__(*_check_pair(a, b))
        self.a, self.b = a, b

    @property
    def children(self):
        return (self.a, self.b)

    def _compute(self, n):
        return self.a.value(n) * self.b.value(n)


class ScalarMul(SequenceSpec):
    kind = "scalar_mul"

    def __init__(self, c, a: SequenceSpec):
        c = as_scalar(c)
        super().__init__(a.radix, _joint_order(c.order, a.field_order))
        self.c, self.a = c, a

    @property
    def children(self):
        return (self.a,)

    def _compute(self, n):
        return self.c * self.a.value(n)


class Cauchy(SequenceSpec):
    """Convolution ``sum_{i<=n} a(i) b(n-i)``."""

    kind = "cauchy"

    def __init__(self, a: SequenceSpec, b: SequenceSpec):
        super().__init__(*_check_pair(a, b))
        self.a, self.b = a, b

    @property
    def children(self):
        return (self.a, self.b)

    def _compute(self, n):
        acc = Scalar(0)
        for i in range(n + 1):
            x = self.a.value(i)
            if x:
                y = self.b.value(n - i)
                if y:
                    acc = acc + x * y
        return acc


class ArithSubseq(SequenceSpec):
    """``n -> a(offset + step * n)``; the Cartier operator is the case ``step == k``."""

    kind = "arith_subseq"

    def __init__(self, a: SequenceSpec, offset: int, step: int):
        if offset < 0:
            raise SpecError("arithmetic subsequence offset must be nonnegative")
        if step < 1:
            raise SpecError("arithmetic subsequence step must be at least 1")
        super().__init__(a.radix, a.field_order)
        self.a, self.offset, self.step = a, offset, step

    @property
    def children(self):
        return (self.a,)

    def _compute(self, n):
        return self.a.value(self.offset + self.step * n)


class BarTransform(SequenceSpec):
    """``n -> zeta_L ** a(n)`` for a sequence with values in ``0..L-1``."""

    kind = "bar_transform"

    def __init__(self, a: SequenceSpec, modulus: int):
        if modulus < 1:
            raise SpecError("modulus must be positive")
        if a.field_order != 1:
            raise SpecError("bar transform expects an integer-valued source")
        super().__init__(a.radix, modulus)
        self.a, self.modulus = a, modulus

    @property
    def children(self):
        return (self.a,)

    def _compute(self, n):
        v = self.a.value(n)
        if not v.is_rational() or v.to_fraction().denominator != 1:
            raise SpecError(f"value at index {n} is not an integer: {v}")
        e = int(v.to_fraction())
        if not 0 <= e < self.modulus:
            raise SpecError(f"value {e} at index {n} is outside 0..{self.modulus - 1}")
        return Scalar.zeta(self.modulus, e)


# --- functional surface ------------------------------------------------------

def eval_term(spec: SequenceSpec, n: int) -> Scalar:
    return spec.value(n)


def prefix(spec: SequenceSpec, n: int) -> list[Scalar]:
    if n < 0:
        raise ValueError("prefix length must be nonnegative")
    return spec.prefix(n)


def gen_series(spec: SequenceSpec, n: int) -> TruncatedSeries:
    return TruncatedSeries(spec.prefix(n))


def add(a: SequenceSpec, b: SequenceSpec) -> SequenceSpec:
    return Add(a, b)


def pointwise_mul(a: SequenceSpec, b: SequenceSpec) -> SequenceSpec:
    return PointwiseMul(a, b)


def scalar_mul(c, a: SequenceSpec) -> SequenceSpec:
    return ScalarMul(c, a)


def cauchy(a: SequenceSpec, b: SequenceSpec) -> SequenceSpec:
    return Cauchy(a, b)


def arith_subseq(a: SequenceSpec, offset: int, step: int) -> SequenceSpec:
    return ArithSubseq(a, offset, step)


def cartier(a: SequenceSpec, j: int) -> SequenceSpec:
    """``n -> a(k n + j)``."""
    if not 0 <= j < a.radix:
        raise SpecError(f"Cartier digit {j} outside 0..{a.radix - 1}")
    return ArithSubseq(a, j, a.radix)


def kernel_level(a: SequenceSpec, e: int) -> list[SequenceSpec]:
    """The ``k**e`` subsequences ``n -> a(k**e n + j)``, ordered by ``j``."""
    if e < 0:
        raise ValueError("kernel level must be nonnegative")
    if e == 0:
        return [a]
    m = a.radix ** e
    return [ArithSubseq(a, j, m) for j in range(m)]


def bar_transform(a: SequenceSpec, modulus: int) -> SequenceSpec:
    return BarTransform(a, modulus)


def same_prefix(a: SequenceSpec | Sequence, b: SequenceSpec | Sequence, n: int) -> bool:
    """Exact equality of the first ``n`` terms."""
    pa = a.prefix(n) if isinstance(a, SequenceSpec) else list(a)[:n]
    pb = b.prefix(n) if isinstance(b, SequenceSpec) else list(b)[:n]
    return pa == pb
