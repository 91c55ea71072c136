"""Exact scalars in the cyclotomic field Q(zeta_L).

An element is stored as its coordinate vector in the power basis
``1, x, ..., x^(phi(L)-1)`` of ``Q[x] / Phi_L(x)``.  ``L = 1`` is plain Q and
takes a fast path in every operation, since almost all sequences in this
package are rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

__all__ = ["Scalar", "FieldMismatchError", "cyclotomic_polynomial", "euler_phi"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


class FieldMismatchError(ValueError):
    """Raised when two scalars live in fields neither of which contains the other."""


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in _factorize(n):
        result = result // p * (p - 1)
    return result


def _moebius(n: int) -> int:
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div_int(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_div_int(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    assert not any(num[:dd]), "cyclotomic division left a remainder"
    return q


def _reduce(coeffs: list, order: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    c = list(coeffs) + [_ZERO] * max(0, deg - len(coeffs))
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j in range(deg):
                if phi[j]:
                    c[i - deg + j] -= t * phi[j]
    return tuple(Fraction(v) for v in c[:deg])


# --- dense polynomial helpers over Q, used only for inversion modulo Phi_L ---

def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _qdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [_ZERO] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
    return q, a


def _qsub_mul(a: list, b: list, c: list) -> list:
    """a - b*c"""
    out = list(a) + [_ZERO] * max(0, len(b) + len(c) - 1 - len(a))
    for i, bi in enumerate(b):
        if bi:
            for j, cj in enumerate(c):
                out[i + j] -= bi * cj
    return _trim(out)


def _inverse_mod(a: list, order: int) -> list:
    m = [Fraction(v) for v in cyclotomic_polynomial(order)]
    r0, r1 = m, _trim(list(a))
    s0, s1 = [], [_ONE]
    while len(r1) > 1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, _trim(r)
        s0, s1 = s1, _qsub_mul(s0, q, s1)
    # r1 is a nonzero constant since Phi_L is irreducible
    inv = 1 / r1[0]
    return [v * inv for v in s1]


class Scalar:
    """An exact element of Q(zeta_L).

    Instances are immutable.  Arithmetic with ``int`` and ``Fraction`` works
    directly; mixing two cyclotomic orders is allowed when one divides the
    other (the smaller field is embedded in the larger).
    """

    __slots__ = ("order", "coords")

    def __init__(self, value=0, order: int = 1):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        if isinstance(value, Scalar):
            src = value.embed(order) if value.order != order else value
            coords = src.coords
        elif isinstance(value, (int, Fraction, Rational)):
            coords = (Fraction(value),) + (_ZERO,) * (euler_phi(order) - 1)
        elif isinstance(value, str):
            coords = (Fraction(value.strip()),) + (_ZERO,) * (euler_phi(order) - 1)
        else:
            coords = _reduce([Fraction(v) for v in value], order)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def _raw(cls, coords: tuple, order: int) -> Scalar:
        obj = object.__new__(cls)
        object.__setattr__(obj, "order", order)
        object.__setattr__(obj, "coords", coords)
        return obj

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> Scalar:
        """The primitive root of unity ``zeta_order ** power``."""
        power %= order
        return cls([0] * power + [1], order)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- field membership -------------------------------------------------

    def embed(self, order: int) -> Scalar:
        if order == self.order:
            return self
        if order % self.order:
            raise FieldMismatchError(
                f"Q(zeta_{self.order}) does not embed in Q(zeta_{order})")
        phi = euler_phi(order)
        if self.is_rational():
            return Scalar._raw((self.coords[0],) + (_ZERO,) * (phi - 1), order)
        step = order // self.order
        spread = [_ZERO] * ((len(self.coords) - 1) * step + 1)
        for i, c in enumerate(self.coords):
            spread[i * step] = c
        return Scalar._raw(_reduce(spread, order), order)

    def _coerce(self, other) -> tuple[Scalar, Scalar]:
        if isinstance(other, Scalar):
            if other.order == self.order:
                return self, other
            if other.order % self.order == 0:
                return self.embed(other.order), other
            if self.order % other.order == 0:
                return self, other.embed(self.order)
            raise FieldMismatchError(
                f"cannot combine Q(zeta_{self.order}) and Q(zeta_{other.order})")
        if isinstance(other, (int, Fraction)):
            return self, Scalar(other, self.order)
        return NotImplemented, NotImplemented

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Scalar) and other.order == 1 == self.order:
            return Scalar._raw((self.coords[0] + other.coords[0],), 1)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return Scalar._raw(tuple(x + y for x, y in zip(a.coords, b.coords)), a.order)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(tuple(-x for x in self.coords), self.order)

    def __sub__(self, other):
        if isinstance(other, Scalar) and other.order == 1 == self.order:
            return Scalar._raw((self.coords[0] - other.coords[0],), 1)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return Scalar._raw(tuple(x - y for x, y in zip(a.coords, b.coords)), a.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar) and other.order == 1 == self.order:
            return Scalar._raw((self.coords[0] * other.coords[0],), 1)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        if a.order == 1:
            return Scalar._raw((a.coords[0] * b.coords[0],), 1)
        if b.is_rational():
            c = b.coords[0]
            return Scalar._raw(tuple(x * c for x in a.coords), a.order)
        if a.is_rational():
            c = a.coords[0]
            return Scalar._raw(tuple(x * c for x in b.coords), a.order)
        prod = [_ZERO] * (len(a.coords) + len(b.coords) - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        prod[i + j] += x * y
        return Scalar._raw(_reduce(prod, a.order), a.order)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        if not self:
            raise ZeroDivisionError("division by zero scalar")
        if self.is_rational():
            return Scalar._raw((1 / self.coords[0],) + self.coords[1:], self.order)
        return Scalar._raw(_reduce(_inverse_mod(list(self.coords), self.order), self.order),
                           self.order)

    def __truediv__(self, other):
        if isinstance(other, Scalar) and other.order == 1 == self.order:
            if not other.coords[0]:
                raise ZeroDivisionError("division by zero scalar")
            return Scalar._raw((self.coords[0] / other.coords[0],), 1)
        a, b = self._coerce(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Scalar(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, Scalar):
            return NotImplemented
        if self.order == other.order:
            return self.coords == other.coords
        common = self.order * other.order // gcd(self.order, other.order)
        return self.embed(common).coords == other.embed(common).coords

    def __hash__(self):
        # trace / degree is invariant under embedding, so equal values hash equal
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.normalized_trace())

    def normalized_trace(self) -> Fraction:
        """Trace down to Q divided by phi(L); unchanged by field embeddings."""
        L = self.order
        phi = euler_phi(L)
        total = _ZERO
        for i, c in enumerate(self.coords):
            if c:
                g = gcd(L, i)
                total += c * (_moebius(L // g) * (phi // euler_phi(L // g)))
        return total / phi

    # -- text -------------------------------------------------------------

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        if self.order == 1:
            return f"Scalar('{self.coords[0]}')"
        return f"Scalar({[str(c) for c in self.coords]!r}, order={self.order})"
