"""Exact real-root counting for rational polynomials via Sturm sequences."""

from __future__ import annotations

from fractions import Fraction

from .errors import SpecError
from .poly import Poly

__all__ = ["square_free_part", "sturm_chain", "count_real_roots", "real_rooted", "positive_rooted"]


def _gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def _require_rational(p: Poly) -> None:
    if not p:
        raise SpecError("the zero polynomial has no well-defined root set")
    if not p.is_rational():
        raise SpecError("real-root tests need rational coefficients")


def square_free_part(p: Poly) -> Poly:
    """``p / gcd(p, p')``: same roots, each simple."""
    _require_rational(p)
    g = _gcd(p, p.derivative())
    return p // g if g.degree > 0 else p


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while chain[-1]:
        r = chain[-2] % chain[-1]
        if not r:
            break
        chain.append(-r)
    return [q for q in chain if q]


def _sign_changes(values: list[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _at_infinity(q: Poly, positive: bool) -> Fraction:
    lead = q.leading().to_fraction()
    return lead if positive or q.degree % 2 == 0 else -lead


def count_real_roots(p: Poly, lower: Fraction | None = None) -> int:
    """Distinct real roots in ``(lower, +inf)``; the whole line when ``lower`` is None.

    ``lower`` must not itself be a root.
    """
    sq = square_free_part(p)
    chain = sturm_chain(sq)
    hi = _sign_changes([_at_infinity(q, True) for q in chain])
    if lower is None:
        lo = _sign_changes([_at_infinity(q, False) for q in chain])
    else:
        lo = _sign_changes([q(lower).to_fraction() for q in chain])
    return lo - hi


def real_rooted(p: Poly) -> bool:
    """True when every complex root of ``p`` is real."""
    sq = square_free_part(p)
    return count_real_roots(sq) == sq.degree


def positive_rooted(p: Poly) -> bool:
    """True when every complex root of ``p`` is a positive real number."""
    sq = square_free_part(p)
    if sq.degree == 0:
        return True
    if not sq(0):
        return False
    return count_real_roots(sq, Fraction(0)) == sq.degree
