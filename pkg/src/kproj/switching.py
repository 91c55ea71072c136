"""A two-matrix switching product and the chain equations it satisfies.

At each level one of

    M1 = [[1+z, 0], [1-z, 0]]      M2 = [[1, z], [1, -z]]

is chosen, and ``(f_y, g_y) = M_y(z) (f_{y+1}, g_{y+1})(z^2)`` with seeds
``(1, 1)``.  Eliminating ``g`` gives a chain equation for ``f`` whose
coefficients depend on the choices at levels ``y`` and ``y+1``:

* case 1, ``M1`` at ``y``:          ``f_y = (1+z) f_{y+1}(z^2)``
* case 2, ``M2`` then ``M2``:       ``f_y = (1-z) f_{y+1}(z^2) + 2z f_{y+2}(z^4)``
* case 3, ``M2`` then ``M1``:       ``f_y = f_{y+1}(z^2) + (z-z^3) f_{y+2}(z^4)``

A case table lists ``(a1, a2)`` per case for the form
``f_y + e1*a1 f_{y+1}(z^2) + e2*a2 f_{y+2}(z^4) = 0``; :func:`verify_case_table`
reports which sign pairs ``(e1, e2)`` make each case hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .levels import LevelTable
from .mahler import ChainLevel, ChainMahlerSpec, MatrixProductSpec, level_series
from .poly import Poly, PolyMatrix
from .series import TruncatedSeries

__all__ = ["M1", "M2", "PUBLISHED_TABLE", "PLUS_TABLE", "switching_product", "case_at",
           "switching_chain", "verify_case_table", "CaseTableReport"]

_z = Poly.z()
M1 = PolyMatrix([[1 + _z, 0], [1 - _z, 0]], degree_bound=1)
M2 = PolyMatrix([[1, _z], [1, -_z]], degree_bound=1)

# Case table as commonly published for this system.
PUBLISHED_TABLE: dict[int, tuple[Poly, Poly]] = {
    1: (1 + _z, Poly()),
    2: (_z - 1, 2 * _z),
    3: (Poly([-1]), _z ** 3 - _z),
}

# The same relations written so that every case holds with signs (+, +).
PLUS_TABLE: dict[int, tuple[Poly, Poly]] = {
    1: (-(1 + _z), Poly()),
    2: (_z - 1, -2 * _z),
    3: (Poly([-1]), _z ** 3 - _z),
}

SIGNS = tuple(iproduct((1, -1), repeat=2))


def _check_choices(choices: LevelTable) -> None:
    for y, c in enumerate(choices.entries):
        if c not in (1, 2):
            raise ValueError(f"level {y}: matrix choice must be 1 or 2, got {c!r}")


def switching_product(choices: LevelTable) -> MatrixProductSpec:
    _check_choices(choices)
    mats = choices.map(lambda c: M1 if c == 1 else M2)
    return MatrixProductSpec(2, mats, LevelTable.constant((1, 1)), output_row=0,
                             name="switching-chain")


def case_at(choices: LevelTable, y: int) -> int:
    if choices[y] == 1:
        return 1
    return 2 if choices[y + 1] == 2 else 3


def switching_chain(choices: LevelTable, table: dict | None = None,
                    signs: tuple[int, int] = (1, 1)) -> ChainMahlerSpec:
    """Chain equations ``f_y + e1*a1 f_{y+1}(z^2) + e2*a2 f_{y+2}(z^4) = 0`` with ``f_y(0)=1``."""
    _check_choices(choices)
    table = PLUS_TABLE if table is None else table
    e1, e2 = signs

    def level(y: int) -> ChainLevel:
        a1, a2 = table[case_at(choices, y)]
        return ChainLevel.make([1, a1 * e1, a2 * e2], f0=1)

    return ChainMahlerSpec(2, choices.derived(level, lookahead=1), name="switching-chain")


@dataclass
class CaseTableReport:
    n: int
    levels: list[dict]
    case_signs: dict[int, list[tuple[int, int]]]
    uniform_signs: list[tuple[int, int]]

    @property
    def ok(self) -> bool:
        return all(self.case_signs[c] for c in self.case_signs)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "order": self.n,
            "sign_convention": {str(c): [list(s) for s in v] for c, v in self.case_signs.items()},
            "uniform_signs": [list(s) for s in self.uniform_signs],
            "levels": self.levels,
        }


def verify_case_table(choices: LevelTable, n: int, table: dict | None = None,
                      levels: int = 6) -> CaseTableReport:
    """Check the case table against the actual product to order ``n`` at levels ``0..levels-1``.

    For every level and every sign pair the residual
    ``f_y + e1*a1 f_{y+1}(z^2) + e2*a2 f_{y+2}(z^4)`` is computed exactly.  A
    case passes when some sign pair works at every level where it occurs.
    """
    table = PUBLISHED_TABLE if table is None else table
    prod = switching_product(choices)
    fs = [v[0] for v in level_series(prod, n, levels + 1)]
    rows = []
    case_signs: dict[int, set] = {}
    for y in range(levels):
        case = case_at(choices, y)
        a1, a2 = table[case]
        t1 = fs[y + 1].substitute_power(2).mul_poly(a1)
        t2 = fs[y + 2].substitute_power(4).mul_poly(a2)
        good = []
        for e1, e2 in SIGNS:
            res: TruncatedSeries = fs[y] + t1.scale(e1) + t2.scale(e2)
            if res.valuation() is None:
                good.append((e1, e2))
        rows.append({"level": y, "case": case, "signs": [list(s) for s in good]})
        case_signs[case] = case_signs.get(case, set(SIGNS)) & set(good)
    uniform = set(SIGNS)
    for v in case_signs.values():
        uniform &= v
    ordered = {c: sorted(v, reverse=True) for c, v in sorted(case_signs.items())}
    return CaseTableReport(n, rows, ordered, sorted(uniform, reverse=True))
