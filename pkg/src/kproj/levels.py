"""Level-indexed families described by a finite table and a periodic tail."""

from __future__ import annotations

from typing import Callable, Generic, Iterable, TypeVar

T = TypeVar("T")
U = TypeVar("U")


class LevelTable(Generic[T]):
    """A family ``x_0, x_1, ...`` given by explicit entries plus a tail rule.

    Past the table the last ``period`` entries repeat cyclically.  The
    "repeat last" rule is ``period == 1``.
    """

    __slots__ = ("entries", "period")

    def __init__(self, entries: Iterable[T], period: int = 1):
        entries = tuple(entries)
        if not entries:
            raise ValueError("a level table needs at least one entry")
        if not 1 <= period <= len(entries):
            raise ValueError(f"tail period {period} must lie in 1..{len(entries)}")
        self.entries = entries
        self.period = period

    @classmethod
    def constant(cls, value: T) -> LevelTable[T]:
        return cls((value,))

    @classmethod
    def cycle(cls, values: Iterable[T]) -> LevelTable[T]:
        values = tuple(values)
        return cls(values, len(values))

    @classmethod
    def tabulate(cls, fn: Callable[[int], U], length: int, period: int) -> LevelTable[U]:
        return cls((fn(y) for y in range(length)), period)

    def index(self, y: int) -> int:
        if y < 0:
            raise IndexError("levels are nonnegative")
        n = len(self.entries)
        if y < n:
            return y
        start = n - self.period
        return start + (y - start) % self.period

    def __getitem__(self, y: int) -> T:
        return self.entries[self.index(y)]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def tail_rule(self) -> str:
        return "repeat_last" if self.period == 1 else f"cycle({self.period})"

    def map(self, fn: Callable[[T], U]) -> LevelTable[U]:
        return LevelTable((fn(e) for e in self.entries), self.period)

    def derived(self, fn: Callable[[int], U], lookahead: int = 0) -> LevelTable[U]:
        """Table for ``y -> fn(y)`` where ``fn(y)`` reads levels ``y..y+lookahead``."""
        return LevelTable.tabulate(fn, len(self.entries) + lookahead, self.period)

    def __repr__(self):
        return f"LevelTable({list(self.entries)!r}, period={self.period})"
