"""Half-open time intervals and normalized interval sets.

An :class:`IntervalSet` is the availability of an edge: a sorted tuple of
disjoint, non-adjacent ``[start, end)`` pieces.  Adjacent pieces are merged,
so ``[1, 2) | [2, 4)`` is stored as ``[1, 4)``.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

Time = Union[int, float]

INF = math.inf


def _check_instant(t: Time, name: str) -> None:
    if isinstance(t, bool) or not isinstance(t, (int, float)):
        raise TypeError(f"{name} must be a real number, got {t!r}")
    if math.isnan(t):
        raise ValueError(f"{name} is NaN")
    if t < 0:
        raise ValueError(f"{name} must be non-negative, got {t!r}")


@dataclass(frozen=True, order=True)
class TimeInterval:
    """A non-empty half-open interval ``[start, end)``; ``end`` may be ``inf``."""

    start: Time
    end: Time

    def __post_init__(self) -> None:
        _check_instant(self.start, "start")
        _check_instant(self.end, "end")
        if math.isinf(self.start):
            raise ValueError("interval start must be finite")
        if not self.start < self.end:
            raise ValueError(f"empty interval [{self.start}, {self.end})")

    def __contains__(self, t: Time) -> bool:
        return self.start <= t < self.end

    def contains_interval(self, other: TimeInterval) -> bool:
        return self.start <= other.start and other.end <= self.end

    @property
    def bounded(self) -> bool:
        return not math.isinf(self.end)

    def __repr__(self) -> str:
        return f"[{self.start}, {self.end})"


def _as_pair(item) -> tuple[Time, Time]:
    if isinstance(item, TimeInterval):
        return item.start, item.end
    start, end = item
    TimeInterval(start, end)  # validates
    return start, end


def _merge(pairs: Iterable[tuple[Time, Time]]) -> tuple[tuple[Time, Time], ...]:
    out: list[list[Time]] = []
    for start, end in sorted(pairs):
        if out and start <= out[-1][1]:
            if end > out[-1][1]:
                out[-1][1] = end
        else:
            out.append([start, end])
    return tuple((s, e) for s, e in out)


class IntervalSet:
    """Immutable union of half-open intervals, kept in normal form.

    Construction accepts any iterable of :class:`TimeInterval` or
    ``(start, end)`` pairs, in any order and possibly overlapping.
    """

    __slots__ = ("_pairs", "_starts")

    def __init__(self, intervals: Iterable = ()) -> None:
        self._pairs = _merge(_as_pair(i) for i in intervals)
        self._starts = [s for s, _ in self._pairs]

    @classmethod
    def _from_normal(cls, pairs: tuple[tuple[Time, Time], ...]) -> IntervalSet:
        obj = cls.__new__(cls)
        obj._pairs = pairs
        obj._starts = [s for s, _ in pairs]
        return obj

    @property
    def pairs(self) -> tuple[tuple[Time, Time], ...]:
        return self._pairs

    @property
    def intervals(self) -> list[TimeInterval]:
        return [TimeInterval(s, e) for s, e in self._pairs]

    def __iter__(self) -> Iterator[TimeInterval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self._pairs)

    def __bool__(self) -> bool:
        return bool(self._pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __repr__(self) -> str:
        if not self._pairs:
            return "IntervalSet({})"
        body = " | ".join(f"[{s}, {e})" for s, e in self._pairs)
        return f"IntervalSet({body})"

    def __contains__(self, t: Time) -> bool:
        i = bisect_right(self._starts, t) - 1
        return i >= 0 and t < self._pairs[i][1]

    def __or__(self, other: IntervalSet) -> IntervalSet:
        return self.union(other)

    def union(self, other) -> IntervalSet:
        if isinstance(other, IntervalSet):
            extra = other._pairs
        elif isinstance(other, TimeInterval):
            extra = ((other.start, other.end),)
        else:
            extra = tuple(_as_pair(i) for i in other)
        return IntervalSet._from_normal(_merge(self._pairs + extra))

    def normalized(self) -> IntervalSet:
        return IntervalSet._from_normal(_merge(self._pairs))

    def intersection(self, window: TimeInterval) -> IntervalSet:
        out = []
        for s, e in self._pairs:
            lo, hi = max(s, window.start), min(e, window.end)
            if lo < hi:
                out.append((lo, hi))
        return IntervalSet._from_normal(tuple(out))

    def covers(self, interval: TimeInterval) -> bool:
        """True if every instant of ``interval`` lies in the set."""
        i = bisect_right(self._starts, interval.start) - 1
        return i >= 0 and interval.end <= self._pairs[i][1]

    def next_available(self, t: Time) -> Time | None:
        """Earliest instant ``>= t`` inside the set, or None."""
        i = bisect_right(self._starts, t) - 1
        if i >= 0 and t < self._pairs[i][1]:
            return t
        if i + 1 < len(self._pairs):
            return self._pairs[i + 1][0]
        return None

    @property
    def starts(self) -> list[Time]:
        return list(self._starts)

    @property
    def ends(self) -> list[Time]:
        return [e for _, e in self._pairs if not math.isinf(e)]

    @property
    def span(self) -> TimeInterval | None:
        if not self._pairs:
            return None
        return TimeInterval(self._pairs[0][0], self._pairs[-1][1])
