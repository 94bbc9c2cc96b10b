# libs/utils/intervals.py
"""Half-open frequency intervals ``[lo, hi)`` and the set operations the
planner needs: merging, pairwise intersection of sorted lists and membership.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence


@dataclass(order=True, frozen=True)
class FrequencyInterval:
    """A half-open interval ``[lo, hi)`` of sweep frequencies in Hz."""
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(
                f"interval lower bound {self.lo} exceeds upper bound {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, f: float) -> bool:
        return self.lo <= f < self.hi


def merge_intervals(intervals: Iterable[FrequencyInterval],
                    tolerance: float = 0.0) -> List[FrequencyInterval]:
    """Sort and coalesce intervals that overlap or sit within ``tolerance``.

    Intervals narrower than ``tolerance`` after merging are dropped as
    bisection slivers.
    """
    merged: List[FrequencyInterval] = []
    for iv in sorted(intervals):
        if merged and iv.lo <= merged[-1].hi + tolerance:
            last = merged[-1]
            merged[-1] = FrequencyInterval(last.lo, max(last.hi, iv.hi))
        else:
            merged.append(iv)
    return [iv for iv in merged if iv.width > tolerance]


def intersect_intervals(a: Sequence[FrequencyInterval],
                        b: Sequence[FrequencyInterval],
                        tolerance: float = 0.0) -> List[FrequencyInterval]:
    """Intersect two interval lists with a two-pointer sweep."""
    a = merge_intervals(a)
    b = merge_intervals(b)
    out: List[FrequencyInterval] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i].lo, b[j].lo)
        hi = min(a[i].hi, b[j].hi)
        if hi > lo:
            out.append(FrequencyInterval(lo, hi))
        if a[i].hi < b[j].hi:
            i += 1
        else:
            j += 1
    return merge_intervals(out, tolerance)


def intersect_all(interval_lists: Sequence[Sequence[FrequencyInterval]],
                  tolerance: float = 0.0) -> List[FrequencyInterval]:
    """Intersection of every list; empty input gives an empty result."""
    if not interval_lists:
        return []
    common = merge_intervals(interval_lists[0])
    for other in interval_lists[1:]:
        common = intersect_intervals(common, other, tolerance)
        if not common:
            break
    return common


def covers(intervals: Sequence[FrequencyInterval], f: float) -> bool:
    return any(iv.contains(f) for iv in intervals)
