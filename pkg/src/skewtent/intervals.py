"""Finite unions of closed intervals with exact piecewise-linear images.

Band attractors and trap-set complements are finite unions of closed
intervals.  Because the maps are piecewise linear with a single kink,
the image of an interval is computed exactly (up to rounding) by
splitting at the kink and taking hulls of the monotone pieces; the
image of an interval is always again an interval since the kink value
is the common maximum 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TYPE_CHECKING

from .errors import InvalidMap

if TYPE_CHECKING:  # pragma: no cover
    from .core import MapParams, UnitMap

Pair = tuple[float, float]


def _merge(pieces: Iterable[Pair]) -> tuple[Pair, ...]:
    """Sort by left endpoint and merge overlapping or touching intervals."""
    items = sorted(pieces)
    merged: list[list[float]] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalUnion:
    """Ordered finite list of closed intervals [lo, hi].

    Intervals are stored sorted by left endpoint.  Disjointness is a
    property of well-formed attractor data, not a construction
    invariant: :func:`skewtent.verify.check_disjoint` must be able to
    measure violations, so overlapping input is stored as given.
    """

    intervals: tuple[Pair, ...]

    def __post_init__(self):
        cleaned = []
        for pair in self.intervals:
            lo, hi = float(pair[0]), float(pair[1])
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InvalidMap(f"interval endpoints must be finite, got ({lo}, {hi})")
            if lo > hi:
                raise InvalidMap(f"interval endpoints out of order: ({lo}, {hi})")
            cleaned.append((lo, hi))
        cleaned.sort()
        object.__setattr__(self, "intervals", tuple(cleaned))

    @classmethod
    def single(cls, lo: float, hi: float) -> "IntervalUnion":
        return cls(((lo, hi),))

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def hull(self) -> Pair:
        if not self.intervals:
            raise InvalidMap("empty union has no hull")
        return (self.intervals[0][0], self.intervals[-1][1])

    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def contains(self, x: float) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def distance(self, x: float) -> float:
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, abs(x - lo), abs(x - hi))
        return best

    def merged(self) -> "IntervalUnion":
        """Collapse overlapping or touching intervals."""
        return IntervalUnion(_merge(self.intervals))

    def map_affine(self, scale: float, offset: float) -> "IntervalUnion":
        """Apply x -> scale*x + offset with scale > 0 (order preserving)."""
        if scale <= 0.0:
            raise InvalidMap("affine image requires a positive scale")
        return IntervalUnion(tuple((scale * lo + offset, scale * hi + offset) for lo, hi in self.intervals))

    # -- exact piecewise-linear images -----------------------------------

    def image_f(self, p: "MapParams") -> "IntervalUnion":
        """Exact image under the canonical map, splitting at the kink x = 0."""
        k, r = p.k, p.r
        pieces: list[Pair] = []
        for lo, hi in self.intervals:
            if hi <= 0.0:
                pieces.append((1.0 + r * lo, 1.0 + r * hi))
            elif lo >= 0.0:
                pieces.append((1.0 - k * hi, 1.0 - k * lo))
            else:
                pieces.append((min(1.0 + r * lo, 1.0 - k * hi), 1.0))
        return IntervalUnion(_merge(pieces))

    def image_g(self, u: "UnitMap") -> "IntervalUnion":
        """Exact image under the unit map, splitting at the kink x = a."""
        a, b = u.a, u.b
        k, r = u.params.k, u.params.r
        pieces: list[Pair] = []
        for lo, hi in self.intervals:
            if hi <= a:
                pieces.append((b + r * lo, b + r * hi))
            elif lo >= a:
                pieces.append((k * (1.0 - hi), k * (1.0 - lo)))
            else:
                pieces.append((min(b + r * lo, k * (1.0 - hi)), 1.0))
        return IntervalUnion(_merge(pieces))

    # -- set operations ---------------------------------------------------

    def minus(self, other: "IntervalUnion") -> "IntervalUnion":
        """Closure of the set difference self \\ other."""
        result: list[Pair] = []
        for lo, hi in self.intervals:
            cur = lo
            for olo, ohi in other.intervals:
                if ohi <= cur:
                    continue
                if olo >= hi:
                    break
                if olo > cur:
                    result.append((cur, min(olo, hi)))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                result.append((cur, hi))
        return IntervalUnion(tuple(result))

    def covers(self, target: "IntervalUnion", tol: float) -> bool:
        """True when every point of target is within the union up to gaps of width <= tol."""
        return all(hi - lo <= tol for lo, hi in target.minus(self.merged()).intervals)

    def hausdorff(self, other: "IntervalUnion") -> float:
        """Hausdorff distance between two finite unions of closed intervals.

        The directed distance sup_{x in A} d(x, B) is attained either at
        an endpoint of A or at a gap midpoint of B interior to A, so the
        maximum over those candidates is exact.
        """
        return max(_directed(self, other), _directed(other, self))


def _directed(a: IntervalUnion, b: IntervalUnion) -> float:
    if not a.intervals:
        return 0.0
    if not b.intervals:
        return math.inf
    candidates: list[float] = []
    for lo, hi in a.intervals:
        candidates.append(lo)
        candidates.append(hi)
    for (lo1, hi1), (lo2, hi2) in zip(b.intervals, b.intervals[1:]):
        mid = 0.5 * (hi1 + lo2)
        if a.contains(mid):
            candidates.append(mid)
    return max(b.distance(x) for x in candidates)


def union_of(pieces: Sequence[Pair]) -> IntervalUnion:
    """Convenience constructor that merges touching pieces."""
    return IntervalUnion(_merge(pieces))
