"""Invariant Cantor repellers and their symbolic dynamics.

Two repellers occur.  In the escape region the surviving set conjugates
to the full shift on two symbols: the rescaled map is x -> r*x left of
the kink and x -> k*(1-x) right of it, with both slopes above 1, and
the partition is I_0 = [0, 1/r], I_1 = [1-1/k, 1].  Inside a period
window (with r^m k^2 - k - r < 0) the complement of the trap set
carries a subshift on symbols {1..m} where any symbol s < m must be
followed by s + 1; the partition intervals are bounded by the repelling
orbit b_i and its backward chain.

Membership in a Cantor set is only decidable to finite horizon, so the
API speaks in horizons: itineraries report the exit step when an orbit
leaves the partition, and cylinder intervals are the exact sets of
points whose first n symbols match a word.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .core import MapParams, to_unit
from .errors import Inadmissible, InvalidWord, OutOfDomain, PrecisionLoss, WrongRegion
from .regions import K_wall

_COVER_TOL = 1e-10


class ShiftKind(str, Enum):
    FULL_2 = "FullShift2"
    WINDOW = "WindowShift"


@dataclass(frozen=True)
class Word:
    """A finite symbol word over a system's alphabet."""

    symbols: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.symbols)


@dataclass(frozen=True)
class Exited:
    """The orbit left the partition union at this step (so the point is
    not in the Cantor set at that resolution)."""

    step: int


@dataclass(frozen=True)
class CantorSystem:
    """Branch data of an invariant expanding Cantor repeller.

    The internal frame is [0, 1]; ``frame_scale``/``frame_offset`` give
    the affine conjugacy back to line coordinates.  The internal map is
    x -> left_offset + r*x left of the kink and x -> k*(1-x) right of
    it.  ``partition[i]`` is the closed interval of symbol
    ``alphabet[i]``; partition intervals are pairwise disjoint and each
    maps onto a union of partition intervals, expanding by at least
    ``expansion`` per admissible block.
    """

    kind: ShiftKind
    params: MapParams
    alphabet: tuple[int, ...]
    partition: tuple[tuple[float, float], ...]
    kink: float
    left_offset: float
    frame_scale: float
    frame_offset: float
    expansion: float
    m: int | None = None

    def step(self, x: float) -> float:
        """One application of the internal map."""
        if x <= self.kink:
            return self.left_offset + self.params.r * x
        return self.params.k * (1.0 - x)

    def symbol_of(self, x: float) -> int | None:
        for sym, (lo, hi) in zip(self.alphabet, self.partition):
            if lo <= x <= hi:
                return sym
        return None

    def to_f(self, x: float) -> float:
        """Internal coordinate -> line coordinate."""
        return self.frame_scale * x + self.frame_offset

    def from_f(self, x: float) -> float:
        """Line coordinate -> internal coordinate."""
        return (x - self.frame_offset) / self.frame_scale

    def frame_interval(self) -> tuple[float, float]:
        """The line-coordinate interval carrying the repeller."""
        return (self.to_f(0.0), self.to_f(1.0))

    def _index(self, sym: int) -> int:
        try:
            return self.alphabet.index(sym)
        except ValueError:
            raise InvalidWord(f"symbol {sym} outside alphabet {self.alphabet}") from None

    def _pull_back(self, sym: int, lo: float, hi: float) -> tuple[float, float]:
        """Preimage of [lo, hi] inside the branch of this symbol."""
        interval = self.partition[self._index(sym)]
        if interval[1] <= self.kink:
            return ((lo - self.left_offset) / self.params.r, (hi - self.left_offset) / self.params.r)
        k = self.params.k
        return (1.0 - hi / k, 1.0 - lo / k)


def escape_cantor_system(params: MapParams) -> CantorSystem:
    """Full 2-shift repeller of the escape region (k > 1, r > k/(k-1)).

    The conjugating frame maps [0, 1] onto the trapping interval
    [alpha, beta]; both branch slopes exceed 1, and the kink image
    r*a > 1 certifies the expansion off the partition.
    """
    k, r = params.k, params.r
    if not (k > 1.0 and r > k / (k - 1.0)):
        raise WrongRegion(f"escape region needs k > 1 and r > k/(k-1), got (k={k}, r={r})")
    a = k / (r + k)
    if r * a <= 1.0:
        raise PrecisionLoss("kink image fails the expansion certificate r*a > 1", defect=r * a - 1.0)
    return CantorSystem(
        kind=ShiftKind.FULL_2,
        params=params,
        alphabet=(0, 1),
        partition=((0.0, 1.0 / r), (1.0 - 1.0 / k, 1.0)),
        kink=a,
        left_offset=0.0,
        frame_scale=(r + k) / (k * (r - 1.0)),
        frame_offset=-1.0 / (r - 1.0),
        expansion=min(r, k),
        m=None,
    )


def window_cantor_system(params: MapParams) -> CantorSystem:
    """Window repeller over the subshift on {1..m} (requires r^m k^2 - k - r < 0).

    Partition endpoints come from the window skeleton: the repelling
    orbit b_1..b_{m+1} and its backward chain.  Covering relations
    g(I_j) = I_{j+1} (j < m) and g(I_m) containing the whole partition
    are certified, as are the composite expansion constants
    k^2 r^{m-1}, k^2 r^{2m-2} and K_m(r)^2 r^{2m-2}, all above 1.
    """
    from .attractors import window_core

    wd = window_core(params)
    if wd.bhat is None:
        raise WrongRegion("the window repeller exists only where r^m k^2 - k - r < 0 (R1, R2, R3)")
    k, r, m = params.k, params.r, wd.m
    b_orbit, hats = wd.b_orbit, wd.bhat
    pieces = [(b_orbit[j - 1], hats[j - 1]) for j in range(1, m)]
    pieces.append((b_orbit[m - 1], b_orbit[m]))
    partition = tuple(pieces)

    unit = wd.unit
    system = CantorSystem(
        kind=ShiftKind.WINDOW,
        params=params,
        alphabet=tuple(range(1, m + 1)),
        partition=partition,
        kink=unit.a,
        left_offset=unit.b,
        frame_scale=k,
        frame_offset=1.0 - k,
        expansion=k * k * r ** (2 * m - 2),
        m=m,
    )

    for j in range(m - 1):
        lo, hi = partition[j]
        nlo, nhi = partition[j + 1]
        defect = max(abs(system.step(lo) - nlo), abs(system.step(hi) - nhi))
        if defect > _COVER_TOL:
            raise PrecisionLoss(f"covering relation g(I_{j + 1}) = I_{j + 2} failed", defect=defect)
    lo_m, hi_m = partition[-1]
    image = sorted((system.step(lo_m), system.step(hi_m)))
    span_lo, span_hi = partition[0][0], partition[-1][1]
    if image[0] > span_lo + _COVER_TOL or image[1] < span_hi - _COVER_TOL:
        raise PrecisionLoss("last partition interval does not cover the partition")

    for constant in (k * k * r ** (m - 1), k * k * r ** (2 * m - 2), (K_wall(m, r) * r ** (m - 1)) ** 2):
        if constant <= 1.0:
            raise PrecisionLoss("composite expansion certificate failed", defect=constant - 1.0)
    return system


def is_admissible(word: Word | tuple[int, ...], system: CantorSystem) -> bool:
    """True when the word satisfies the system's successor constraint.

    The full 2-shift is unconstrained; the window shift forces any
    symbol s < m to be followed by s + 1.  Symbols outside the alphabet
    raise :class:`InvalidWord`.
    """
    symbols = word.symbols if isinstance(word, Word) else tuple(word)
    allowed = set(system.alphabet)
    for sym in symbols:
        if sym not in allowed:
            raise InvalidWord(f"symbol {sym} outside alphabet {system.alphabet}")
    if system.kind is ShiftKind.FULL_2:
        return True
    m = system.m
    for cur, nxt in zip(symbols, symbols[1:]):
        if cur < m and nxt != cur + 1:
            return False
    return True


def itinerary(system: CantorSystem, x: float, n: int) -> Word | Exited:
    """Symbols of the partition intervals visited by the first n iterates.

    Returns ``Exited(step=j)`` at the first iterate outside the
    partition union, certifying that x leaves the Cantor set at
    resolution j.  The coordinate is in the system's internal frame.
    """
    if n < 1:
        raise OutOfDomain(f"itinerary length must be >= 1, got {n}")
    symbols: list[int] = []
    cur = float(x)
    for step in range(n):
        sym = system.symbol_of(cur)
        if sym is None:
            return Exited(step=step)
        symbols.append(sym)
        cur = system.step(cur)
    return Word(symbols=tuple(symbols))


def point_from_itinerary(system: CantorSystem, word: Word | tuple[int, ...]) -> tuple[float, float]:
    """The exact cylinder interval of points whose first |w| symbols match w.

    Built by composing the affine branch inverses from the last symbol
    backwards; widths shrink at the certified expansion rate, one
    strict refinement per free (non-forced) symbol.
    """
    symbols = word.symbols if isinstance(word, Word) else tuple(word)
    if not symbols:
        raise OutOfDomain("cannot invert an empty word")
    if not is_admissible(symbols, system):
        raise Inadmissible(f"word {symbols} violates the successor constraint")
    lo, hi = system.partition[system._index(symbols[-1])]
    for sym in reversed(symbols[:-1]):
        lo, hi = system._pull_back(sym, lo, hi)
    return (lo, hi)


def admissible_words(system: CantorSystem, length: int) -> Iterator[tuple[int, ...]]:
    """Enumerate every admissible word of the given length, lexicographically."""
    if length < 1:
        raise OutOfDomain(f"word length must be >= 1, got {length}")
    if system.kind is ShiftKind.FULL_2:
        def walk2(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if len(prefix) == length:
                yield prefix
                return
            for sym in (0, 1):
                yield from walk2(prefix + (sym,))

        yield from walk2(())
        return

    m = system.m

    def walk(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == length:
            yield prefix
            return
        if prefix and prefix[-1] < m:
            yield from walk(prefix + (prefix[-1] + 1,))
            return
        for sym in range(1, m + 1):
            yield from walk(prefix + (sym,))

    yield from walk(())
