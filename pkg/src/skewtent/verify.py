"""Numerical diagnostics: Lyapunov exponents, basins, invariance, covering.

These operations check at desk scale what the closed-form constructions
assert: band unions are invariant and disjoint, almost every orbit
reaches the attractor (or escapes), stable orbits pin the Lyapunov
exponent to the log of their multiplier, and chaotic supports are
covered by the forward images of any tiny interval.

Reproducibility contract: all sampling uses numpy's PCG64 generator
seeded with an explicit 64-bit seed, and the generator identity is
recorded in the result metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attractors import Attractor, AttractorKind, attractor as build_attractor
from .core import ESCAPE_THRESHOLD, MapParams, trapping_interval
from .errors import NoBoundedOrbit, OutOfDomain
from .intervals import IntervalUnion

RNG_ALGORITHM = "numpy.random.PCG64"

DEFAULT_EPS = 1e-6
DEFAULT_HORIZON = 10_000


@dataclass(frozen=True)
class FateStats:
    """Outcome counts of a basin experiment; the three buckets sum to the sample size."""

    n_samples: int
    n_to_attractor: int
    n_escaped: int
    n_undecided: int
    median_landing_time: float | None
    seed: int
    eps: float
    horizon: int
    rng: str = RNG_ALGORITHM

    def __post_init__(self):
        total = self.n_to_attractor + self.n_escaped + self.n_undecided
        if total != self.n_samples:
            raise ValueError(f"fate counts {total} do not sum to sample size {self.n_samples}")


@dataclass(frozen=True)
class LyapunovEstimate:
    """Across-seed mean of the orbit-average log slope."""

    lam: float
    stderr: float
    n: int
    n_seeds: int
    burn_in: int
    seed: int
    rng: str = RNG_ALGORITHM


def _seed_box(p: MapParams) -> tuple[float, float]:
    """Sampling box: the open trapping interval, or a fixed box around the
    invariant core when the trapping interval is the whole line."""
    trap = trapping_interval(p)
    if trap.bounded:
        return (trap.alpha, trap.beta)
    return (1.0 - p.k - 1.0, 2.0)


def lyapunov(
    p: MapParams,
    n: int = 100_000,
    n_seeds: int = 8,
    burn_in: int = 1_000,
    seed: int = 0,
) -> LyapunovEstimate:
    """Orbit-average of log|slope| over uniform seeds in the trapping region.

    The slope is r on the left branch and k on the right, so the
    average is (n_left*log r + n_right*log k)/n after the burn-in.
    Orbits that escape are discarded; if every orbit escapes there is
    nothing to average and :class:`NoBoundedOrbit` is raised.
    """
    if n < 1_000:
        raise OutOfDomain(f"lyapunov needs n >= 1000, got {n}")
    if n_seeds < 1 or burn_in < 0:
        raise OutOfDomain("n_seeds must be >= 1 and burn_in >= 0")
    k, r = p.k, p.r
    log_r, log_k = math.log(r), math.log(k)
    rng = np.random.default_rng(seed)
    lo, hi = _seed_box(p)
    seeds = rng.uniform(lo, hi, n_seeds)

    means = []
    for x in seeds.tolist():
        escaped = False
        for _ in range(burn_in):
            x = 1.0 + r * x if x <= 0.0 else 1.0 - k * x
            if x < -ESCAPE_THRESHOLD:
                escaped = True
                break
        if escaped:
            continue
        n_left = 0
        for _ in range(n):
            if x <= 0.0:
                n_left += 1
                x = 1.0 + r * x
            else:
                x = 1.0 - k * x
            if x < -ESCAPE_THRESHOLD:
                escaped = True
                break
        if escaped:
            continue
        means.append((n_left * log_r + (n - n_left) * log_k) / n)

    if not means:
        raise NoBoundedOrbit("every sampled orbit escaped the trapping region")
    lam = float(np.mean(means))
    stderr = float(np.std(means, ddof=1) / math.sqrt(len(means))) if len(means) > 1 else 0.0
    return LyapunovEstimate(lam=lam, stderr=stderr, n=n, n_seeds=n_seeds, burn_in=burn_in, seed=seed)


def check_invariance(u: IntervalUnion, p: MapParams) -> float:
    """Hausdorff distance between the exact forward image of the union and the union."""
    if len(u) == 0:
        raise OutOfDomain("cannot check invariance of an empty union")
    return u.image_f(p).hausdorff(u)


def check_disjoint(u: IntervalUnion) -> float:
    """Minimum gap between consecutive intervals; <= 0 flags an overlap,
    +inf for fewer than two intervals."""
    if len(u) < 2:
        return math.inf
    return min(b[0] - a[1] for a, b in zip(u.intervals, u.intervals[1:]))


def _distance_to_union(x: np.ndarray, union: IntervalUnion) -> np.ndarray:
    los = np.array([lo for lo, _ in union.intervals])
    his = np.array([hi for _, hi in union.intervals])
    idx = np.searchsorted(los, x, side="right") - 1
    dist = np.full(x.shape, np.inf)
    has_left = idx >= 0
    il = np.clip(idx, 0, len(los) - 1)
    inside = has_left & (x <= his[il])
    dist = np.where(has_left, np.abs(x - his[il]), dist)
    has_right = idx + 1 < len(los)
    ir = np.clip(idx + 1, 0, len(los) - 1)
    dist = np.minimum(dist, np.where(has_right, np.abs(los[ir] - x), np.inf))
    return np.where(inside, 0.0, dist)


def basin_experiment(
    p: MapParams,
    n_samples: int = 10_000,
    horizon: int = DEFAULT_HORIZON,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    target: Attractor | None = None,
) -> FateStats:
    """Classify uniform random seeds as attracted, escaped, or undecided.

    Seeds are uniform in the open trapping interval (or the fixed box
    around the invariant core when that interval is the whole line).  A
    seed is attracted at the first step its distance to the attractor
    support drops to eps; it escapes at the first step it falls below
    the trap's left endpoint, from where divergence is monotone.
    Undecided is a first-class outcome at horizon exhaustion.
    """
    if n_samples < 1 or horizon < 1:
        raise OutOfDomain("n_samples and horizon must be >= 1")
    attr = target if target is not None else build_attractor(p)
    support = attr.support()
    trap = trapping_interval(p)
    esc_bound = trap.alpha if trap.bounded else -ESCAPE_THRESHOLD

    rng = np.random.default_rng(seed)
    lo, hi = _seed_box(p)
    x = rng.uniform(lo, hi, n_samples)
    state = np.zeros(n_samples, dtype=np.int8)  # 0 undecided, 1 attracted, 2 escaped
    landing = np.full(n_samples, -1, dtype=np.int64)

    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(horizon + 1):
            if support is not None:
                dist = _distance_to_union(x, support)
                newly = (state == 0) & (dist <= eps)
                landing[newly] = step
                state[newly] = 1
            escaped = (state == 0) & (x < esc_bound)
            state[escaped] = 2
            if step == horizon or not (state == 0).any():
                break
            x = np.where(x <= 0.0, 1.0 + p.r * x, 1.0 - p.k * x)

    n_attracted = int((state == 1).sum())
    n_escaped = int((state == 2).sum())
    n_undecided = int((state == 0).sum())
    median = float(np.median(landing[state == 1])) if n_attracted else None
    return FateStats(
        n_samples=n_samples,
        n_to_attractor=n_attracted,
        n_escaped=n_escaped,
        n_undecided=n_undecided,
        median_landing_time=median,
        seed=seed,
        eps=eps,
        horizon=horizon,
    )


@dataclass(frozen=True)
class CoveredAt:
    n: int


@dataclass(frozen=True)
class NotCovered:
    horizon: int


def covering_test(
    p: MapParams,
    power: int,
    start: tuple[float, float],
    target: IntervalUnion,
    horizon: int = 200,
    tol: float = 1e-9,
) -> CoveredAt | NotCovered:
    """Iterate a start interval exactly until its image covers the target.

    The image is computed interval-by-interval with a split at the
    kink, so coverage is monotone: supersets map to supersets and a
    covered target stays covered.  This is the transitivity surrogate
    on chaotic supports; on a periodic-orbit region small intervals
    contract and the target is never covered.
    """
    lo, hi = start
    if not hi > lo:
        raise OutOfDomain(f"start interval must have positive width, got ({lo}, {hi})")
    if power < 1 or horizon < 1:
        raise OutOfDomain("power and horizon must be >= 1")
    current = IntervalUnion.single(lo, hi)
    for n in range(1, horizon + 1):
        for _ in range(power):
            current = current.image_f(p)
        if current.covers(target, tol):
            return CoveredAt(n=n)
    return NotCovered(horizon=horizon)
