"""Canonical skew tent maps, normal-form reduction, and orbit iteration.

The canonical family is

    f(x) = 1 + r*x   (x <= 0),        f(x) = 1 - k*x   (x >= 0),

with slopes r > 0 upward and -k < 0 downward and kink value f(0) = 1.
Any continuous two-slope tent map reduces to this family by affine
conjugacies unless its dynamics is trivial (a homeomorphism, or a map
whose kink sits on or below the diagonal).

For r > 1 the interval [alpha, beta] with alpha = -1/(r-1) and
beta = r/(k*(r-1)) traps every bounded orbit; points outside it run off
to -infinity.  When k > 1 and r <= k/(k-1) the core [1-k, 1] is
invariant and the rescaled restriction

    g(x) = b + r*x   (0 <= x <= a),   g(x) = k*(1 - x)   (a <= x <= 1),

with a = 1 - 1/k and b = 1 - r*a, maps [0, 1] onto itself.  The
conjugacy is h(x) = 1 - k + k*x.  All deeper constructions in this
package work with g and publish results through h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidMap, NotReducible, OutOfDomain

# Orbits are flagged as escaping once |x| exceeds this.
ESCAPE_THRESHOLD = 1e12
# Default iteration budget for landing-time searches.
DEFAULT_HORIZON = 10_000

_LEFT = "L"
_RIGHT = "R"


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidMap(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class MapParams:
    """Slope pair (k, r) of a canonical skew tent map.

    ``k`` is the magnitude of the falling right slope, ``r`` the rising
    left slope.  Both must be positive finite binary64 numbers; the
    normal-form reduction guarantees this for every nontrivial map.
    """

    k: float
    r: float

    def __post_init__(self):
        object.__setattr__(self, "k", _require_finite("k", self.k))
        object.__setattr__(self, "r", _require_finite("r", self.r))
        if self.k <= 0.0 or self.r <= 0.0:
            raise InvalidMap(f"slopes must be positive, got k={self.k}, r={self.r}")


@dataclass(frozen=True)
class GeneralTent:
    """A general two-slope tent map with kink at (x0, y0).

    The left branch has slope ``r`` and the right branch slope ``-k``
    (so ``k`` is the negated right slope and may itself be negative for
    a valley-shaped map).  Branch intercepts follow from the kink:
    s = y0 - r*x0 and t = y0 + k*x0.
    """

    r: float
    k: float
    x0: float
    y0: float

    def __post_init__(self):
        for name in ("r", "k", "x0", "y0"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))
        if self.r == 0.0 or self.k == 0.0:
            raise InvalidMap("branch slopes must be nonzero")
        if self.r == -self.k:
            raise InvalidMap("branches are parallel (equal slopes)")

    @classmethod
    def from_slopes(cls, left_slope: float, right_slope: float, x0: float, y0: float) -> "GeneralTent":
        """Build from raw line slopes; the right slope is stored negated."""
        return cls(r=left_slope, k=-right_slope, x0=x0, y0=y0)

    @property
    def s(self) -> float:
        return self.y0 - self.r * self.x0

    @property
    def t(self) -> float:
        return self.y0 + self.k * self.x0

    def __call__(self, x: float) -> float:
        if x <= self.x0:
            return self.s + self.r * x
        return self.t - self.k * x


@dataclass(frozen=True)
class Trivial:
    """Outcome of :func:`normalize` for maps with trivial dynamics."""

    reason: str


@dataclass(frozen=True)
class Canonical:
    """Outcome of :func:`normalize` carrying the canonical slope pair."""

    params: MapParams


NormalizeResult = Trivial | Canonical


def normalize(gt: GeneralTent) -> NormalizeResult:
    """Reduce a general tent map to canonical form or report triviality.

    Maps with same-sign branch slopes are homeomorphisms.  A valley map
    (left branch falling, right branch rising) is first flipped through
    x -> -x, which swaps the slope pair to (-k, -r) and negates the
    kink.  The translated map has kink ordinate gamma = y0 - x0; when
    gamma <= 0 every orbit ends up on a monotone branch.  Otherwise the
    rescaling x -> gamma*x lands on the canonical family and leaves the
    slope pair unchanged.
    """
    r, k, x0, y0 = gt.r, gt.k, gt.x0, gt.y0
    if r * k < 0.0:
        return Trivial("homeomorphism: both branch slopes share a sign")
    if r < 0.0 and k < 0.0:
        r, k, x0, y0 = -k, -r, -x0, -y0
    gamma = y0 - x0
    if gamma <= 0.0:
        return Trivial("monotone trap: kink on or below the diagonal")
    return Canonical(MapParams(k=k, r=r))


def eval_f(p: MapParams, x: float) -> float:
    """One application of the canonical map; the kink x = 0 takes the left branch."""
    if x <= 0.0:
        return 1.0 + p.r * x
    return 1.0 - p.k * x


@dataclass(frozen=True)
class Orbit:
    """A finite forward orbit with its per-step branch record.

    ``branches[i]`` is "L" or "R" according to the branch that produced
    ``points[i+1]`` from ``points[i]`` (ties at the kink count as "L").
    ``escaped`` is set when iteration stopped early because an iterate
    left [-ESCAPE_THRESHOLD, ESCAPE_THRESHOLD].
    """

    x0: float
    points: tuple[float, ...]
    branches: tuple[str, ...]
    escaped: bool = False

    def __len__(self) -> int:
        return len(self.points)


def iterate_f(p: MapParams, x0: float, n: int) -> Orbit:
    """Iterate the canonical map n times from x0, recording branches."""
    if n < 0:
        raise OutOfDomain(f"iteration count must be >= 0, got {n}")
    x = float(x0)
    points = [x]
    branches: list[str] = []
    escaped = False
    for _ in range(n):
        if x <= 0.0:
            branches.append(_LEFT)
            x = 1.0 + p.r * x
        else:
            branches.append(_RIGHT)
            x = 1.0 - p.k * x
        points.append(x)
        if abs(x) > ESCAPE_THRESHOLD:
            escaped = True
            break
    return Orbit(x0=float(x0), points=tuple(points), branches=tuple(branches), escaped=escaped)


@dataclass(frozen=True)
class TrappingInterval:
    """Endpoints of the trapping interval; infinite when r <= 1."""

    alpha: float
    beta: float

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.alpha)


def trapping_interval(p: MapParams) -> TrappingInterval:
    """Trapping interval [alpha, beta]: f(alpha) = alpha and f(beta) = alpha when r > 1."""
    if p.r > 1.0:
        alpha = -1.0 / (p.r - 1.0)
        beta = p.r / (p.k * (p.r - 1.0))
        return TrappingInterval(alpha=alpha, beta=beta)
    return TrappingInterval(alpha=-math.inf, beta=math.inf)


@dataclass(frozen=True)
class Landed:
    n: int


@dataclass(frozen=True)
class Escaped:
    step: int


@dataclass(frozen=True)
class Undecided:
    horizon: int


LandingResult = Landed | Escaped | Undecided


def landing_time(p: MapParams, x: float, horizon: int = DEFAULT_HORIZON) -> LandingResult:
    """First hitting time of the invariant core [1-k, 1].

    Escape is reported as soon as an iterate leaves the trapping
    interval (r > 1) or falls below -ESCAPE_THRESHOLD; from there the
    orbit diverges monotonically to -infinity.  The escape check runs
    before the landing check so that points already thrown out of the
    trap are never reported as landed.
    """
    if horizon < 1:
        raise OutOfDomain(f"horizon must be >= 1, got {horizon}")
    trap = trapping_interval(p)
    lo_core = 1.0 - p.k
    cur = float(x)
    for n in range(horizon + 1):
        if p.r > 1.0 and (cur < trap.alpha or cur > trap.beta):
            return Escaped(step=n)
        if cur < -ESCAPE_THRESHOLD:
            return Escaped(step=n)
        if lo_core <= cur <= 1.0:
            return Landed(n=n)
        cur = eval_f(p, cur)
    return Undecided(horizon=horizon)


@dataclass(frozen=True)
class UnitMap:
    """The canonical map restricted to [1-k, 1] and rescaled onto [0, 1].

    Kink at a = 1 - 1/k with g(a) = 1 and left intercept b = 1 - r*a.
    Valid when k > 1 and r <= k/(k-1); the conjugacy back to the line
    is h(x) = 1 - k + k*x.
    """

    params: MapParams
    a: float
    b: float

    def to_f(self, x: float) -> float:
        """Unit coordinate -> line coordinate through h."""
        return 1.0 - self.params.k + self.params.k * x

    def from_f(self, x: float) -> float:
        """Line coordinate -> unit coordinate through h^{-1}."""
        return (x - (1.0 - self.params.k)) / self.params.k


def to_unit(p: MapParams) -> UnitMap:
    """Conjugate onto [0, 1]; requires k > 1 and r <= k/(k-1)."""
    if p.k <= 1.0:
        raise NotReducible(f"k must exceed 1, got k={p.k}")
    if p.r > p.k / (p.k - 1.0):
        raise NotReducible(f"r={p.r} exceeds k/(k-1)={p.k / (p.k - 1.0)}; the core is not invariant")
    a = 1.0 - 1.0 / p.k
    b = 1.0 - p.r * a
    return UnitMap(params=p, a=a, b=b)


# eval_g tolerates one-ulp overshoot outside [0, 1] from upstream rounding.
_UNIT_SLACK = 1e-9


def eval_g(u: UnitMap, x: float) -> float:
    """One application of the unit map; results are clamped to [0, 1].

    The clamp absorbs the one-ulp overshoot that b + r*x can produce at
    the kink, where the exact value is 1.
    """
    if not -_UNIT_SLACK <= x <= 1.0 + _UNIT_SLACK:
        raise OutOfDomain(f"x={x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x <= u.a:
        val = u.b + u.params.r * x
    else:
        val = u.params.k * (1.0 - x)
    return min(max(val, 0.0), 1.0)


def iterate_g(u: UnitMap, x0: float, n: int) -> Orbit:
    """Iterate the unit map n times from x0 in [0, 1], recording branches."""
    if n < 0:
        raise OutOfDomain(f"iteration count must be >= 0, got {n}")
    if not -_UNIT_SLACK <= x0 <= 1.0 + _UNIT_SLACK:
        raise OutOfDomain(f"x0={x0} outside [0, 1]")
    x = min(max(float(x0), 0.0), 1.0)
    points = [x]
    branches: list[str] = []
    for _ in range(n):
        branches.append(_LEFT if x <= u.a else _RIGHT)
        x = eval_g(u, x)
        points.append(x)
    return Orbit(x0=float(x0), points=tuple(points), branches=tuple(branches))
