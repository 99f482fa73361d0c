"""Parameter-space atlas for canonical skew tent maps.

The positive quadrant of the (k, r) slope plane splits into six regions
with distinct dynamics:

* ``FixedPoint``          k < 1: a globally attracting fixed point.
* ``TwoCycle``            k > 1, r < 1/k: an attracting period-2 orbit.
* ``FullIntervalChaos``   k > 1 and either max(1, k/(k^2-1)) < r < k/(k-1)
                          or k/(k^2-1) < r < 1/(k-1): chaos on [1-k, 1].
* ``Cascade{p}``          k > 1, 1/k < r <= k/(k^2-1): a band attractor
                          with 2^p bands, organised by the slope
                          renormalization r_{p+1} = k_p^2, k_{p+1} = r_p k_p.
* ``Window{m, sub}``      0 < r < 1, k > 1 + 1/r: the period-(m+1)
                          window between the walls K_m(r) < k < K_{m+1}(r),
                          split into four subregions R1..R4.
* ``EscapeCantor``        k > 1, r > k/(k-1): almost every orbit escapes
                          to -infinity; a chaotic Cantor repeller remains.

Defining inequalities within a relative tolerance of equality classify
as ``Boundary`` rather than being assigned to a neighbouring open
region.  All curve solving uses bisection: every boundary curve comes
with a proved monotone sign structure, which makes bisection
unconditionally safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .core import MapParams
from .errors import DepthOverflow, InvalidMap, NotClassified, OutOfDomain

DEFAULT_TAU = 1e-12
DEFAULT_P_MAX = 40

# exp() saturates beyond this; signs are still exact in the log domain.
_LOG_HUGE = 709.0
# Direct power evaluation of t_p below this depth, log-domain above.
_DIRECT_P_MAX = 7
_BISECT_ITERS = 200
_RENORM_LIMIT = 1e300


class Region(str, Enum):
    TRIVIAL = "Trivial"
    FIXED_POINT = "FixedPoint"
    TWO_CYCLE = "TwoCycle"
    FULL_CHAOS = "FullIntervalChaos"
    ESCAPE = "EscapeCantor"
    CASCADE = "Cascade"
    WINDOW = "Window"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegionTag:
    """Classification outcome; payload fields depend on the region.

    Cascade carries the band depth ``p`` and whether the depth was
    certified terminal (t_p > 0 found) or capped at ``p_max``.  Window
    carries the window index ``m >= 2`` and the subregion ``R1``..``R4``.
    Boundary carries the name of the curve that was hit.
    """

    region: Region
    p: int | None = None
    terminal: bool | None = None
    m: int | None = None
    sub: str | None = None
    which: str | None = None

    def __str__(self) -> str:
        if self.region is Region.CASCADE:
            suffix = "" if self.terminal else f" (depth capped at {self.p})"
            return f"Cascade p={self.p}{suffix}"
        if self.region is Region.WINDOW:
            return f"Window m={self.m} sub={self.sub}"
        if self.region is Region.BOUNDARY:
            return f"Boundary[{self.which}]"
        return self.region.value


def _cmp(lhs: float, rhs: float, tau: float) -> int:
    """Three-way compare with relative tolerance tau (0 means 'on the curve')."""
    scale = max(1.0, abs(lhs), abs(rhs))
    if abs(lhs - rhs) <= tau * scale:
        return 0
    return 1 if lhs > rhs else -1


def _bisect(f, lo: float, hi: float, iters: int = _BISECT_ITERS) -> float:
    """Plain bisection; requires a sign change on [lo, hi]."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise OutOfDomain(f"no sign change on [{lo}, {hi}]")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)


# -- renormalization ------------------------------------------------------


def chi(p: int) -> int:
    """Exponent growth of the slope renormalization: (2^{p+1} + 2(-1)^{p+1})/3."""
    if p < 0:
        raise OutOfDomain(f"index must be >= 0, got {p}")
    return (2 ** (p + 1) + 2 * (-1) ** (p + 1)) // 3


@dataclass(frozen=True)
class RenormState:
    """One step of the slope renormalization r_{p+1} = k_p^2, k_{p+1} = r_p*k_p."""

    p: int
    r_p: float
    k_p: float
    chi: int


def renorm_sequence(params: MapParams, depth: int) -> list[RenormState]:
    """States 0..depth of the renormalization recurrence, with overflow guard."""
    if depth < 0:
        raise OutOfDomain(f"depth must be >= 0, got {depth}")
    r_p, k_p = params.r, params.k
    states = [RenormState(p=0, r_p=r_p, k_p=k_p, chi=chi(0))]
    for p in range(1, depth + 1):
        r_p, k_p = k_p * k_p, r_p * k_p
        if r_p > _RENORM_LIMIT or k_p > _RENORM_LIMIT:
            raise DepthOverflow(f"renormalized slopes exceed 1e300 at depth {p}")
        states.append(RenormState(p=p, r_p=r_p, k_p=k_p, chi=chi(p)))
    return states


def renorm_closed_form(params: MapParams, p: int) -> tuple[float, float]:
    """(r_p, k_p) from the closed-form exponents, evaluated in the log domain."""
    c = chi(p)
    sgn = (-1) ** p
    log_r, log_k = math.log(params.r), math.log(params.k)
    log_kp = (c // 2) * log_r + (c + sgn) * log_k
    log_rp = (c // 2 + sgn) * log_r + c * log_k
    exp = lambda v: math.inf if v > _LOG_HUGE else math.exp(v)
    return exp(log_rp), exp(log_kp)


def _t_exponents(p: int) -> tuple[int, int]:
    """Exponents (A, B) of the depth-p sign polynomial t_p = r^A k^B - k - r."""
    c = chi(p)
    if p % 2 == 1:
        return c, 2 * c - 1
    return c + 1, 2 * c + 2


def t_poly(p: int, k: float, r: float) -> float:
    """Value of t_p(k, r), whose sign equals the sign of r_p*k_p^2 - k_p - r_p.

    Saturates to +inf when r^A * k^B exceeds the binary64 range; the
    sign is still exact because the comparison happens in the log
    domain.
    """
    if p < 0:
        raise OutOfDomain(f"index must be >= 0, got {p}")
    if k <= 0.0 or r <= 0.0:
        raise OutOfDomain("t_poly requires k > 0 and r > 0")
    a_exp, b_exp = _t_exponents(p)
    log_term = a_exp * math.log(r) + b_exp * math.log(k)
    if log_term > _LOG_HUGE:
        return math.inf
    if p <= _DIRECT_P_MAX:
        try:
            return r**a_exp * k**b_exp - (k + r)
        except OverflowError:
            pass
    return math.exp(log_term) - (k + r)


def _t_sign(p: int, k: float, r: float, tau: float) -> int:
    """Sign of t_p with a relative log-domain tolerance band around zero."""
    a_exp, b_exp = _t_exponents(p)
    diff = a_exp * math.log(r) + b_exp * math.log(k) - math.log(k + r)
    if abs(diff) <= tau:
        return 0
    return 1 if diff > 0.0 else -1


def rho(p: int, k: float) -> float:
    """The unique positive root r of t_p(k, r) = 0.

    Closed forms exist for p <= 2; beyond that the root is bisected
    inside (0, rho(p-1, k)], using that t_p has the same sign as
    r - rho_p(k).  rho_0 needs k > 1, higher indices only k >= 1.
    """
    if p < 0:
        raise OutOfDomain(f"index must be >= 0, got {p}")
    if p == 0:
        if k <= 1.0:
            raise OutOfDomain(f"rho_0 needs k > 1, got {k}")
        return k / (k * k - 1.0)
    if k < 1.0:
        raise OutOfDomain(f"rho_{p} needs k >= 1, got {k}")
    if p == 1:
        # (1 + sqrt(1 + 4k^4)) / (2k^3), rearranged to avoid overflow in k^4.
        return 0.5 / k**3 + math.sqrt(0.25 / k**6 + 1.0 / (k * k))
    if p == 2:
        # Cardano form of the cubic k^6 r^3 - k - r = 0.
        disc = math.sqrt(max(0.0, 1.0 - 4.0 / (27.0 * k**8)))
        u = (1.0 + disc) / (2.0 * k**5)
        v = (1.0 - disc) / (2.0 * k**5)
        return u ** (1.0 / 3.0) + v ** (1.0 / 3.0)
    hi = rho(p - 1, k)
    guard = 0
    while _t_sign(p, k, hi, 0.0) <= 0:
        hi *= 2.0
        guard += 1
        if guard > 200:
            raise OutOfDomain(f"failed to bracket rho_{p}({k})")
    lo = hi
    guard = 0
    while _t_sign(p, k, lo, 0.0) >= 0:
        lo *= 0.5
        guard += 1
        if guard > 200:
            raise OutOfDomain(f"failed to bracket rho_{p}({k})")
    return _bisect(lambda rr: float(_t_sign(p, k, rr, 0.0)), lo, hi)


def K_threshold(p: int) -> float:
    """The unique root of t_p(k, 1/k) in (1, 2); decreasing in p, tending to 1.

    For k < K_p the cascade curve rho_p(k) still lies above the lower
    region wall r = 1/k; beyond K_p it has dropped below it.
    """
    if p < 2:
        raise OutOfDomain(f"K_p is defined for p >= 2, got {p}")
    a_exp, b_exp = _t_exponents(p)
    power = b_exp - a_exp

    def f(k: float) -> float:
        return power * math.log(k) - math.log(k + 1.0 / k)

    return _bisect(f, 1.0, 2.0)


# -- period windows -------------------------------------------------------


def _geom_sum(r: float, m: int) -> float:
    """1 + r + ... + r^{m-1} by Horner."""
    acc = 0.0
    for _ in range(m):
        acc = 1.0 + r * acc
    return acc


def K_wall(m: int, r: float) -> float:
    """Window wall K_m(r) = 1 + 1/r + ... + 1/r^{m-1}."""
    if m < 1:
        raise OutOfDomain(f"wall index must be >= 1, got {m}")
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"window walls need 0 < r < 1, got r={r}")
    acc = 1.0
    for _ in range(m - 1):
        acc = 1.0 + acc / r
    return acc


def window_index(k: float, r: float, tau: float = DEFAULT_TAU) -> int | None:
    """The m >= 2 with K_m(r) < k < K_{m+1}(r), or None when k <= K_2(r).

    Raises :class:`NotClassified` carrying the wall name when k is
    within relative tau of a wall.
    """
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"window index needs 0 < r < 1, got r={r}")
    wall = 1.0 + 1.0 / r  # K_2
    if _cmp(k, wall, tau) == 0:
        raise NotClassified("k=K_2(r)")
    if k < wall:
        return None
    m = 2
    while True:
        nxt = 1.0 + wall / r  # K_{m+1}
        if _cmp(k, nxt, tau) == 0:
            raise NotClassified(f"k=K_{m + 1}(r)")
        if k < nxt:
            return m
        wall = nxt
        m += 1
        if m > 10**6:
            raise OutOfDomain("window index exceeded 1e6; k is unreasonably large")


@dataclass(frozen=True)
class WindowGeometry:
    """Walls and inner boundaries of the window T_m at a given r.

    ``K_m`` and ``K_m1`` are the outer walls, ``inv_rm`` = 1/r^m the
    stability edge of the period-(m+1) orbit, ``N_m`` and ``L_m`` the
    inner boundaries separating the band subregions.  ``alpha_m``,
    ``beta_m`` and ``gamma_m`` are the critical r values at which the
    curves 1/r^m, L_m and N_m cross the wall K_m; they depend on m only.
    """

    m: int
    r: float
    K_m: float
    K_m1: float
    inv_rm: float
    N_m: float
    L_m: float
    alpha_m: float
    beta_m: float
    gamma_m: float


def L_curve(m: int, r: float) -> float:
    """Inner boundary L_m(r) = (1 + sqrt(1 + 4r^{m+1}))/(2r^m); sign curve of r^m k^2 - k - r."""
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"L_m needs 0 < r < 1, got r={r}")
    rm = r**m
    return (1.0 + math.sqrt(1.0 + 4.0 * rm * r)) / (2.0 * rm)


def N_curve(m: int, r: float) -> float:
    """Inner boundary N_m(r): the unique root of r^{2m} k^3 - k - r above 1/r^m."""
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"N_m needs 0 < r < 1, got r={r}")
    r2m = r ** (2 * m)
    lo = 1.0 / r**m
    hi = L_curve(m, r)

    def f(x: float) -> float:
        return r2m * x**3 - x - r

    return _bisect(f, lo, hi)


def alpha_threshold(m: int) -> float:
    """Root of 1 - 2r + r^{m+1} in (0.5, 1): where K_m(r) crosses 1/r^m."""
    if m < 2:
        raise OutOfDomain(f"alpha_m needs m >= 2, got {m}")
    hi = (2.0 / (m + 1)) ** (1.0 / m)  # the minimum of the polynomial

    def f(r: float) -> float:
        return 1.0 - 2.0 * r + r ** (m + 1)

    return _bisect(f, 0.5, hi)


def beta_threshold(m: int) -> float:
    """Root of r*S_m(r)^2 - S_{m+1}(r) in (0, 1): where K_m(r) crosses L_m(r)."""
    if m < 2:
        raise OutOfDomain(f"beta_m needs m >= 2, got {m}")

    def f(r: float) -> float:
        s = _geom_sum(r, m)
        return r * s * s - _geom_sum(r, m + 1)

    return _bisect(f, 1e-9, 1.0 - 1e-12)


def gamma_threshold(m: int) -> float:
    """Root of r^2*S_m(r)^3 - S_{m+1}(r) in (0, 1): where K_m(r) crosses N_m(r)."""
    if m < 2:
        raise OutOfDomain(f"gamma_m needs m >= 2, got {m}")

    def f(r: float) -> float:
        s = _geom_sum(r, m)
        return r * r * s * s * s - _geom_sum(r, m + 1)

    return _bisect(f, 1e-9, 1.0 - 1e-12)


def window_geometry(m: int, r: float) -> WindowGeometry:
    """All walls, inner boundaries and critical thresholds of T_m at r."""
    if m < 2:
        raise OutOfDomain(f"window index must be >= 2, got {m}")
    if not 0.0 < r < 1.0:
        raise OutOfDomain(f"window geometry needs 0 < r < 1, got r={r}")
    return WindowGeometry(
        m=m,
        r=r,
        K_m=K_wall(m, r),
        K_m1=K_wall(m + 1, r),
        inv_rm=r**-m,
        N_m=N_curve(m, r),
        L_m=L_curve(m, r),
        alpha_m=alpha_threshold(m),
        beta_m=beta_threshold(m),
        gamma_m=gamma_threshold(m),
    )


# -- classification -------------------------------------------------------


@dataclass(frozen=True)
class CascadeDepth:
    p: int
    terminal: bool


def cascade_depth(params: MapParams, p_max: int = DEFAULT_P_MAX) -> CascadeDepth:
    """Smallest p with t_p(k, r) > 0, i.e. the certified band depth.

    Requires membership in the cascade region (k > 1, 1/k < r, and
    t_0 <= 0); the depth is capped at p_max with terminal=False when no
    sign change is found.
    """
    k, r = params.k, params.r
    if not (k > 1.0 and k * r > 1.0 and t_poly(0, k, r) <= 0.0):
        raise OutOfDomain(f"(k={k}, r={r}) is not in the cascade region")
    for p in range(1, p_max + 1):
        if t_poly(p, k, r) > 0.0:
            return CascadeDepth(p=p, terminal=True)
    return CascadeDepth(p=p_max, terminal=False)


def classify(params: MapParams, tau: float = DEFAULT_TAU, p_max: int = DEFAULT_P_MAX) -> RegionTag:
    """Assign the unique region tag of a slope pair.

    Any defining inequality within relative tau of equality yields a
    ``Boundary`` tag naming the curve; open regions are never assigned
    by rounding through a wall.
    """
    k, r = params.k, params.r
    if tau < 0.0:
        raise InvalidMap(f"tolerance must be >= 0, got {tau}")

    c = _cmp(k, 1.0, tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which="k=1")
    if c < 0:
        return RegionTag(Region.FIXED_POINT)

    c = _cmp(r, 1.0 / k, tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which="r=1/k")
    if c < 0:
        return RegionTag(Region.TWO_CYCLE)

    c = _cmp(r, k / (k - 1.0), tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which="r=k/(k-1)")
    if c > 0:
        return RegionTag(Region.ESCAPE)

    s0 = _t_sign(0, k, r, tau)
    if s0 == 0:
        return RegionTag(Region.BOUNDARY, which="r=rho_0(k)")
    if s0 < 0:
        # Band cascade: walk the renormalization polynomials.
        for p in range(1, p_max + 1):
            s = _t_sign(p, k, r, tau)
            if s == 0:
                return RegionTag(Region.BOUNDARY, which=f"r=rho_{p}(k)")
            if s > 0:
                return RegionTag(Region.CASCADE, p=p, terminal=True)
        return RegionTag(Region.CASCADE, p=p_max, terminal=False)

    c = _cmp(r, 1.0, tau)
    if c == 0:
        # r = 1 is interior to the full-interval chaos zone only below k = 2.
        if _cmp(k, 2.0, tau) < 0:
            return RegionTag(Region.FULL_CHAOS)
        return RegionTag(Region.BOUNDARY, which="r=1")
    if c > 0:
        return RegionTag(Region.FULL_CHAOS)

    try:
        m = window_index(k, r, tau)
    except NotClassified as exc:
        return RegionTag(Region.BOUNDARY, which=str(exc))
    if m is None:
        return RegionTag(Region.FULL_CHAOS)

    rm = r**m
    c = _cmp(k * rm, 1.0, tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which=f"k*r^{m}=1")
    if c < 0:
        return RegionTag(Region.WINDOW, m=m, sub="R1")
    c = _cmp(rm * k * k, k + r, tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which=f"k=L_{m}(r)")
    if c > 0:
        return RegionTag(Region.WINDOW, m=m, sub="R4")
    c = _cmp(rm * rm * k**3, k + r, tau)
    if c == 0:
        return RegionTag(Region.BOUNDARY, which=f"k=N_{m}(r)")
    if c > 0:
        return RegionTag(Region.WINDOW, m=m, sub="R2")
    return RegionTag(Region.WINDOW, m=m, sub="R3")
