"""Closed-form attractors and exceptional sets for every parameter region.

Each region of the atlas comes with an explicit attractor: a fixed
point, a periodic orbit, a finite union of closed intervals (a band
attractor), the full core [1-k, 1], or nothing at all in the escape
region.  Constructions follow the closed forms; every band union is
then certified numerically for pairwise disjointness and invariance,
and failures raise :class:`PrecisionLoss` instead of returning
unverified data.

Line ("f") coordinates are the public representation.  Window and
cascade internals live in unit coordinates and pass through the
conjugacy h(x) = 1 - k + k*x exactly once on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .core import MapParams, UnitMap, eval_f, eval_g, iterate_f, iterate_g, to_unit, trapping_interval
from .errors import DepthOverflow, NotClassified, OutOfDomain, PrecisionLoss, WrongRegion
from .intervals import IntervalUnion
from .regions import Region, RegionTag, cascade_depth, classify, renorm_sequence, t_poly, window_index

if TYPE_CHECKING:  # pragma: no cover
    from .symbolic import CantorSystem

# Residual bound for periodic-orbit identities.
ORBIT_RESIDUAL_TOL = 1e-10
# Hausdorff defect bound for band invariance certificates.
INVARIANCE_TOL = 1e-9
# Band counts grow like 2^p; refuse to materialize absurd depths.
MAX_CASCADE_DEPTH = 18


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic orbit in line coordinates with its slope multiplier.

    ``multiplier`` is the signed product of branch slopes over one
    period (+r on the left branch, -k on the right); the orbit is
    stable exactly when its magnitude is below 1.
    """

    points: tuple[float, ...]
    period: int
    multiplier: float
    stable: bool


def _make_orbit(params: MapParams, points: tuple[float, ...], multiplier: float) -> PeriodicOrbit:
    period = len(points)
    x0 = points[0]
    check = iterate_f(params, x0, period)
    residual = abs(check.points[-1] - x0)
    if residual > ORBIT_RESIDUAL_TOL * max(1.0, abs(x0)):
        raise PrecisionLoss(f"period-{period} orbit failed its return residual", defect=residual)
    return PeriodicOrbit(points=points, period=period, multiplier=multiplier, stable=abs(multiplier) < 1.0)


class AttractorKind(str, Enum):
    POINT = "Point"
    CYCLE = "Cycle"
    BANDS = "Bands"
    FULL_INTERVAL = "FullInterval"
    NONE_ESCAPE = "NoneEscape"


@dataclass(frozen=True)
class ExceptionalSet:
    """Description of the sets not attracted to the attractor.

    ``points`` are isolated unstable periodic points (their full orbits
    and preimages are implied), ``orbits`` full unstable periodic
    orbits, ``cantor`` an invariant Cantor repeller handle.
    """

    points: tuple[float, ...] = ()
    orbits: tuple[PeriodicOrbit, ...] = ()
    cantor: "CantorSystem | None" = None
    note: str = ""

    @property
    def empty(self) -> bool:
        return not self.points and not self.orbits and self.cantor is None


@dataclass(frozen=True)
class Attractor:
    """Tagged attractor payload plus the exceptional set, all in line coordinates."""

    kind: AttractorKind
    params: MapParams
    region: RegionTag
    point: float | None = None
    cycle: PeriodicOrbit | None = None
    bands: IntervalUnion | None = None
    interval: tuple[float, float] | None = None
    exceptional: ExceptionalSet = field(default_factory=ExceptionalSet)

    def support(self) -> IntervalUnion | None:
        """The attractor as an interval union (degenerate for points/cycles)."""
        if self.kind is AttractorKind.POINT:
            return IntervalUnion.single(self.point, self.point)
        if self.kind is AttractorKind.CYCLE:
            return IntervalUnion(tuple((x, x) for x in self.cycle.points))
        if self.kind is AttractorKind.BANDS:
            return self.bands
        if self.kind is AttractorKind.FULL_INTERVAL:
            return IntervalUnion.single(*self.interval)
        return None


# -- simple regions --------------------------------------------------------


def fixed_point_attractor(params: MapParams) -> Attractor:
    """Attracting fixed point x* = 1/(k+1), valid for k < 1."""
    if params.k >= 1.0:
        raise WrongRegion(f"fixed-point region needs k < 1, got k={params.k}")
    x_star = 1.0 / (params.k + 1.0)
    return Attractor(
        kind=AttractorKind.POINT,
        params=params,
        region=RegionTag(Region.FIXED_POINT),
        point=x_star,
    )


def two_cycle(params: MapParams) -> Attractor:
    """Attracting period-2 orbit for k > 1, r < 1/k.

    The cycle solves f(p) = q on the left branch and f(q) = p on the
    right: p = (1-k)/(1+rk), q = (1+r)/(1+rk), multiplier -rk.  Only
    the fixed point x* = 1/(k+1) and its preimages miss it.
    """
    k, r = params.k, params.r
    if not (k > 1.0 and r < 1.0 / k):
        raise WrongRegion(f"two-cycle region needs k > 1 and r < 1/k, got (k={k}, r={r})")
    denom = 1.0 + r * k
    p_neg = (1.0 - k) / denom
    q_pos = (1.0 + r) / denom
    orbit = _make_orbit(params, (p_neg, q_pos), multiplier=-r * k)
    exceptional = ExceptionalSet(points=(1.0 / (k + 1.0),), note="unstable fixed point and its preimages")
    return Attractor(
        kind=AttractorKind.CYCLE,
        params=params,
        region=RegionTag(Region.TWO_CYCLE),
        cycle=orbit,
        exceptional=exceptional,
    )


# -- band-merging cascade ---------------------------------------------------


@dataclass(frozen=True)
class CascadeData:
    """Depth-p band attractor data.

    ``bands`` are the 2^p disjoint closed intervals in line coordinates;
    ``unstable_points`` the gap points (one per merge level) whose
    orbits are the only ones not attracted.  ``b_p``, ``a_p`` and
    ``c_p`` are the unit-coordinate landmarks of the deepest
    renormalization level: the left band edge, the inner kink, and the
    unstable gap fixed point.
    """

    p: int
    b_p: float
    a_p: float
    c_p: float
    bands: IntervalUnion
    unstable_points: tuple[float, ...]


def cascade_attractor(params: MapParams, depth: int | None = None) -> CascadeData:
    """Band attractor with 2^p bands built by endpoint iteration.

    The bands are the forward images of [f^{2^p}(1), 1]; the endpoint
    pair is iterated and hulled, which is exact because only the last
    band contains the kink.  Disjointness and invariance of the union
    are certified, as are the unstable gap points
    c_m = (f^{2^m}(1) + k_m)/(k_m + 1) for m < p.
    """
    k, r = params.k, params.r
    if not (k > 1.0 and k * r > 1.0 and t_poly(0, k, r) <= 0.0):
        raise WrongRegion(f"(k={k}, r={r}) is outside the cascade region")
    if depth is None:
        d = cascade_depth(params)
        depth = d.p
    if depth < 1:
        raise OutOfDomain(f"cascade depth must be >= 1, got {depth}")
    if t_poly(depth - 1, k, r) >= 0.0:
        raise WrongRegion(f"(k={k}, r={r}) is outside the interior of the depth-{depth} cascade set")
    if depth > MAX_CASCADE_DEPTH:
        raise DepthOverflow(f"2^{depth} bands exceed the materialization limit (2^{MAX_CASCADE_DEPTH})")

    n_bands = 2**depth
    seed = iterate_f(params, 1.0, n_bands)
    e0 = seed.points[-1]  # f^{2^p}(1)
    lo, hi = e0, 1.0
    pieces = [(lo, hi)]
    for _ in range(n_bands - 1):
        if lo < 0.0 < hi:
            raise PrecisionLoss("an interior cascade band straddles the kink; parameters sit too close to a boundary")
        flo, fhi = eval_f(params, lo), eval_f(params, hi)
        lo, hi = (flo, fhi) if flo <= fhi else (fhi, flo)
        pieces.append((lo, hi))
    bands = IntervalUnion(tuple(pieces))
    if len(bands) != n_bands:
        raise PrecisionLoss(f"expected {n_bands} bands, built {len(bands)}")

    gap = min(b[0] - a[1] for a, b in zip(bands.intervals, bands.intervals[1:]))
    if gap <= 0.0:
        raise PrecisionLoss("cascade bands are not pairwise disjoint", defect=gap)
    defect = bands.image_f(params).hausdorff(bands)
    if defect > INVARIANCE_TOL:
        raise PrecisionLoss("cascade band union failed its invariance certificate", defect=defect)

    states = renorm_sequence(params, depth)
    unstable = []
    for m in range(depth):
        k_m = states[m].k_p
        f2m = iterate_f(params, 1.0, 2**m).points[-1]
        c = (f2m + k_m) / (k_m + 1.0)
        ret = iterate_f(params, c, 2**m)
        residual = abs(ret.points[-1] - c)
        if residual > 1e-8 * max(1.0, k_m):
            raise PrecisionLoss(f"gap point at merge level {m} failed its fixed-point residual", defect=residual)
        mult = 1.0
        for branch in ret.branches:
            mult *= params.r if branch == "L" else -params.k
        if abs(mult) <= 1.0:
            raise PrecisionLoss(f"gap point at merge level {m} is not expanding (multiplier {mult})")
        if bands.contains(c):
            raise PrecisionLoss(f"gap point at merge level {m} lies inside a band")
        unstable.append(c)

    unit = to_unit(params)
    b_p = unit.from_f(e0)
    k_p = states[depth].k_p
    a_p = 1.0 - (1.0 - b_p) / k_p
    c_p = (b_p + k_p) / (k_p + 1.0)
    return CascadeData(p=depth, b_p=b_p, a_p=a_p, c_p=c_p, bands=bands, unstable_points=tuple(unstable))


# -- period windows ---------------------------------------------------------


@dataclass(frozen=True)
class WindowData:
    """Unit-coordinate skeleton of the period-(m+1) window dynamics.

    ``x_m`` is the unique point whose (m-1)-st image is the kink; the
    (m+1)-st iterate of the unit map is piecewise linear on
    [0, g(x_m)] with breakpoints at x_m and x_m + 1/(k^2 r^{m-1}) and
    slopes -k r^m, +k^2 r^{m-1}, -k r^m.  ``a1`` and ``b1`` solve the
    return equation on the first two segments; ``p_val``, ``p1`` and
    ``p2`` are the band-generating images k r^m x_m and its splitting
    pair.  ``bhat`` and ``trap`` exist only when r^m k^2 - k - r < 0.
    """

    params: MapParams
    m: int
    unit: UnitMap
    x_m: float
    a1: float
    b1: float
    p_val: float
    p1: float
    p2: float
    a_orbit: tuple[float, ...]
    b_orbit: tuple[float, ...]
    bhat: tuple[float, ...] | None
    trap: tuple[tuple[float, float], ...] | None

    def g_power_m1(self, x: float) -> float:
        """Closed-form (m+1)-fold unit-map composition on [0, g(x_m)]."""
        k, r, m = self.params.k, self.params.r, self.m
        edge = self.unit.b + r * self.x_m
        if not -1e-12 <= x <= edge + 1e-12:
            raise OutOfDomain(f"x={x} outside the closed-form domain [0, {edge}]")
        krm = k * r**m
        k2rm1 = k * k * r ** (m - 1)
        if x <= self.x_m:
            return -krm * (x - self.x_m)
        if x <= self.x_m + 1.0 / k2rm1:
            return k2rm1 * (x - self.x_m)
        return self.unit.b + r - krm * (x - self.x_m)


def _chain_increasing(values, label: str):
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise PrecisionLoss(f"ordering chain {label} violated: {a} >= {b}")


def window_core(params: MapParams) -> WindowData:
    """Window skeleton: x_m, both period-(m+1) orbits, trap set, closed form.

    Valid on the open window T_m; raises :class:`NotClassified` on a
    window wall and :class:`WrongRegion` outside the window zone.
    """
    k, r = params.k, params.r
    if not 0.0 < r < 1.0:
        raise WrongRegion(f"window region needs 0 < r < 1, got r={r}")
    m = window_index(k, r)
    if m is None:
        raise WrongRegion(f"(k={k}, r={r}) lies below the first window wall")
    unit = to_unit(params)
    a, b = unit.a, unit.b

    geom = 0.0  # 1 + r + ... + r^{m-1}
    for _ in range(m):
        geom = 1.0 + r * geom
    x_m = 1.0 - geom / (k * r ** (m - 1))
    if not 0.0 < x_m < b:
        raise PrecisionLoss(f"kink preimage x_m={x_m} escaped (0, b); parameters sit on a wall")

    krm = k * r**m
    k2rm1 = k * k * r ** (m - 1)
    a1 = krm * x_m / (krm + 1.0)
    b1 = k2rm1 * x_m / (k2rm1 - 1.0)
    p_val = krm * x_m
    p1 = k2rm1 * (krm - 1.0) * x_m
    p2 = p_val - krm * p1

    # g^{m-1}(x_m) must be the kink.
    xm_orbit = iterate_g(unit, x_m, m).points
    residual = abs(xm_orbit[m - 1] - a)
    if residual > ORBIT_RESIDUAL_TOL:
        raise PrecisionLoss("kink preimage identity g^{m-1}(x_m) = a failed", defect=residual)

    a_orbit = iterate_g(unit, a1, m).points
    b_orbit = iterate_g(unit, b1, m).points
    _chain_increasing(a_orbit, "a-orbit")
    _chain_increasing(b_orbit, "b-orbit")

    bhat = None
    trap = None
    if rm_discriminant(params, m) < 0.0:
        zero_orbit = iterate_g(unit, 0.0, m).points
        # Interleaving of the two orbits between the images of 0 and x_m.
        for i in range(1, m):
            chain = (zero_orbit[i - 1], a_orbit[i - 1], xm_orbit[i - 1], b_orbit[i - 1], zero_orbit[i], xm_orbit[i])
            _chain_increasing(chain, f"orbit interleaving at step {i}")
        _chain_increasing(
            (zero_orbit[m - 1], a_orbit[m - 1], a, b_orbit[m - 1], b_orbit[m], zero_orbit[m], a_orbit[m]),
            "orbit interleaving at the kink step",
        )
        # Backward chain toward b_{m+1} through the rising branch.
        hats = [b_orbit[m]]
        for i in range(m, 1, -1):
            hats.append((hats[-1] - b) / r)
        hats.reverse()  # (hat b_2, ..., hat b_{m+1})
        for i in range(2, m + 1):
            lo_ok = b_orbit[i - 2] < hats[i - 2] < zero_orbit[i - 1]
            if not lo_ok:
                raise PrecisionLoss(f"backward chain point hat_b_{i} escaped its bracket")
        bhat = tuple(hats)
        pieces = [(0.0, b1)]
        pieces += [(hats[i - 2], b_orbit[i - 1]) for i in range(2, m + 1)]
        pieces.append((b_orbit[m], 1.0))
        trap = tuple(pieces)

    data = WindowData(
        params=params,
        m=m,
        unit=unit,
        x_m=x_m,
        a1=a1,
        b1=b1,
        p_val=p_val,
        p1=p1,
        p2=p2,
        a_orbit=tuple(a_orbit),
        b_orbit=tuple(b_orbit),
        bhat=bhat,
        trap=trap,
    )

    # Spot-check the closed form against plain iteration.
    edge = b + r * x_m
    for i in range(17):
        x = edge * i / 16.0
        direct = iterate_g(unit, x, m + 1).points[-1]
        if abs(data.g_power_m1(x) - direct) > ORBIT_RESIDUAL_TOL:
            raise PrecisionLoss(
                "closed form of the (m+1)-fold composition disagrees with iteration",
                defect=abs(data.g_power_m1(x) - direct),
            )
    return data


def rm_discriminant(params: MapParams, m: int) -> float:
    """r^m k^2 - k - r: negative on R1..R3, positive on R4."""
    return params.r**m * params.k**2 - params.k - params.r


def window_periodic_orbits(params: MapParams) -> tuple[PeriodicOrbit, PeriodicOrbit, tuple[tuple[float, float], ...]]:
    """Both period-(m+1) orbits and the forward-invariant trap set, in line coordinates.

    The rising orbit through a_1 has multiplier -k r^m (attracting in
    R1, repelling in R3); the orbit through b_1 has multiplier
    +k^2 r^{m-1} and is always repelling.  The trap U is the open
    neighbourhood of the a-orbit that every non-exceptional point
    enters.  Requires r^m k^2 - k - r < 0 (subregions R1, R2, R3).
    """
    wd = window_core(params)
    if wd.trap is None:
        raise WrongRegion("the trap set exists only where r^m k^2 - k - r < 0 (R1, R2, R3)")
    k, r, m = params.k, params.r, wd.m
    h = wd.unit.to_f
    a_po = _make_orbit(params, tuple(h(x) for x in wd.a_orbit), multiplier=-k * r**m)
    b_po = _make_orbit(params, tuple(h(x) for x in wd.b_orbit), multiplier=k * k * r ** (m - 1))
    trap_f = tuple((h(lo), h(hi)) for lo, hi in wd.trap)
    return a_po, b_po, trap_f


def _band_sweep(unit: UnitMap, hi: float, steps: int) -> list[tuple[float, float]]:
    """Forward images of [0, hi] under the unit map, one interval per step."""
    cur = IntervalUnion.single(0.0, hi)
    pieces = [cur.intervals[0]]
    for _ in range(steps):
        cur = cur.image_g(unit)
        if len(cur) != 1:
            raise PrecisionLoss("a band image split unexpectedly")
        pieces.append(cur.intervals[0])
    return pieces


def _certify_bands(params: MapParams, pieces: list[tuple[float, float]], expected: int) -> IntervalUnion:
    unit_bands = IntervalUnion(tuple(pieces))
    if len(unit_bands) != expected:
        raise PrecisionLoss(f"expected {expected} bands, built {len(unit_bands)}")
    gap = min(b[0] - a[1] for a, b in zip(unit_bands.intervals, unit_bands.intervals[1:]))
    if gap <= 0.0:
        raise PrecisionLoss("window bands are not pairwise disjoint", defect=gap)
    bands = unit_bands.map_affine(params.k, 1.0 - params.k)
    defect = bands.image_f(params).hausdorff(bands)
    if defect > INVARIANCE_TOL:
        raise PrecisionLoss("window band union failed its invariance certificate", defect=defect)
    return bands


def window_band_attractor(params: MapParams) -> IntervalUnion:
    """Band attractor of the window: m+1 bands in R2, 2m+2 bands in R3.

    R2 returns the forward images of [0, k r^m x_m]; R3 the forward
    images of [0, p1], which split each R2 band in two around the now
    repelling a-orbit.  The splitting structure is verified, not
    assumed.
    """
    wd = window_core(params)
    k, r, m = params.k, params.r, wd.m
    if k * r**m <= 1.0 or rm_discriminant(params, m) >= 0.0:
        raise WrongRegion("window band attractors need k r^m > 1 and r^m k^2 - k - r < 0 (R2 or R3)")
    in_r2 = r ** (2 * m) * k**3 - k - r > 0.0

    lam_pieces = _band_sweep(wd.unit, wd.p_val, m)
    if in_r2:
        return _certify_bands(params, lam_pieces, m + 1)

    lam1_pieces = _band_sweep(wd.unit, wd.p1, 2 * m + 1)
    bands = _certify_bands(params, lam1_pieces, 2 * m + 2)
    _verify_band_split(wd, sorted(lam_pieces), sorted(lam1_pieces))
    return bands


def _verify_band_split(wd: WindowData, lam: list[tuple[float, float]], lam1: list[tuple[float, float]]) -> None:
    """Each coarse band must contain exactly two fine bands, sharing its
    endpoints, with one a-orbit point in the removed middle gap."""
    tol = 1e-9
    for lo, hi in lam:
        inside = [piece for piece in lam1 if piece[0] >= lo - tol and piece[1] <= hi + tol]
        if len(inside) != 2:
            raise PrecisionLoss(f"coarse band [{lo}, {hi}] contains {len(inside)} fine bands, expected 2")
        left, right = inside
        if abs(left[0] - lo) > tol or abs(right[1] - hi) > tol:
            raise PrecisionLoss("fine bands do not share the coarse band's endpoints")
        gap_lo, gap_hi = left[1], right[0]
        hits = [x for x in wd.a_orbit if gap_lo < x < gap_hi]
        if len(hits) != 1:
            raise PrecisionLoss(f"removed middle gap ({gap_lo}, {gap_hi}) contains {len(hits)} orbit points, expected 1")


# -- dispatch ---------------------------------------------------------------


def attractor(params: MapParams, tau: float = 1e-12, p_max: int = 40) -> Attractor:
    """Construct the attractor and exceptional set for any interior parameter pair."""
    tag = classify(params, tau=tau, p_max=p_max)
    k, r = params.k, params.r

    if tag.region is Region.BOUNDARY:
        raise NotClassified(f"parameters lie on the boundary {tag.which}; no attractor is asserted")

    if tag.region is Region.FIXED_POINT:
        return fixed_point_attractor(params)

    if tag.region is Region.TWO_CYCLE:
        return two_cycle(params)

    if tag.region is Region.FULL_CHAOS:
        return Attractor(
            kind=AttractorKind.FULL_INTERVAL,
            params=params,
            region=tag,
            interval=(1.0 - k, 1.0),
        )

    if tag.region is Region.ESCAPE:
        from .symbolic import escape_cantor_system

        trap = trapping_interval(params)
        system = escape_cantor_system(params)
        return Attractor(
            kind=AttractorKind.NONE_ESCAPE,
            params=params,
            region=tag,
            interval=(trap.alpha, trap.beta),
            exceptional=ExceptionalSet(cantor=system, note="invariant Cantor repeller; all other orbits escape"),
        )

    if tag.region is Region.CASCADE:
        data = cascade_attractor(params, depth=tag.p)
        return Attractor(
            kind=AttractorKind.BANDS,
            params=params,
            region=tag,
            bands=data.bands,
            exceptional=ExceptionalSet(points=data.unstable_points, note="gap points of the band merges and their preimages"),
        )

    # Window subregions.
    if tag.sub == "R4":
        return Attractor(
            kind=AttractorKind.FULL_INTERVAL,
            params=params,
            region=tag,
            interval=(1.0 - k, 1.0),
        )

    from .symbolic import window_cantor_system

    system = window_cantor_system(params)
    a_po, _b_po, _trap = window_periodic_orbits(params)
    if tag.sub == "R1":
        return Attractor(
            kind=AttractorKind.CYCLE,
            params=params,
            region=tag,
            cycle=a_po,
            exceptional=ExceptionalSet(cantor=system, note="invariant Cantor repeller and its preimages"),
        )
    bands = window_band_attractor(params)
    if tag.sub == "R2":
        exceptional = ExceptionalSet(cantor=system, note="invariant Cantor repeller and its preimages")
    else:
        exceptional = ExceptionalSet(
            orbits=(a_po,),
            cantor=system,
            note="invariant Cantor repeller plus the repelling period-(m+1) orbit, and their preimages",
        )
    return Attractor(
        kind=AttractorKind.BANDS,
        params=params,
        region=tag,
        bands=bands,
        exceptional=exceptional,
    )
