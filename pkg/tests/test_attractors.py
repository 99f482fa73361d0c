import math

import numpy as np
import pytest

from skewtent import (
    Attractor,
    AttractorKind,
    IntervalUnion,
    MapParams,
    NotClassified,
    Region,
    WrongRegion,
    attractor,
    cascade_attractor,
    eval_f,
    eval_g,
    fixed_point_attractor,
    iterate_f,
    to_unit,
    two_cycle,
    window_band_attractor,
    window_core,
    window_periodic_orbits,
)

RNG = np.random.default_rng(20240615)


# -- fixed point ---------------------------------------------------------------


def test_fixed_point_values():
    attr = fixed_point_attractor(MapParams(0.5, 1.0))
    assert attr.point == pytest.approx(2.0 / 3.0, abs=1e-15)
    attr = fixed_point_attractor(MapParams(0.25, 2.0))
    assert attr.point == pytest.approx(0.8, abs=1e-15)
    p = MapParams(0.25, 2.0)
    assert abs(eval_f(p, attr.point) - attr.point) <= 1e-15
    with pytest.raises(WrongRegion):
        fixed_point_attractor(MapParams(1.5, 0.5))


def test_fixed_point_orbit_convergence():
    p = MapParams(0.9, 5.0)
    attr = fixed_point_attractor(p)
    assert attr.point == pytest.approx(1.0 / 1.9, abs=1e-15)
    orbit = iterate_f(p, 0.3, 1000)
    assert abs(orbit.points[-1] - attr.point) <= 1e-10


# -- two cycle -----------------------------------------------------------------


def test_two_cycle_anchor():
    attr = two_cycle(MapParams(3.0, 0.25))
    assert attr.cycle.points[0] == pytest.approx(-8.0 / 7.0, abs=1e-15)
    assert attr.cycle.points[1] == pytest.approx(5.0 / 7.0, abs=1e-15)
    assert attr.cycle.multiplier == pytest.approx(-0.75, abs=1e-15)
    assert attr.cycle.stable
    assert attr.exceptional.points == (0.25,)  # x* = 1/(k+1)


def test_two_cycle_small_r():
    p = MapParams(2.0, 0.1)
    attr = two_cycle(p)
    assert attr.cycle.points[0] == pytest.approx(-1.0 / 1.2, abs=1e-15)
    assert attr.cycle.points[1] == pytest.approx(1.1 / 1.2, abs=1e-15)
    ret = iterate_f(p, attr.cycle.points[0], 2)
    assert abs(ret.points[-1] - attr.cycle.points[0]) <= 1e-14
    # The excluded fixed point really is fixed.
    x_star = attr.exceptional.points[0]
    assert abs(eval_f(p, x_star) - x_star) <= 1e-15


def test_two_cycle_wrong_region():
    with pytest.raises(WrongRegion):
        two_cycle(MapParams(0.5, 0.1))
    with pytest.raises(WrongRegion):
        two_cycle(MapParams(2.0, 0.9))


# -- cascade --------------------------------------------------------------------


def test_cascade_anchor_depth1():
    data = cascade_attractor(MapParams(1.5, 1.0))
    assert data.p == 1
    assert data.bands.intervals[0] == pytest.approx((-0.5, 0.25), abs=1e-15)
    assert data.bands.intervals[1] == pytest.approx((0.5, 1.0), abs=1e-15)
    assert data.unstable_points == (0.4,)
    p = MapParams(1.5, 1.0)
    assert eval_f(p, 0.4) == pytest.approx(0.4, abs=1e-15)
    # Exact invariance: the image of the union is the union.
    assert data.bands.image_f(p).hausdorff(data.bands) <= 1e-15


def test_cascade_anchor_depth2():
    data = cascade_attractor(MapParams(1.2, 0.9))
    assert data.p == 2 and len(data.bands) == 4
    gaps = [b[0] - a[1] for a, b in zip(data.bands.intervals, data.bands.intervals[1:])]
    assert min(gaps) > 0.0
    assert data.bands.image_f(MapParams(1.2, 0.9)).hausdorff(data.bands) <= 1e-9
    assert len(data.unstable_points) == 2


def test_cascade_band_length_shrinks_toward_k1():
    near = cascade_attractor(MapParams(1.05, 1.0))
    far = cascade_attractor(MapParams(1.5, 1.0))
    assert near.bands.total_length() < far.bands.total_length()


def test_cascade_nesting_structure():
    # Depth-2 bands sit inside depth-1 bands, split around the level-1 gap orbit.
    p = MapParams(1.2, 0.9)
    coarse = cascade_attractor(p, depth=1)
    fine = cascade_attractor(p, depth=2)
    c1 = fine.unstable_points[1]
    gap_orbit = [c1, eval_f(p, c1)]
    for lo, hi in coarse.bands:
        inside = [piece for piece in fine.bands if piece[0] >= lo - 1e-12 and piece[1] <= hi + 1e-12]
        assert len(inside) == 2
        assert inside[0][0] == pytest.approx(lo, abs=1e-12)
        assert inside[1][1] == pytest.approx(hi, abs=1e-12)
        gap_lo, gap_hi = inside[0][1], inside[1][0]
        hits = [x for x in gap_orbit if gap_lo < x < gap_hi]
        assert len(hits) == 1


def test_cascade_unstable_points_not_in_bands():
    for k, r in [(1.5, 1.0), (1.2, 0.9), (1.05, 1.0)]:
        data = cascade_attractor(MapParams(k, r))
        for c in data.unstable_points:
            assert not data.bands.contains(c)


def test_cascade_wrong_region():
    with pytest.raises(WrongRegion):
        cascade_attractor(MapParams(3.5, 0.5))
    with pytest.raises(WrongRegion):
        cascade_attractor(MapParams(1.5, 1.0), depth=2)  # t_1 > 0 already


# -- window core ------------------------------------------------------------------


def test_window_core_anchor():
    wd = window_core(MapParams(3.5, 0.5))
    assert wd.m == 2
    assert wd.x_m == pytest.approx(1.0 / 7.0, abs=1e-14)
    assert wd.a1 == pytest.approx(1.0 / 15.0, abs=1e-14)
    assert wd.b1 == pytest.approx(0.875 / 5.125, abs=1e-14)
    assert wd.a_orbit == pytest.approx((1.0 / 15.0, 71.0 / 105.0, 103.0 / 105.0), abs=1e-12)


def test_window_core_closed_form_breakpoints():
    wd = window_core(MapParams(3.5, 0.5))
    assert wd.g_power_m1(wd.x_m) == pytest.approx(0.0, abs=1e-12)
    second_break = wd.x_m + 1.0 / (3.5**2 * 0.5)
    assert second_break == pytest.approx(1.0 / 7.0 + 1.0 / 6.125, abs=1e-14)
    assert wd.g_power_m1(second_break) == pytest.approx(1.0, abs=1e-12)


def test_window_core_kink_preimage_identity():
    # g^{m-1}(x_m) = a across a spread of windows.
    for k, r in [(3.5, 0.5), (4.3, 0.5), (5.5, 0.45), (9.1, 0.52), (18.0, 0.7)]:
        wd = window_core(MapParams(k, r))
        u = wd.unit
        x = wd.x_m
        for _ in range(wd.m - 1):
            x = eval_g(u, x)
        assert abs(x - u.a) <= 1e-10


def test_window_closed_form_matches_iteration():
    for k, r in [(3.5, 0.5), (4.3, 0.5), (4.1, 0.5), (7.5, 0.5), (6.0, 0.6)]:
        wd = window_core(MapParams(k, r))
        u = wd.unit
        edge = u.b + r * wd.x_m
        for x in RNG.uniform(0.0, edge, 200):
            x = float(x)
            direct = x
            for _ in range(wd.m + 1):
                direct = eval_g(u, direct)
            assert abs(wd.g_power_m1(x) - direct) <= 1e-10


def test_window_core_wrong_region():
    with pytest.raises(WrongRegion):
        window_core(MapParams(2.0, 0.5))  # below the first wall
    with pytest.raises(WrongRegion):
        window_core(MapParams(2.0, 1.5))  # r >= 1
    with pytest.raises(NotClassified):
        window_core(MapParams(3.0, 0.5))  # exactly on K_2


# -- window orbits and trap ---------------------------------------------------------


def test_window_periodic_orbits_anchor():
    a_po, b_po, trap = window_periodic_orbits(MapParams(3.5, 0.5))
    assert a_po.period == 3 and b_po.period == 3
    assert abs(a_po.multiplier) == pytest.approx(0.875, abs=1e-12)
    assert a_po.stable
    assert abs(b_po.multiplier) == pytest.approx(6.125, abs=1e-12)
    assert not b_po.stable
    # Unit-coordinate orbit mapped through h(x) = 1 - k + k*x.
    h = lambda x: -2.5 + 3.5 * x
    assert a_po.points == pytest.approx((h(1.0 / 15.0), h(71.0 / 105.0), h(103.0 / 105.0)), abs=1e-12)
    assert len(trap) == 3


def test_window_trap_forward_invariant():
    # Prop-9 style check: images of trap samples stay in the trap.
    p = MapParams(4.3, 0.5)
    _a, _b, trap = window_periodic_orbits(p)
    union = IntervalUnion(tuple(trap))
    for lo, hi in trap:
        width = hi - lo
        for x in RNG.uniform(lo + 1e-9 * max(1.0, width), hi - 1e-9 * max(1.0, width), 350):
            y = eval_f(p, float(x))
            assert union.distance(y) <= 1e-12


def test_window_trap_reaches_contracting_segment():
    # Every trap point's forward orbit enters [0, x_m] (unit coordinates).
    p = MapParams(4.3, 0.5)
    wd = window_core(p)
    u = wd.unit
    for lo, hi in wd.trap:
        for x in RNG.uniform(lo + 1e-9, hi - 1e-9, 40):
            x = float(x)
            for _ in range(2000):
                if x <= wd.x_m:
                    break
                x = eval_g(u, x)
            assert x <= wd.x_m


def test_window_periodic_orbits_wrong_region():
    with pytest.raises(WrongRegion):
        window_periodic_orbits(MapParams(5.0, 0.5))  # R4: discriminant positive


# -- window bands ----------------------------------------------------------------


def test_window_bands_r2_anchor():
    p = MapParams(4.3, 0.5)
    bands = window_band_attractor(p)
    assert len(bands) == 3
    # Hand-computed: x_2 = 13/43, p = 0.325, bands via h(x) = -3.3 + 4.3x.
    expected = [(-3.3, -1.9025), (-0.65, 0.04875), (0.675, 1.0)]
    for got, want in zip(bands, expected):
        assert got == pytest.approx(want, abs=1e-12)
    assert bands.image_f(p).hausdorff(bands) <= 1e-9


def test_window_bands_r2_unit_invariance():
    # g^{m+1}([0, p]) = [0, p] in unit coordinates.
    p = MapParams(4.3, 0.5)
    wd = window_core(p)
    u = wd.unit
    base = IntervalUnion.single(0.0, wd.p_val)
    img = base
    for _ in range(wd.m + 1):
        img = img.image_g(u)
    assert img.hausdorff(base) <= 1e-9


def test_window_bands_r3_anchor():
    p = MapParams(4.1, 0.5)
    bands = window_band_attractor(p)
    assert len(bands) == 6
    gaps = [b[0] - a[1] for a, b in zip(bands.intervals, bands.intervals[1:])]
    assert min(gaps) > 0.0
    assert bands.image_f(p).hausdorff(bands) <= 1e-9


def test_window_bands_r3_split_contains_orbit():
    # The gap removed from each coarse band contains one a-orbit point (f-coords).
    p = MapParams(4.1, 0.5)
    wd = window_core(p)
    h = wd.unit.to_f
    a_points = [h(x) for x in wd.a_orbit]
    fine = window_band_attractor(p)
    coarse = []
    base = IntervalUnion.single(0.0, wd.p_val)
    cur = base
    coarse.append(cur.intervals[0])
    for _ in range(wd.m):
        cur = cur.image_g(wd.unit)
        coarse.append(cur.intervals[0])
    coarse_f = IntervalUnion(tuple(coarse)).map_affine(p.k, 1.0 - p.k)
    for lo, hi in coarse_f:
        inside = [piece for piece in fine if piece[0] >= lo - 1e-9 and piece[1] <= hi + 1e-9]
        assert len(inside) == 2
        gap_lo, gap_hi = inside[0][1], inside[1][0]
        assert sum(1 for x in a_points if gap_lo < x < gap_hi) == 1


def test_window_bands_wrong_region():
    with pytest.raises(WrongRegion):
        window_band_attractor(MapParams(3.5, 0.5))  # R1
    with pytest.raises(WrongRegion):
        window_band_attractor(MapParams(5.0, 0.5))  # R4


# -- dispatch --------------------------------------------------------------------


def test_attractor_dispatch_window_cycle():
    attr = attractor(MapParams(3.5, 0.5))
    assert attr.kind is AttractorKind.CYCLE
    assert attr.cycle.period == 3
    h = lambda x: -2.5 + 3.5 * x
    assert attr.cycle.points == pytest.approx((h(1.0 / 15.0), h(71.0 / 105.0), h(103.0 / 105.0)), abs=1e-12)
    assert attr.exceptional.cantor is not None


def test_attractor_dispatch_full_interval():
    attr = attractor(MapParams(5.0, 0.5))
    assert attr.kind is AttractorKind.FULL_INTERVAL
    assert attr.interval == pytest.approx((-4.0, 1.0))
    assert attr.exceptional.empty
    attr = attractor(MapParams(2.0, 0.8))
    assert attr.kind is AttractorKind.FULL_INTERVAL
    assert attr.interval == pytest.approx((-1.0, 1.0))


def test_attractor_dispatch_point_and_escape():
    attr = attractor(MapParams(0.5, 1.0))
    assert attr.kind is AttractorKind.POINT and attr.point == pytest.approx(2.0 / 3.0)
    attr = attractor(MapParams(3.0, 2.0))
    assert attr.kind is AttractorKind.NONE_ESCAPE
    assert attr.exceptional.cantor is not None
    assert attr.interval == pytest.approx((-1.0, 2.0 / 3.0))


def test_attractor_dispatch_r3_has_unstable_orbit():
    attr = attractor(MapParams(4.1, 0.5))
    assert attr.kind is AttractorKind.BANDS
    assert len(attr.exceptional.orbits) == 1
    assert not attr.exceptional.orbits[0].stable
    assert attr.exceptional.cantor is not None


def test_attractor_boundary_not_classified():
    with pytest.raises(NotClassified):
        attractor(MapParams(1.0, 1.0))


def test_attractor_orbit_residuals_and_stability_flags():
    # Every returned periodic orbit must satisfy its residual and flag contract.
    for k, r in [(3.0, 0.25), (3.5, 0.5), (4.1, 0.5), (7.5, 0.5)]:
        attr = attractor(MapParams(k, r))
        orbits = list(attr.exceptional.orbits)
        if attr.kind is AttractorKind.CYCLE:
            orbits.append(attr.cycle)
        for po in orbits:
            p = MapParams(k, r)
            ret = iterate_f(p, po.points[0], po.period)
            assert abs(ret.points[-1] - po.points[0]) <= 1e-10 * max(1.0, abs(po.points[0]))
            assert po.stable == (abs(po.multiplier) < 1.0)


@pytest.mark.parametrize(
    "k,r",
    [(0.5, 1.0), (3.0, 0.25), (1.5, 1.0), (3.5, 0.5), (4.3, 0.5), (4.1, 0.5)],
)
def test_basin_sample_reaches_attractor(k, r):
    # Desk-scale basin surrogate; the full-size run lives in the acceptance suite.
    from skewtent import basin_experiment

    p = MapParams(k, r)
    stats = basin_experiment(p, n_samples=2000, horizon=10_000, eps=1e-6, seed=11)
    assert stats.n_to_attractor >= 0.99 * stats.n_samples
