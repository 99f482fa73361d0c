import math

import numpy as np
import pytest

from skewtent import (
    Canonical,
    Escaped,
    GeneralTent,
    InvalidMap,
    Landed,
    MapParams,
    NotReducible,
    OutOfDomain,
    Trivial,
    eval_f,
    eval_g,
    iterate_f,
    iterate_g,
    landing_time,
    normalize,
    to_unit,
    trapping_interval,
)

RNG = np.random.default_rng(20240613)


# -- normalization -----------------------------------------------------------


def test_normalize_already_canonical():
    gt = GeneralTent.from_slopes(2.0, -3.0, x0=0.0, y0=1.0)
    res = normalize(gt)
    assert isinstance(res, Canonical)
    assert res.params == MapParams(k=3.0, r=2.0)


def test_normalize_shifted_kink():
    # gamma = 3 - 1 = 2 > 0; translation and rescaling keep the slope pair.
    gt = GeneralTent.from_slopes(2.0, -3.0, x0=1.0, y0=3.0)
    res = normalize(gt)
    assert isinstance(res, Canonical)
    assert res.params == MapParams(k=3.0, r=2.0)


def test_normalize_monotone_trap():
    gt = GeneralTent.from_slopes(2.0, -3.0, x0=1.0, y0=1.0)
    res = normalize(gt)
    assert isinstance(res, Trivial)
    assert "monotone" in res.reason


def test_normalize_homeomorphism():
    # Both branch slopes rising.
    gt = GeneralTent.from_slopes(2.0, 3.0, x0=0.0, y0=1.0)
    res = normalize(gt)
    assert isinstance(res, Trivial)
    assert "homeomorphism" in res.reason


def test_normalize_valley_flip():
    # Falling-then-rising map: the flip x -> -x swaps the slope pair.
    gt = GeneralTent.from_slopes(-3.0, 2.0, x0=1.0, y0=-2.0)
    res = normalize(gt)
    assert isinstance(res, Canonical)
    # After the flip the slopes are (r, k) = (-k, -r) = (2, 3); gamma = 2 - (-1) = 3 > 0.
    assert res.params == MapParams(k=3.0, r=2.0)


def test_normalize_degenerate_inputs():
    with pytest.raises(InvalidMap):
        GeneralTent.from_slopes(0.0, -3.0, x0=0.0, y0=1.0)
    with pytest.raises(InvalidMap):
        GeneralTent.from_slopes(2.0, 0.0, x0=0.0, y0=1.0)
    with pytest.raises(InvalidMap):
        GeneralTent.from_slopes(2.0, 2.0, x0=0.0, y0=1.0)  # parallel lines
    with pytest.raises(InvalidMap):
        GeneralTent.from_slopes(math.nan, -3.0, x0=0.0, y0=1.0)


def test_map_params_validation():
    with pytest.raises(InvalidMap):
        MapParams(k=-1.0, r=2.0)
    with pytest.raises(InvalidMap):
        MapParams(k=1.0, r=0.0)
    with pytest.raises(InvalidMap):
        MapParams(k=math.inf, r=1.0)


# -- evaluation and iteration -------------------------------------------------


def test_eval_f_examples():
    assert eval_f(MapParams(3.0, 2.0), 0.0) == 1.0
    assert eval_f(MapParams(3.0, 2.0), -0.5) == 0.0
    assert eval_f(MapParams(1.5, 1.0), 1.0) == -0.5


def test_iterate_f_examples():
    orbit = iterate_f(MapParams(1.5, 1.0), 1.0, 2)
    assert orbit.points == (1.0, -0.5, 0.5)
    assert orbit.branches == ("R", "L")

    cyc = iterate_f(MapParams(3.0, 0.25), -8.0 / 7.0, 2)
    assert cyc.points[2] == pytest.approx(-8.0 / 7.0, abs=1e-15)

    single = iterate_f(MapParams(2.0, 2.0), 0.3, 0)
    assert single.points == (0.3,)
    assert single.branches == ()


def test_iterate_f_escape_flag():
    orbit = iterate_f(MapParams(3.0, 2.0), 5.0, 200)
    assert orbit.escaped
    assert len(orbit.points) < 201
    assert orbit.points[-1] < -1e12


def test_branch_record_consistency():
    # The recorded branch must reproduce each step of the orbit.
    for k, r in [(3.0, 2.0), (1.5, 1.0), (3.5, 0.5), (0.5, 0.9)]:
        p = MapParams(k, r)
        for x0 in RNG.uniform(-1.0, 1.0, 50):
            orbit = iterate_f(p, float(x0), 30)
            for i, branch in enumerate(orbit.branches):
                x = orbit.points[i]
                assert branch == ("L" if x <= 0.0 else "R")
                expected = 1.0 + r * x if branch == "L" else 1.0 - k * x
                assert orbit.points[i + 1] == expected


# -- trapping interval ---------------------------------------------------------


def test_trapping_interval_values():
    t = trapping_interval(MapParams(3.0, 2.0))
    assert t.alpha == pytest.approx(-1.0) and t.beta == pytest.approx(2.0 / 3.0)
    t = trapping_interval(MapParams(2.0, 3.0))
    assert t.alpha == pytest.approx(-0.5) and t.beta == pytest.approx(0.75)
    t = trapping_interval(MapParams(3.0, 1.0))
    assert t.alpha == -math.inf and t.beta == math.inf


def test_trapping_fixed_point_identities():
    for k, r in [(3.0, 2.0), (2.0, 3.0), (1.3, 1.7)]:
        p = MapParams(k, r)
        t = trapping_interval(p)
        assert abs(eval_f(p, t.alpha) - t.alpha) <= 1e-12
        assert abs(eval_f(p, t.beta) - t.alpha) <= 1e-12


def test_landing_time_examples():
    assert isinstance(landing_time(MapParams(3.0, 2.0), 0.7), Escaped)
    res = landing_time(MapParams(3.0, 0.25), 0.5)
    assert res == Landed(n=0)
    res = landing_time(MapParams(1.5, 1.0), -10.0)
    assert isinstance(res, Landed) and res.n <= 20


def test_landing_time_horizon_validation():
    with pytest.raises(OutOfDomain):
        landing_time(MapParams(2.0, 1.0), 0.3, horizon=0)


def test_trapping_property():
    # Interior points land in the core; exterior points escape.
    for k, r in [(1.3, 1.5), (1.2, 1.1), (2.5, 1.05)]:
        p = MapParams(k, r)
        t = trapping_interval(p)
        xs = RNG.uniform(t.alpha, t.beta, 1000)
        for x in xs:
            assert isinstance(landing_time(p, float(x)), Landed)
        assert isinstance(landing_time(p, t.alpha - 0.01), Escaped)
        assert isinstance(landing_time(p, t.beta + 0.01), Escaped)


def test_core_invariance_property():
    # f([1-k, 1]) stays inside [1-k, 1] whenever k > 1 and r <= k/(k-1).
    for k, r in [(3.5, 0.5), (2.0, 1.9), (1.5, 2.9)]:
        p = MapParams(k, r)
        assert r <= k / (k - 1.0)
        xs = RNG.uniform(1.0 - k, 1.0, 1000)
        for x in xs:
            y = eval_f(p, float(x))
            assert 1.0 - k - 1e-12 <= y <= 1.0 + 1e-12


# -- unit conjugate -------------------------------------------------------------


def test_to_unit_examples():
    u = to_unit(MapParams(3.5, 0.5))
    assert u.a == pytest.approx(5.0 / 7.0, abs=1e-15)
    assert u.b == pytest.approx(9.0 / 14.0, abs=1e-15)
    u = to_unit(MapParams(2.0, 1.0))
    assert u.a == 0.5 and u.b == 0.5
    with pytest.raises(NotReducible):
        to_unit(MapParams(1.5, 4.0))
    with pytest.raises(NotReducible):
        to_unit(MapParams(0.8, 0.5))


def test_eval_g_examples():
    u = to_unit(MapParams(3.5, 0.5))
    assert eval_g(u, 1.0 / 15.0) == pytest.approx(71.0 / 105.0, abs=1e-15)
    assert eval_g(u, u.a) == pytest.approx(1.0, abs=1e-15)
    assert eval_g(u, 1.0) == 0.0
    with pytest.raises(OutOfDomain):
        eval_g(u, 1.5)


def test_iterate_g_period3():
    u = to_unit(MapParams(3.5, 0.5))
    orbit = iterate_g(u, 1.0 / 15.0, 3)
    assert orbit.points[1] == pytest.approx(71.0 / 105.0, abs=1e-14)
    assert orbit.points[2] == pytest.approx(103.0 / 105.0, abs=1e-14)
    assert orbit.points[3] == pytest.approx(1.0 / 15.0, abs=1e-14)


def test_conjugacy_property():
    # h(g(x)) = f(h(x)) on [0, 1] within 1e-12.
    for k, r in [(3.5, 0.5), (2.0, 1.5), (1.5, 1.0), (4.3, 0.5), (1.2, 0.9)]:
        p = MapParams(k, r)
        u = to_unit(p)
        xs = RNG.uniform(0.0, 1.0, 1000)
        for x in xs:
            x = float(x)
            lhs = u.to_f(eval_g(u, x))
            rhs = eval_f(p, u.to_f(x))
            assert abs(lhs - rhs) <= 1e-12


def test_unit_iterates_stay_in_unit_interval():
    u = to_unit(MapParams(4.3, 0.5))
    for x0 in RNG.uniform(0.0, 1.0, 100):
        orbit = iterate_g(u, float(x0), 200)
        assert all(0.0 <= x <= 1.0 for x in orbit.points)
