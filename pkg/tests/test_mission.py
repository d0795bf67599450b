import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import truncnorm

from anchorloc.antenna import AzimuthPattern, ErrorModelParams, RadiusModel, make_pattern
from anchorloc.geom import Point2D, distance
from anchorloc.mission import (
    CrossingEvent,
    MissionPath,
    RetryExhausted,
    TripleConstraints,
    detect_crossings,
    generate_path,
    select_triple,
    synth_crossing,
)

GD = Point2D(0, 0)
IW = 0.4


def test_generate_path_containment_and_determinism():
    p = generate_path(1, (0, 0, 1, 1), np.random.default_rng(0))
    assert len(p.waypoints) == 2
    area = (-200, -200, 200, 200)
    a = generate_path(20, area, np.random.default_rng(7))
    b = generate_path(20, area, np.random.default_rng(7))
    assert a == b and len(a.waypoints) == 21
    assert all(-200 <= w.x <= 200 and -200 <= w.y <= 200 for w in a.waypoints)


def test_path_validation():
    with pytest.raises(ValueError):
        MissionPath((Point2D(0, 0),))
    with pytest.raises(ValueError):
        MissionPath((Point2D(0, 0), Point2D(0, 0)))
    with pytest.raises(ValueError):
        generate_path(0, (0, 0, 1, 1), np.random.default_rng(0))


def test_detect_straight_chord_through_constant_pattern():
    path = MissionPath((Point2D(-100, 30), Point2D(100, 30)))
    (e,) = detect_crossings(path, AzimuthPattern.constant(60), GD, IW)
    half = math.sqrt(60**2 - 30**2)
    assert -half <= e.a1.x < -half + IW
    assert half - IW < e.a2.x <= half
    assert e.chord_length == pytest.approx(2 * half, abs=2 * IW)
    e.check(1e-6)


def test_detect_misses_and_grazes():
    far = MissionPath((Point2D(-100, 80), Point2D(100, 80)))
    assert detect_crossings(far, AzimuthPattern.constant(60), GD, IW) == []
    # a single heard beacon exactly on the boundary is not a crossing
    graze = MissionPath((Point2D(-100.0, 60.0), Point2D(100.0, 60.0)))
    assert detect_crossings(graze, AzimuthPattern.constant(60), GD, IW) == []


def test_detect_needs_rng_for_ranges():
    path = MissionPath((Point2D(-100, 30), Point2D(100, 30)))
    with pytest.raises(ValueError):
        detect_crossings(path, AzimuthPattern.constant(60), GD, IW, rb_mode=True)


def test_detected_ranges_perturb_true_distance():
    path = MissionPath((Point2D(-100, 30), Point2D(100, 30)), altitude=10)
    rng = np.random.default_rng(0)
    (e,) = detect_crossings(path, AzimuthPattern.constant(60), GD, IW, True, ErrorModelParams(), rng)
    assert 0 < e.r1_meas - distance(e.a1, GD) < 1.6


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hnh_property_on_random_paths(seed):
    rng = np.random.default_rng(seed)
    r = 60.0
    path = generate_path(10, (-150, -150, 150, 150), rng)
    for e in detect_crossings(path, AzimuthPattern.constant(r), GD, IW):
        e.check(1e-6)
        assert distance(e.a1, GD) <= r + 1e-9 and distance(e.a2, GD) <= r + 1e-9
        assert distance(e.a0, GD) > r - 1e-9 and distance(e.a3, GD) > r - 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_irregular_pattern_events_are_valid(seed):
    rng = np.random.default_rng(seed)
    pattern = make_pattern(RadiusModel.normal(84.97, 31.70), 72, rng)
    path = generate_path(10, (-200, -200, 200, 200), rng)
    for e in detect_crossings(path, pattern, GD, IW):
        e.check(1e-6)


def test_synth_diameter_chord():
    e = synth_crossing(RadiusModel.fixed(60), GD, IW, rng=np.random.default_rng(0), phase=0.0, inward_angle=0.0)
    for p in (e.a1, e.a2):
        assert 60 - IW < distance(p, GD) <= 60 + 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_synth_fixed_radius_endpoints(seed):
    e = synth_crossing(RadiusModel.fixed(60), GD, IW, rng=np.random.default_rng(seed))
    e.check(1e-6)
    assert e.chord_length <= 120
    for p in (e.a1, e.a2):
        assert 60 - IW - 1e-9 < distance(p, GD) <= 60 + 1e-9
    for p in (e.a0, e.a3):
        assert distance(p, GD) > 60 - 1e-9


def test_synth_mean_endpoint_distance():
    rng = np.random.default_rng(11)
    mu, sigma = 63.58, 33.01
    d = [distance(synth_crossing(RadiusModel.normal(mu, sigma), GD, IW, rng=rng).a1, GD) for _ in range(10_000)]
    # draws are truncated below 1 m, which lifts the mean by about 2 m for this spread
    expected = truncnorm.mean((1.0 - mu) / sigma, np.inf, loc=mu, scale=sigma)
    assert np.mean(d) == pytest.approx(expected, abs=1.0)
    assert expected - mu < 2.5


def test_synth_rb_ranges():
    e = synth_crossing(RadiusModel.fixed(60), GD, IW, True, 0.0, ErrorModelParams.zero(), np.random.default_rng(0))
    assert e.r1_meas == distance(e.a1, GD) and e.r2_meas == distance(e.a2, GD)


def test_synth_exhausts_on_tiny_radius():
    with pytest.raises(RetryExhausted):
        synth_crossing(RadiusModel.fixed(0.1), GD, IW, rng=np.random.default_rng(0))


def _event_at(p):
    return CrossingEvent.from_endpoints(p, Point2D(p.x + 0.8, p.y), IW)


def test_select_triple_examples():
    pts = [Point2D(0, 0), Point2D(70, 0), Point2D(35, 60)]
    events = [_event_at(p) for p in pts]
    assert select_triple(events, TripleConstraints(0, 0)) == tuple(events)
    assert select_triple(events, TripleConstraints(60, 20)) == tuple(events)
    line = [_event_at(Point2D(100 * i, 0)) for i in range(3)]
    with pytest.raises(RetryExhausted):
        select_triple(line, TripleConstraints(0, 1))


def test_select_triple_gives_up():
    rng = np.random.default_rng(0)
    stream = (synth_crossing(RadiusModel.fixed(60), GD, IW, rng=rng) for _ in range(300))
    with pytest.raises(RetryExhausted):
        select_triple(stream, TripleConstraints(200, 20), max_attempts=50)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_selected_triple_satisfies_constraints(seed):
    rng = np.random.default_rng(seed)
    c = TripleConstraints()
    stream = iter(lambda: synth_crossing(RadiusModel.normal(84.97, 31.70), GD, IW, rng=rng), None)
    t = select_triple(stream, c)
    assert c.accepts(*(e.a1 for e in t))


def test_event_dict_round_trip():
    e = synth_crossing(RadiusModel.fixed(60), GD, IW, True, 0.0, None, np.random.default_rng(0))
    assert CrossingEvent.from_dict(e.to_dict()) == e
    short = CrossingEvent.from_dict({"a1": [0, 0], "a2": [4, 0], "iw": IW})
    assert short.n_intervals == 10 and short.a3 == Point2D(4.4, 0)


def test_event_check_rejects_bad_geometry():
    e = CrossingEvent.from_endpoints(Point2D(0, 0), Point2D(1.0, 0), IW)
    with pytest.raises(ValueError):
        e.check()
    with pytest.raises(ValueError):
        CrossingEvent.from_endpoints(Point2D(0, 0), Point2D(0, 0), IW)


def test_constraint_validation():
    with pytest.raises(ValueError):
        TripleConstraints(-1, 20)
    with pytest.raises(ValueError):
        TripleConstraints(60, 70)
