import math

import pytest
from hypothesis import given, strategies as st

from trackstitch.kinematics import (
    MAX_RECKON_S,
    SpaceTimeVector,
    cosine,
    dead_reckon,
    displace,
    ground_distance_coords_m,
    ground_distance_m,
    moving_error,
    pair_mode,
    space_time_vector,
    steady_error,
    turning_cos,
)
from trackstitch.model import AisPoint, CbtrConfig, PairMode

CFG = CbtrConfig()


def test_displace_north():
    lat, lon = displace(37.0, -76.0, 10.0, 0.0, 100.0)
    assert lat - 37.0 == pytest.approx(0.004629625629949604, rel=1e-12)
    assert lon == -76.0  # sin(0) is exactly zero


def test_displace_east_rate_at_37():
    lat, lon = displace(37.0, -76.0, 1.0, 90.0, 100.0)
    assert lon + 76.0 == pytest.approx(5.7865044603352625e-06 * 100, rel=1e-12)
    assert abs(lat - 37.0) < 1e-14


@given(st.floats(min_value=20.0, max_value=45.0),
       st.floats(min_value=-80.0, max_value=-70.0),
       st.floats(min_value=0.0, max_value=8.0),
       st.floats(min_value=0.0, max_value=359.99),
       st.floats(min_value=0.0, max_value=5.0))
def test_displace_short_hops_reverse(lat, lon, sog, cog, dt):
    """Out and back lands where it started, to well under report noise."""
    mid_lat, mid_lon = displace(lat, lon, sog, cog, dt)
    back_lat, back_lon = displace(mid_lat, mid_lon, sog, cog, -dt)
    assert back_lat == pytest.approx(lat, abs=1e-9)
    assert back_lon == pytest.approx(lon, abs=1e-9)


def test_dead_reckon_carries_time():
    p = AisPoint(50, 37.0, -76.0, 4.0, 45.0)
    pred = dead_reckon(p, 30.0)
    assert pred.at_t == 80.0
    assert (pred.lat, pred.lon) == displace(37.0, -76.0, 4.0, 45.0, 30.0)
    with pytest.raises(ValueError):
        dead_reckon(p, MAX_RECKON_S + 1)


def test_pair_mode_boundary():
    a = AisPoint(0, 37.0, -76.0, 1.5, 0.0)
    assert pair_mode(a, AisPoint(1, 37.0, -76.0, 1.5, 0.0), CFG) is PairMode.STEADY
    assert pair_mode(a, AisPoint(1, 37.0, -76.0, 1.51, 0.0), CFG) is PairMode.MOVING


def test_space_time_vector_fields():
    v = space_time_vector(10.0, 0.5, -0.25, 1.2, 1e-5)
    assert v == SpaceTimeVector(1e-4, 0.6, -0.25)


def test_cosine_rejects_zero_vector():
    with pytest.raises(ValueError):
        cosine(SpaceTimeVector(0.0, 0.0, 0.0), SpaceTimeVector(1.0, 0.0, 0.0))


def test_moving_error_perfect_prediction():
    xi = AisPoint(0, 37.0, -76.0, 10.0, 0.0)
    lat, lon = displace(37.0, -76.0, 10.0, 0.0, 100)
    xj = AisPoint(100, lat, lon, 10.0, 0.0)
    err = moving_error(xi, xj, 1.2490221536572539, CFG)
    tm = CFG.time_weight_moving * 100
    assert err.forward == tm * tm
    # the rewind crosses a latitude change, so only nearly symmetric
    assert err.backward == pytest.approx(err.forward, rel=1e-9)
    assert err.combined == 0.5 * (err.forward + err.backward)
    assert err.cos_angle == pytest.approx(1.0, abs=1e-12)


def test_moving_error_requires_forward_time():
    xi = AisPoint(100, 37.0, -76.0, 10.0, 0.0)
    xj = AisPoint(100, 37.01, -76.0, 10.0, 0.0)
    with pytest.raises(ValueError):
        moving_error(xi, xj, 1.0, CFG)


def test_moving_error_penalizes_behind():
    """A candidate opposite the reported course scores a negative cosine."""
    xi = AisPoint(0, 37.0, -76.0, 10.0, 0.0)
    xj = AisPoint(100, 36.9954, -76.0, 10.0, 0.0)  # south of xi, course north
    err = moving_error(xi, xj, 1.2490221536572539, CFG)
    assert err.cos_angle < 0.0


def test_steady_error_colocated():
    xi = AisPoint(0, 37.0, -76.0, 0.5, 0.0)
    xj = AisPoint(500, 37.0, -76.0, 0.5, 0.0)
    err = steady_error(xi, xj, 1.2490221536572539, CFG)
    assert err.value == pytest.approx(1e-12, rel=1e-12)
    assert err.cos_angle == 1.0


def test_steady_error_displaced():
    xi = AisPoint(0, 37.0, -76.0, 0.5, 0.0)
    xj = AisPoint(100, 37.0, -76.0 + 2e-3, 0.5, 0.0)
    err = steady_error(xi, xj, 1.0, CFG)
    assert err.cos_angle == pytest.approx(0.447213595499958, abs=1e-9)
    assert err.value == pytest.approx((2e-7) ** 2 + (2e-3) ** 2, rel=1e-9)


def test_turning_cos_straight_and_reverse():
    a = AisPoint(0, 37.0, -76.0, 5.0, 90.0)
    b = AisPoint(60, 37.0, -75.99, 5.0, 90.0)
    c = AisPoint(120, 37.0, -75.98, 5.0, 90.0)
    assert turning_cos(a, b, c, 1.0, 1e-5) == pytest.approx(1.0, abs=1e-12)
    back = AisPoint(120, 37.0, -76.0, 5.0, 270.0)
    assert turning_cos(a, b, back, 1.0, 1e-5) < 0.0


def test_ground_distance_lat_degree():
    d = ground_distance_coords_m(37.0, -76.0, 37.001, -76.0)
    assert d == pytest.approx(111.12, abs=1e-6)


def test_ground_distance_lon_at_37():
    d = ground_distance_coords_m(37.0, -76.0, 37.0, -76.0 + 1e-4)
    assert d == pytest.approx(8.890410497846464, abs=1e-6)


def test_ground_distance_point_wrapper():
    a = AisPoint(0, 37.0, -76.0, 0.0, 0.0)
    b = AisPoint(1, 37.001, -76.0, 0.0, 0.0)
    assert ground_distance_m(a, b) == ground_distance_coords_m(37.0, -76.0, 37.001, -76.0)
