"""Constant-velocity prediction and the pairwise screening errors.

Courses are degrees clockwise from true north, so the northward component of
motion goes with cos(cog) and the eastward component with sin(cog).  Degrees
of longitude shrink with latitude; the conversion uses the latitude of the
point being advanced.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .model import (
    KNOT_MPS,
    M_PER_DEG_LAT,
    M_PER_DEG_LON_EQ,
    AisPoint,
    CbtrConfig,
    PairMode,
)

# degrees of latitude covered per knot-second
DEG_LAT_PER_KNOT_S = KNOT_MPS / M_PER_DEG_LAT

MAX_RECKON_S = 86400  # sanity bound; a day of extrapolation is already meaningless


class PredictedPosition(NamedTuple):
    lat: float
    lon: float
    at_t: float


class SpaceTimeVector(NamedTuple):
    """Displacement with the time gap folded in as a third coordinate."""

    tau: float
    dlat: float
    dlon: float


class MovingError(NamedTuple):
    forward: float
    backward: float
    combined: float
    cos_angle: float


class SteadyError(NamedTuple):
    value: float
    cos_angle: float


def displace(lat: float, lon: float, sog: float, cog: float, dt: float) -> tuple[float, float]:
    """Advance a position by dt seconds of constant speed and course."""
    course = math.radians(cog)
    new_lat = lat + sog * math.cos(course) * DEG_LAT_PER_KNOT_S * dt
    lon_rate = KNOT_MPS / (M_PER_DEG_LON_EQ * math.cos(math.radians(lat)))
    new_lon = lon + sog * math.sin(course) * lon_rate * dt
    return new_lat, new_lon


def dead_reckon(p: AisPoint, dt: float) -> PredictedPosition:
    """Where p would be dt seconds later (earlier for negative dt)."""
    if abs(dt) > MAX_RECKON_S:
        raise ValueError(f"refusing to extrapolate {dt} s")
    lat, lon = displace(p.lat, p.lon, p.sog, p.cog, dt)
    return PredictedPosition(lat, lon, p.t + dt)


def pair_mode(a: AisPoint, b: AisPoint, cfg: CbtrConfig) -> PairMode:
    if a.sog + b.sog > cfg.moving_speed_sum:
        return PairMode.MOVING
    return PairMode.STEADY


def space_time_vector(dt: float, dlat: float, dlon: float, alpha: float,
                      time_weight: float) -> SpaceTimeVector:
    return SpaceTimeVector(time_weight * dt, alpha * dlat, dlon)


def cosine(u: SpaceTimeVector, v: SpaceTimeVector) -> float:
    nu = math.sqrt(u.tau * u.tau + u.dlat * u.dlat + u.dlon * u.dlon)
    nv = math.sqrt(v.tau * v.tau + v.dlat * v.dlat + v.dlon * v.dlon)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine of a zero-length vector is undefined")
    dot = u.tau * v.tau + u.dlat * v.dlat + u.dlon * v.dlon
    return dot / (nu * nv)


def moving_error(xi: AisPoint, xj: AisPoint, alpha: float, cfg: CbtrConfig) -> MovingError:
    """Two-sided extrapolation error between a report and a later one.

    Forward: advance xi to xj's time and compare with xj.  Backward: rewind
    xj to xi's time and compare with xi.  The combined value averages both,
    so a link must look right from either end.  The cosine compares the
    direction xi claims to be moving with the direction xj actually lies,
    both taken in (time, scaled lat, lon) space.
    """
    dt = xj.t - xi.t
    if dt <= 0:
        raise ValueError("xj must be strictly later than xi")
    fwd_lat, fwd_lon = displace(xi.lat, xi.lon, xi.sog, xi.cog, dt)
    tm = cfg.time_weight_moving * dt
    fl = alpha * (fwd_lat - xj.lat)
    fo = fwd_lon - xj.lon
    forward = tm * tm + fl * fl + fo * fo
    bwd_lat, bwd_lon = displace(xj.lat, xj.lon, xj.sog, xj.cog, -dt)
    bl = alpha * (bwd_lat - xi.lat)
    bo = bwd_lon - xi.lon
    backward = tm * tm + bl * bl + bo * bo
    combined = 0.5 * (forward + backward)
    u = space_time_vector(dt, fwd_lat - xi.lat, fwd_lon - xi.lon, alpha,
                          cfg.angle_time_weight)
    v = space_time_vector(dt, xj.lat - xi.lat, xj.lon - xi.lon, alpha,
                          cfg.angle_time_weight)
    return MovingError(forward, backward, combined, cosine(u, v))


def steady_error(xi: AisPoint, xj: AisPoint, alpha: float, cfg: CbtrConfig) -> SteadyError:
    """Observed-position error for slow pairs, no extrapolation involved.

    The cosine measures how close the pair's space-time displacement lies to
    the pure time axis; near-stationary vessels should barely move in space.
    """
    dt = xj.t - xi.t
    if dt <= 0:
        raise ValueError("xj must be strictly later than xi")
    dlat = xj.lat - xi.lat
    dlon = xj.lon - xi.lon
    ts = cfg.time_weight_steady * dt
    value = ts * ts + (alpha * alpha) * (dlat * dlat) + dlon * dlon
    v = space_time_vector(dt, dlat, dlon, alpha, cfg.angle_time_weight)
    return SteadyError(value, cosine(SpaceTimeVector(1.0, 0.0, 0.0), v))


def turning_cos(a: AisPoint, b: AisPoint, c: AisPoint, alpha: float,
                time_weight: float) -> float:
    """Cosine of the bend across two consecutive links a -> b -> c."""
    u = space_time_vector(b.t - a.t, b.lat - a.lat, b.lon - a.lon, alpha, time_weight)
    v = space_time_vector(c.t - b.t, c.lat - b.lat, c.lon - b.lon, alpha, time_weight)
    return cosine(u, v)


def ground_distance_coords_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Flat-earth distance in meters, good at the scales screened here."""
    mean_lat = math.radians((lat1 + lat2) / 2.0)
    dy = (lat2 - lat1) * M_PER_DEG_LAT
    dx = (lon2 - lon1) * M_PER_DEG_LON_EQ * math.cos(mean_lat)
    return math.hypot(dx, dy)


def ground_distance_m(a: AisPoint, b: AisPoint) -> float:
    return ground_distance_coords_m(a.lat, a.lon, b.lat, b.lon)
