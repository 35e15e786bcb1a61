import math

import pytest

import reference
from trackstitch.model import AisPoint, TrackDataset
from trackstitch.npc import (
    NpcConfig,
    UnclassifiablePointError,
    npc_classify,
    npc_cluster,
    npc_grouping_targets,
)
from trackstitch.synth import generate_fleet

from conftest import small_mixed_config


def _pt(t, lat, lon, sog, cog, vid=None):
    return AisPoint(t, lat, lon, sog, cog, vid=vid)


def test_config_validation():
    NpcConfig(k_neighbors=1, lat_weight=None)
    with pytest.raises(ValueError):
        NpcConfig(k_neighbors=0)
    with pytest.raises(ValueError):
        NpcConfig(time_weight=-1e-6)
    with pytest.raises(ValueError):
        NpcConfig(lat_weight=-0.5)
    with pytest.raises(ValueError):
        NpcConfig(cog_weight=-1.0)


def test_classify_requires_labels():
    train = TrackDataset.from_points([_pt(0, 37.0, -76.0, 1.0, 0.0)])
    test = TrackDataset.from_points([_pt(10, 37.0, -76.0, 1.0, 0.0)])
    with pytest.raises(ValueError):
        npc_classify(train, test)


def test_classify_projection_beats_raw_proximity():
    # vessel a last reported 309 m south of the test point but is headed
    # straight for it; vessel b sits 91 m away and is not moving
    a0 = _pt(0, 37.0, -76.0, 10.0, 0.0, vid="a")
    lat_100, lon_100 = reference.advance(37.0, -76.0, 10.0, 0.0, 100)
    a1 = _pt(100, lat_100, lon_100, 10.0, 0.0, vid="a")
    target_lat, target_lon = reference.advance(lat_100, lon_100, 10.0, 0.0, 100)
    b_lat = target_lat + 91.0 / 111120.0
    b0 = _pt(0, b_lat, target_lon, 0.0, 0.0, vid="b")
    b1 = _pt(100, b_lat, target_lon, 0.0, 0.0, vid="b")
    train = TrackDataset.from_points([a0, a1, b0, b1])
    test = TrackDataset.from_points([_pt(200, target_lat, target_lon, 10.0, 0.0)])
    assert npc_classify(train, test) == ("a",)


def test_classify_report_at_test_time_counts():
    train = TrackDataset.from_points([
        _pt(0, 37.01, -76.01, 0.0, 0.0, vid="b"),
        _pt(100, 37.0, -76.0, 0.0, 0.0, vid="a"),
    ])
    test = TrackDataset.from_points([_pt(100, 37.0, -76.0, 0.0, 0.0)])
    assert npc_classify(train, test) == ("a",)


def test_classify_tie_takes_first_sorted_label():
    # both labels project to the identical spot; insertion order is b first
    train = TrackDataset.from_points([
        _pt(0, 37.0, -76.0, 0.0, 0.0, vid="b"),
        _pt(0, 37.0, -76.0, 0.0, 0.0, vid="a"),
    ])
    test = TrackDataset.from_points([_pt(50, 37.0, -76.0, 0.0, 0.0)])
    assert npc_classify(train, test) == ("a",)


def test_classify_lookback_is_bounded():
    # a's only reports near the test point are older than its last ten, so
    # they are invisible and the closer-by-history label b wins
    pts = []
    x_lat, x_lon = 37.0, -76.0
    far_lat = 37.0 + 5000.0 / 111120.0
    for k in range(12):
        lat = x_lat if k < 2 else far_lat
        pts.append(_pt(k * 10, lat, x_lon, 0.0, 0.0, vid="a"))
    z_lat = x_lat + 1000.0 / 111120.0
    pts.append(_pt(0, z_lat, x_lon, 0.0, 0.0, vid="b"))
    train = TrackDataset.from_points(pts)
    test = TrackDataset.from_points([_pt(200, x_lat, x_lon, 0.0, 0.0)])
    assert npc_classify(train, test) == ("b",)


def test_classify_reports_unreachable_points():
    train = TrackDataset.from_points([_pt(50, 37.0, -76.0, 1.0, 0.0, vid="a")])
    test = TrackDataset.from_points([
        _pt(10, 37.0, -76.0, 1.0, 0.0),
        _pt(20, 37.0, -76.0, 1.0, 0.0),
        _pt(60, 37.0, -76.0, 1.0, 0.0),
    ])
    with pytest.raises(UnclassifiablePointError) as err:
        npc_classify(train, test)
    assert err.value.indices == [0, 1]


def _two_vessel_toy():
    pts = []
    lat, lon = 37.0, -76.2
    for k in range(3):
        pts.append(_pt(k * 60, lat, lon, 10.0, 0.0, vid="a"))
        lat, lon = reference.advance(lat, lon, 10.0, 0.0, 60)
    lat, lon = 37.03, -76.0
    for k in range(3):
        pts.append(_pt(k * 60, lat, lon, 5.0, 90.0, vid="b"))
        lat, lon = reference.advance(lat, lon, 5.0, 90.0, 60)
    return TrackDataset.from_points(pts)


def test_grouping_separates_distant_vessels():
    ds = _two_vessel_toy()
    assignment = npc_cluster(ds)
    # reports interleave in time as a, b, a, b, ...
    assert list(assignment.cluster_of) == [0, 1, 0, 1, 0, 1]
    assert assignment.n_clusters == 2
    assert assignment.endpoints == frozenset()


def test_grouping_requires_enough_points():
    ds = TrackDataset.from_points([_pt(t, 37.0, -76.0, 1.0, 0.0) for t in (0, 9, 21)])
    with pytest.raises(ValueError):
        npc_grouping_targets(ds, NpcConfig(k_neighbors=3))


def _mean_course(a, b):
    y = (math.sin(math.radians(a)) + math.sin(math.radians(b))) / 2.0
    x = (math.cos(math.radians(a)) + math.cos(math.radians(b))) / 2.0
    if x == 0.0 and y == 0.0:
        return a
    return math.degrees(math.atan2(y, x)) % 360.0


def _bruteforce_targets(ds, cfg):
    n = len(ds)
    lat_w = ds.alpha if cfg.lat_weight is None else cfg.lat_weight
    feats = [(cfg.time_weight * int(ds.t[i]), lat_w * float(ds.lat[i]),
              cfg.lon_weight * float(ds.lon[i]), cfg.sog_weight * float(ds.sog[i]),
              cfg.cog_weight * float(ds.cog[i])) for i in range(n)]
    out = []
    for i in range(n):
        d2 = []
        for j in range(n):
            if j == i:
                d2.append((math.inf, j))
                continue
            s = sum((feats[i][m] - feats[j][m]) ** 2 for m in range(5))
            d2.append((s, j))
        nearest = sorted(j for _, j in sorted(d2, key=lambda p: (p[0], p[1]))[:cfg.k_neighbors])
        best_j, best_d = -1, math.inf
        for j in nearest:
            dt = int(ds.t[j]) - int(ds.t[i])
            sog = (float(ds.sog[i]) + float(ds.sog[j])) / 2.0
            cog = _mean_course(float(ds.cog[i]), float(ds.cog[j]))
            est_lat, est_lon = reference.advance(float(ds.lat[i]), float(ds.lon[i]),
                                                 sog, cog, dt)
            d = reference.ground_m(est_lat, est_lon, float(ds.lat[j]), float(ds.lon[j]))
            if d < best_d:
                best_j, best_d = j, d
        out.append(best_j)
    return out


@pytest.mark.parametrize("seed", [61, 62])
def test_grouping_matches_bruteforce(seed):
    ds = generate_fleet(small_mixed_config(seed, n_vessels=2, duration_s=600))
    cfg = NpcConfig()
    got = npc_grouping_targets(ds, cfg)
    assert list(got) == _bruteforce_targets(ds, cfg)


def test_grouping_respects_feature_weights():
    # with sog weighted heavily, a same-speed twin outranks a same-place one
    ds = _two_vessel_toy()
    heavy = NpcConfig(k_neighbors=2, sog_weight=100.0)
    got = npc_grouping_targets(ds, heavy)
    assert list(got) == _bruteforce_targets(ds, heavy)
