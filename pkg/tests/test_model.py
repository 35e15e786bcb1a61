import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from trackstitch.model import (
    AisPoint,
    CbtrConfig,
    ClusterAssignment,
    LinkSet,
    PairMode,
    TrackDataset,
    latitude_scale,
)


def test_point_validation():
    AisPoint(0, 37.0, -76.0, 5.0, 359.9)
    with pytest.raises(ValueError):
        AisPoint(-1, 37.0, -76.0, 5.0, 0.0)
    with pytest.raises(ValueError):
        AisPoint(0, 91.0, -76.0, 5.0, 0.0)
    with pytest.raises(ValueError):
        AisPoint(0, 37.0, -181.0, 5.0, 0.0)
    with pytest.raises(ValueError):
        AisPoint(0, 37.0, -76.0, -0.1, 0.0)
    with pytest.raises(ValueError):
        AisPoint(0, 37.0, -76.0, 5.0, 360.0)


def test_latitude_scale_at_equator():
    assert latitude_scale([0.0]) == pytest.approx(0.9975134447464292, abs=1e-15)


def test_latitude_scale_at_37():
    assert latitude_scale([37.0]) == pytest.approx(1.2490221536572539, abs=1e-12)


def test_latitude_scale_uses_mean():
    assert latitude_scale([36.0, 38.0]) == latitude_scale([37.0, 37.0])


def test_latitude_scale_rejects_empty_and_pole():
    with pytest.raises(ValueError):
        latitude_scale([])
    with pytest.raises(ValueError):
        latitude_scale([90.0])


@given(st.lists(st.floats(min_value=-60.0, max_value=60.0), min_size=1, max_size=40),
       st.randoms())
def test_latitude_scale_order_independent(lats, rng):
    shuffled = list(lats)
    rng.shuffle(shuffled)
    assert latitude_scale(shuffled) == latitude_scale(lats)


def _points():
    return [
        AisPoint(30, 37.01, -76.1, 4.0, 90.0, "b"),
        AisPoint(0, 37.00, -76.2, 5.0, 0.0, "a"),
        AisPoint(30, 37.02, -76.3, 6.0, 180.0, "c"),
    ]


def test_dataset_sorts_by_time_stably():
    ds = TrackDataset.from_points(_points())
    assert list(ds.t) == [0, 30, 30]
    # the two t=30 points keep their input order
    assert ds.vids == ("a", "b", "c")
    assert ds.point(1).lat == 37.01


def test_dataset_arrays_read_only():
    ds = TrackDataset.from_points(_points())
    with pytest.raises(ValueError):
        ds.lat[0] = 0.0


def test_dataset_alpha_matches_scale():
    ds = TrackDataset.from_points(_points())
    assert ds.alpha == latitude_scale([p.lat for p in _points()])


def test_dataset_vids_all_or_none():
    mixed = [AisPoint(0, 37.0, -76.0, 5.0, 0.0, "a"),
             AisPoint(1, 37.0, -76.0, 5.0, 0.0)]
    with pytest.raises(ValueError):
        TrackDataset.from_points(mixed)
    unlabeled = TrackDataset.from_points([AisPoint(0, 37.0, -76.0, 5.0, 0.0)])
    assert not unlabeled.has_vids()
    assert unlabeled.vids is None


def test_dataset_rejects_empty():
    with pytest.raises(ValueError):
        TrackDataset.from_points([])


def test_dataset_point_round_trip():
    points = _points()
    ds = TrackDataset.from_points(points)
    assert ds.points == (points[1], points[0], points[2])


def test_cbtr_config_validation():
    CbtrConfig(window_s=300, n_abnormal=0)
    with pytest.raises(ValueError):
        CbtrConfig(window_s=0)
    with pytest.raises(ValueError):
        CbtrConfig(time_weight_moving=0.0)
    with pytest.raises(ValueError):
        CbtrConfig(cos_steady_min=1.5)
    with pytest.raises(ValueError):
        CbtrConfig(n_abnormal=-1)


def test_link_set_accessors():
    links = LinkSet(targets=np.array([1, -1], dtype=np.int64),
                    errors=np.array([0.5, np.nan]),
                    modes=np.array([1, 0], dtype=np.int8))
    assert links.target_of(0) == 1
    assert links.target_of(1) is None
    assert links.link_of(0) == (1, 0.5, PairMode.MOVING)
    assert links.link_of(1) is None
    assert list(links.linked_indices()) == [0]


def test_cluster_assignment_counts():
    assignment = ClusterAssignment(cluster_of=np.array([0, 1, 1, 2]),
                                   endpoints=frozenset({3}),
                                   abnormal=frozenset())
    assert len(assignment) == 4
    assert assignment.n_clusters == 3
