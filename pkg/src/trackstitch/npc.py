"""Next-point connection: classification and clustering by nearest reports.

Both operations measure nearness in feature space (time, scaled latitude,
longitude, and optionally speed and course, each with its own weight) and
then let constant-velocity extrapolation decide which nearby report really
belongs to the same vessel.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .cbtr import UnionFind, components_by_first_point
from .kinematics import displace, ground_distance_coords_m
from .model import ClusterAssignment, TrackDataset

# classification looks back at most this many reports per label
RECENT_PER_LABEL = 10


@dataclass(frozen=True)
class NpcConfig:
    """Neighborhood size and feature weights.

    ``lat_weight`` of None means "use the dataset's latitude scale", which
    makes one weighted latitude degree match one longitude degree of ground.
    """

    k_neighbors: int = 3
    time_weight: float = 1e-5
    lat_weight: float | None = None
    lon_weight: float = 1.0
    sog_weight: float = 0.0
    cog_weight: float = 0.0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        for name in ("time_weight", "lon_weight", "sog_weight", "cog_weight"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.lat_weight is not None and self.lat_weight < 0:
            raise ValueError("lat_weight must be >= 0")


class UnclassifiablePointError(ValueError):
    """No label had any report at or before some test points' times."""

    def __init__(self, indices: list[int]):
        self.indices = indices
        super().__init__(f"no labeled history for test points {indices}")


def _mean_course_deg(a: float, b: float) -> float:
    """Average of two compass courses, taken on the circle."""
    ar, br = math.radians(a), math.radians(b)
    y = (math.sin(ar) + math.sin(br)) / 2.0
    x = (math.cos(ar) + math.cos(br)) / 2.0
    if x == 0.0 and y == 0.0:
        return a  # opposite courses; any choice is as wrong as another
    return math.degrees(math.atan2(y, x)) % 360.0


def npc_classify(train: TrackDataset, test: TrackDataset,
                 cfg: NpcConfig | None = None) -> tuple[str, ...]:
    """Label each test report with the vessel whose track best reaches it.

    For every label, take the spatially closest of its last few reports at
    or before the test time, advance it to the test time, and score the
    label by how near the projection lands.  The nearest projection wins;
    ties go to the first label in sorted order.
    """
    del cfg  # reserved for future weighting; classification is distance-based
    if not train.has_vids():
        raise ValueError("training data must carry vids")
    labels = sorted(set(train.vids))
    by_label: dict[str, list[int]] = {label: [] for label in labels}
    for i in range(len(train)):
        by_label[train.vids[i]].append(i)
    label_times = {label: [int(train.t[i]) for i in idx]
                   for label, idx in by_label.items()}

    results: list[str | None] = []
    dead: list[int] = []
    for k in range(len(test)):
        tk = int(test.t[k])
        lat_k = float(test.lat[k])
        lon_k = float(test.lon[k])
        best_label = None
        best_d = math.inf
        for label in labels:
            idx = by_label[label]
            cut = bisect_right(label_times[label], tk)
            if cut == 0:
                continue
            recent = idx[max(0, cut - RECENT_PER_LABEL):cut]
            sel = None
            sel_d = math.inf
            for i in recent:
                d = ground_distance_coords_m(float(train.lat[i]), float(train.lon[i]),
                                             lat_k, lon_k)
                if d < sel_d:
                    sel, sel_d = i, d
            est_lat, est_lon = displace(float(train.lat[sel]), float(train.lon[sel]),
                                        float(train.sog[sel]), float(train.cog[sel]),
                                        tk - int(train.t[sel]))
            d = ground_distance_coords_m(est_lat, est_lon, lat_k, lon_k)
            if d < best_d:
                best_label, best_d = label, d
        if best_label is None:
            dead.append(k)
        results.append(best_label)
    if dead:
        raise UnclassifiablePointError(dead)
    return tuple(results)


def npc_grouping_targets(ds: TrackDataset, cfg: NpcConfig | None = None) -> np.ndarray:
    """For each report, the neighbor it groups with.

    Among the k feature-space nearest neighbors, pick the one whose actual
    position best matches extrapolating this report with the pair's average
    velocity over their (signed) time difference.
    """
    cfg = cfg or NpcConfig()
    n = len(ds)
    if n < cfg.k_neighbors + 1:
        raise ValueError(f"need at least {cfg.k_neighbors + 1} points")
    lat_w = ds.alpha if cfg.lat_weight is None else cfg.lat_weight
    feats = np.stack([
        cfg.time_weight * ds.t.astype(np.float64),
        lat_w * ds.lat,
        cfg.lon_weight * ds.lon,
        cfg.sog_weight * ds.sog,
        cfg.cog_weight * ds.cog,
    ], axis=1)
    sq = np.einsum("ij,ij->i", feats, feats)

    targets = np.empty(n, dtype=np.int64)
    chunk = max(1, min(n, 4_000_000 // max(n, 1)))
    for a in range(0, n, chunk):
        b = min(n, a + chunk)
        d2 = sq[a:b, None] + sq[None, :] - 2.0 * (feats[a:b] @ feats.T)
        d2[np.arange(b - a), np.arange(a, b)] = np.inf
        order = np.argsort(d2, axis=1, kind="stable")[:, :cfg.k_neighbors]
        for row, i in enumerate(range(a, b)):
            best_j = -1
            best_d = math.inf
            for j in sorted(int(x) for x in order[row]):
                dt = int(ds.t[j]) - int(ds.t[i])
                avg_sog = (float(ds.sog[i]) + float(ds.sog[j])) / 2.0
                avg_cog = _mean_course_deg(float(ds.cog[i]), float(ds.cog[j]))
                est_lat, est_lon = displace(float(ds.lat[i]), float(ds.lon[i]),
                                            avg_sog, avg_cog, dt)
                d = ground_distance_coords_m(est_lat, est_lon,
                                             float(ds.lat[j]), float(ds.lon[j]))
                if d < best_d:
                    best_j, best_d = j, d
            targets[i] = best_j
    return targets


def npc_cluster(ds: TrackDataset, cfg: NpcConfig | None = None) -> ClusterAssignment:
    """Cluster reports by mutual grouping, labels ordered by earliest member."""
    targets = npc_grouping_targets(ds, cfg)
    n = len(ds)
    uf = UnionFind(n)
    for i in range(n):
        uf.union(i, int(targets[i]))
    cluster_of = components_by_first_point(uf, n)
    return ClusterAssignment(cluster_of=cluster_of,
                             endpoints=frozenset(), abnormal=frozenset())
