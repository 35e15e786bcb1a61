"""Clustering-based trajectory reconstruction.

The pipeline runs in four stages: gather the time-window candidates for each
report, pick the best-matching next report (screened as moving or steady
depending on the pair's summed speed), sever the links that look like
track ends, then read the clusters off the surviving link graph.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kinematics
from .model import (
    KNOT_MPS,
    M_PER_DEG_LON_EQ,
    CbtrConfig,
    ClusterAssignment,
    LinkSet,
    PairMode,
    TrackDataset,
)
from .kinematics import DEG_LAT_PER_KNOT_S


@dataclass(frozen=True)
class AbnormalReport:
    """Outcome of the end-of-track screening.

    ``worst_n`` lists the highest normalized-error links, worst first.
    ``rescued_turns`` are the subset kept because they look like genuine
    turns.  ``abnormal`` is everything flagged: the unrescued worst links
    plus every point that never found a next report.
    """

    no_bpnp: frozenset[int]
    worst_n: tuple[int, ...]
    rescued_turns: frozenset[int]
    abnormal: frozenset[int]


class CbtrResult(tuple):
    """(assignment, links, report), with named access."""

    __slots__ = ()

    def __new__(cls, assignment: ClusterAssignment, links: LinkSet, report: AbnormalReport):
        return super().__new__(cls, (assignment, links, report))

    @property
    def assignment(self) -> ClusterAssignment:
        return self[0]

    @property
    def links(self) -> LinkSet:
        return self[1]

    @property
    def report(self) -> AbnormalReport:
        return self[2]


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


class _Workspace:
    """Per-run precomputation shared by every link selection."""

    __slots__ = ("ds", "cfg", "t", "tf", "lat", "lon", "sog", "cog",
                 "vn", "ve", "alpha", "wa")

    def __init__(self, ds: TrackDataset, cfg: CbtrConfig):
        self.ds = ds
        self.cfg = cfg
        self.t = ds.t
        self.tf = ds.t.astype(np.float64)
        self.lat = ds.lat
        self.lon = ds.lon
        self.sog = ds.sog
        self.cog = ds.cog
        course = np.radians(ds.cog)
        # per-point velocity in degrees per second, matching displace()
        self.vn = ds.sog * np.cos(course) * DEG_LAT_PER_KNOT_S
        lon_rate = KNOT_MPS / (M_PER_DEG_LON_EQ * np.cos(np.radians(ds.lat)))
        self.ve = ds.sog * np.sin(course) * lon_rate
        self.alpha = ds.alpha
        self.wa = cfg.angle_time_weight


def candidate_window(ds: TrackDataset, i: int, cfg: CbtrConfig | None = None) -> np.ndarray:
    """Indices of reports between 1 and window_s seconds after point i."""
    cfg = cfg or CbtrConfig()
    if not 0 <= i < len(ds):
        raise IndexError(f"point index {i} out of range")
    lo = int(np.searchsorted(ds.t, ds.t[i] + 1, side="left"))
    hi = int(np.searchsorted(ds.t, ds.t[i] + cfg.window_s, side="right"))
    return np.arange(lo, hi, dtype=np.int64)


def _best_link(ws: _Workspace, i: int) -> tuple[int, float, int] | None:
    cfg = ws.cfg
    ti = ws.t[i]
    lo = int(np.searchsorted(ws.t, ti + 1, side="left"))
    hi = int(np.searchsorted(ws.t, ti + cfg.window_s, side="right"))
    if hi <= lo:
        return None
    dt = ws.tf[lo:hi] - ws.tf[i]
    lat_j = ws.lat[lo:hi]
    lon_j = ws.lon[lo:hi]
    lat_i = ws.lat[i]
    lon_i = ws.lon[i]
    alpha = ws.alpha

    moving = ws.sog[i] + ws.sog[lo:hi] > cfg.moving_speed_sum

    # forward: advance i to each candidate time, compare against the candidate
    plat = lat_i + ws.vn[i] * dt
    plon = lon_i + ws.ve[i] * dt
    tm = cfg.time_weight_moving * dt
    fl = alpha * (plat - lat_j)
    fo = plon - lon_j
    forward = tm * tm + fl * fl + fo * fo
    # backward: rewind each candidate to i's time, compare against i
    negdt = -dt
    blat = lat_j + ws.vn[lo:hi] * negdt
    blon = lon_j + ws.ve[lo:hi] * negdt
    bl = alpha * (blat - lat_i)
    bo = blon - lon_i
    backward = tm * tm + bl * bl + bo * bo
    combined = 0.5 * (forward + backward)

    vtau = ws.wa * dt
    vlat = alpha * (lat_j - lat_i)
    vlon = lon_j - lon_i
    vnorm = np.sqrt(vtau * vtau + vlat * vlat + vlon * vlon)
    utau = ws.wa * dt
    ulat = alpha * (plat - lat_i)
    ulon = plon - lon_i
    unorm = np.sqrt(utau * utau + ulat * ulat + ulon * ulon)
    dot = utau * vtau + ulat * vlat + ulon * vlon
    cos_moving = dot / (unorm * vnorm)

    dlat = lat_j - lat_i
    dlon = lon_j - lon_i
    ts = cfg.time_weight_steady * dt
    d0 = ts * ts + (alpha * alpha) * (dlat * dlat) + dlon * dlon
    cos_steady = vtau / vnorm

    score = np.where(moving & (cos_moving > cfg.cos_moving_min), combined, np.inf)
    score = np.where(~moving & (cos_steady >= cfg.cos_steady_min), d0, score)
    k = int(np.argmin(score))
    best = float(score[k])
    if not math.isfinite(best):
        return None
    return lo + k, best, 1 if moving[k] else 2


def select_bpnp(ds: TrackDataset, i: int, cfg: CbtrConfig | None = None
                ) -> tuple[int, float, PairMode] | None:
    """Best predicted next point for report i, or None if nothing survives.

    Candidates inside the window are screened per pair: fast pairs by
    two-sided extrapolation error and heading agreement, slow pairs by raw
    displacement and closeness to the time axis.  The survivor with the
    lowest error wins; ties go to the earlier report.
    """
    cfg = cfg or CbtrConfig()
    if not 0 <= i < len(ds):
        raise IndexError(f"point index {i} out of range")
    found = _best_link(_Workspace(ds, cfg), i)
    if found is None:
        return None
    j, err, mode = found
    return j, err, PairMode.MOVING if mode == 1 else PairMode.STEADY


def _fill_links(ws: _Workspace, targets: np.ndarray, errors: np.ndarray,
                modes: np.ndarray, start: int, stop: int) -> None:
    for i in range(start, stop):
        found = _best_link(ws, i)
        if found is not None:
            targets[i], errors[i], modes[i] = found


def build_links(ds: TrackDataset, cfg: CbtrConfig | None = None,
                threads: int = 1) -> LinkSet:
    """Run link selection for every report.

    Worker count only splits the index range; the result is identical for
    any value.
    """
    cfg = cfg or CbtrConfig()
    if len(ds) == 0:
        raise ValueError("empty dataset")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    ws = _Workspace(ds, cfg)
    n = len(ds)
    targets = np.full(n, -1, dtype=np.int64)
    errors = np.full(n, np.nan, dtype=np.float64)
    modes = np.zeros(n, dtype=np.int8)
    if threads == 1 or n < 2 * threads:
        _fill_links(ws, targets, errors, modes, 0, n)
    else:
        bounds = np.linspace(0, n, threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_fill_links, ws, targets, errors, modes,
                                   int(bounds[w]), int(bounds[w + 1]))
                       for w in range(threads)]
            for f in futures:
                f.result()
    return LinkSet(targets=targets, errors=errors, modes=modes)


def detect_abnormal(ds: TrackDataset, links: LinkSet,
                    cfg: CbtrConfig | None = None) -> AbnormalReport:
    """Flag likely track ends.

    Links are ranked by error over the squared time gap; the worst
    n_abnormal are severed unless they look like a turn (next report close
    by and the bend across the following link shallow enough).  Points with
    no link at all are always included.
    """
    cfg = cfg or CbtrConfig()
    targets = links.targets
    no_bpnp = frozenset(int(i) for i in np.nonzero(targets < 0)[0])
    linked = links.linked_indices()
    if linked.size and cfg.n_abnormal > 0:
        dt = ds.t[targets[linked]].astype(np.float64) - ds.t[linked]
        normalized = links.errors[linked] / (dt * dt)
        order = np.argsort(-normalized, kind="stable")
        worst = tuple(int(x) for x in linked[order[:cfg.n_abnormal]])
    else:
        worst = ()
    rescued = set()
    for z in worst:
        z2 = int(targets[z])
        z3 = int(targets[z2])
        if z3 < 0:
            continue  # no continuation to judge the bend by
        p, p2, p3 = ds.point(z), ds.point(z2), ds.point(z3)
        if kinematics.ground_distance_m(p, p2) >= cfg.turn_rescue_dist_m:
            continue
        bend = kinematics.turning_cos(p, p2, p3, ds.alpha, cfg.angle_time_weight)
        if bend >= cfg.turn_rescue_cos_min:
            rescued.add(z)
    abnormal = frozenset(set(worst) - rescued) | no_bpnp
    return AbnormalReport(no_bpnp=no_bpnp, worst_n=worst,
                          rescued_turns=frozenset(rescued), abnormal=abnormal)


def surviving_targets(links: LinkSet, report: AbnormalReport) -> np.ndarray:
    """Link targets with severed points cleared to -1."""
    targets = links.targets.copy()
    for i in report.abnormal:
        targets[i] = -1
    return targets


def assemble_clusters(ds: TrackDataset, links: LinkSet,
                      report: AbnormalReport) -> ClusterAssignment:
    """Connected components of the surviving links, labeled 0..k-1.

    Component ids follow each component's earliest report, so labeling does
    not depend on traversal order.
    """
    n = len(ds)
    targets = surviving_targets(links, report)
    uf = UnionFind(n)
    for i in range(n):
        j = int(targets[i])
        if j >= 0:
            uf.union(i, j)
    cluster_of = components_by_first_point(uf, n)
    severed = frozenset(i for i in report.abnormal if int(links.targets[i]) >= 0)
    return ClusterAssignment(cluster_of=cluster_of,
                             endpoints=severed | report.no_bpnp,
                             abnormal=severed)


def components_by_first_point(uf: UnionFind, n: int) -> np.ndarray:
    """Component label per element, numbered by smallest member index."""
    cluster_of = np.empty(n, dtype=np.int64)
    next_id = 0
    root_to_id: dict[int, int] = {}
    for i in range(n):
        root = uf.find(i)
        cid = root_to_id.get(root)
        if cid is None:
            cid = next_id
            root_to_id[root] = cid
            next_id += 1
        cluster_of[i] = cid
    return cluster_of


def run_cbtr(ds: TrackDataset, cfg: CbtrConfig | None = None,
             threads: int = 1) -> CbtrResult:
    """Full reconstruction: links, end-of-track screening, clusters."""
    cfg = cfg or CbtrConfig()
    links = build_links(ds, cfg, threads=threads)
    report = detect_abnormal(ds, links, cfg)
    assignment = assemble_clusters(ds, links, report)
    return CbtrResult(assignment, links, report)
