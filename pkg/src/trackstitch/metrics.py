"""Reconstruction quality measures against ground-truth vessel ids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import ClusterAssignment


def correct_neighbor_rate(targets: Sequence[int | None] | np.ndarray,
                          vids: Sequence[str]) -> float:
    """Fraction of linked reports whose chosen next report shares their vid.

    ``targets`` holds one entry per point: the linked point's index, or
    None/-1 when the point has no outgoing link.  Unlinked points count in
    neither the numerator nor the denominator.
    """
    if len(targets) != len(vids):
        raise ValueError("targets and vids must align")
    hits = 0
    linked = 0
    for i, target in enumerate(targets):
        j = -1 if target is None else int(target)
        if j < 0:
            continue
        if vids[i] is None or vids[j] is None:
            raise ValueError(f"point {i if vids[i] is None else j} has no vid")
        linked += 1
        if vids[i] == vids[j]:
            hits += 1
    if linked == 0:
        raise ValueError("no linked points to score")
    return hits / linked


def jumps_merges(assignment: ClusterAssignment, vids: Sequence[str]) -> tuple[int, int]:
    """Count how often vessels split across clusters and clusters mix vessels.

    A vessel spread over c clusters contributes c-1 jumps; a cluster holding
    v vessels contributes v-1 merges.
    """
    if len(assignment) != len(vids):
        raise ValueError("assignment and vids must align")
    if len(vids) == 0:
        raise ValueError("empty truth")
    clusters_of_vessel: dict[str, set[int]] = {}
    vessels_of_cluster: dict[int, set[str]] = {}
    for i, vid in enumerate(vids):
        if vid is None:
            raise ValueError(f"point {i} has no vid")
        cid = int(assignment.cluster_of[i])
        clusters_of_vessel.setdefault(vid, set()).add(cid)
        vessels_of_cluster.setdefault(cid, set()).add(vid)
    jumps = sum(len(cs) - 1 for cs in clusters_of_vessel.values())
    merges = sum(len(vs) - 1 for vs in vessels_of_cluster.values())
    return jumps, merges


def estimate_vessel_count(n_clusters: int, jumps: int, merges: int) -> int:
    """Vessel count implied by the cluster count and the two error counts."""
    estimate = n_clusters + merges - jumps
    if estimate < 1:
        raise ValueError(f"inconsistent counts: {n_clusters} clusters, "
                         f"{jumps} jumps, {merges} merges")
    return estimate


@dataclass(frozen=True)
class EvalReport:
    """One run's quality summary; text and CSV renderings are stable."""

    correct_neighbor_rate: float
    jumps: int
    merges: int
    n_clusters_predicted: int
    n_vessels_true: int
    n_vessels_estimated: int
    runtime_s: float

    CSV_HEADER = ("correct_neighbor_rate,jumps,merges,n_clusters_predicted,"
                  "n_vessels_true,n_vessels_estimated,runtime_s")

    def __post_init__(self):
        if not 0.0 <= self.correct_neighbor_rate <= 1.0:
            raise ValueError("correct_neighbor_rate must be in [0, 1]")
        for name in ("jumps", "merges", "n_clusters_predicted",
                     "n_vessels_true", "n_vessels_estimated"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        expected = self.n_clusters_predicted + self.merges - self.jumps
        if self.n_vessels_estimated != expected:
            raise ValueError(
                f"n_vessels_estimated {self.n_vessels_estimated} does not match "
                f"clusters + merges - jumps = {expected}")

    def to_text(self, include_runtime: bool = True) -> str:
        lines = [
            f"correct_neighbor_rate = {self.correct_neighbor_rate:.6f}",
            f"jumps = {self.jumps}",
            f"merges = {self.merges}",
            f"n_clusters_predicted = {self.n_clusters_predicted}",
            f"n_vessels_true = {self.n_vessels_true}",
            f"n_vessels_estimated = {self.n_vessels_estimated}",
        ]
        if include_runtime:
            lines.append(f"runtime_s = {self.runtime_s:.3f}")
        return "\n".join(lines)

    def to_csv_row(self) -> str:
        return (f"{self.correct_neighbor_rate:.6f},{self.jumps},{self.merges},"
                f"{self.n_clusters_predicted},{self.n_vessels_true},"
                f"{self.n_vessels_estimated},{self.runtime_s:.3f}")


def successor_targets(cluster_of: Sequence[int] | np.ndarray) -> list[int | None]:
    """Chain each point to the next report in its own cluster.

    Used to score an assignment when the original link choices are not
    available, e.g. when evaluating from an assignment file.
    """
    targets: list[int | None] = [None] * len(cluster_of)
    last_in_cluster: dict[int, int] = {}
    for i, cid in enumerate(int(c) for c in cluster_of):
        if cid in last_in_cluster:
            targets[last_in_cluster[cid]] = i
        last_in_cluster[cid] = i
    return targets


def build_report(assignment: ClusterAssignment,
                 targets: Sequence[int | None] | np.ndarray,
                 vids: Sequence[str], runtime_s: float) -> EvalReport:
    """Assemble the full report for one reconstruction run."""
    jumps, merges = jumps_merges(assignment, vids)
    n_clusters = assignment.n_clusters
    return EvalReport(
        correct_neighbor_rate=correct_neighbor_rate(targets, vids),
        jumps=jumps,
        merges=merges,
        n_clusters_predicted=n_clusters,
        n_vessels_true=len(set(vids)),
        n_vessels_estimated=estimate_vessel_count(n_clusters, jumps, merges),
        runtime_s=runtime_s,
    )
