"""Shared domain types.

Conventions used throughout the package:

* ``t`` is whole seconds from the dataset epoch (the earliest report is 0).
* ``lat``/``lon`` are decimal degrees, WGS84-style.
* ``sog`` is speed over ground in knots.
* ``cog`` is course over ground in degrees clockwise from true north,
  in [0, 360).
* ``alpha`` rescales latitude differences so that, near the fleet's mean
  latitude, one scaled latitude degree covers about the same ground as one
  longitude degree.  All screening math works in these scaled degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

KNOT_MPS = 0.514444
M_PER_DEG_LAT = 111120.0
M_PER_DEG_LON_EQ = 111320.0


class PairMode(Enum):
    """How a pair of reports is screened: by motion extrapolation or not."""

    MOVING = "moving"
    STEADY = "steady"


@dataclass(frozen=True, slots=True)
class AisPoint:
    """One timestamped position report.

    ``vid`` is an optional ground-truth vessel identifier.  It is carried for
    evaluation only; the reconstruction algorithms never read it.
    """

    t: int
    lat: float
    lon: float
    sog: float
    cog: float
    vid: str | None = None

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"lon out of range: {self.lon}")
        if not self.sog >= 0.0:
            raise ValueError(f"sog must be >= 0, got {self.sog}")
        if not 0.0 <= self.cog < 360.0:
            raise ValueError(f"cog must be in [0, 360), got {self.cog}")


def latitude_scale(lats: Iterable[float]) -> float:
    """Scale factor for latitude differences at the fleet's mean latitude.

    Uses an exact sum so the result does not depend on point order.
    """
    values = list(lats)
    if not values:
        raise ValueError("cannot compute latitude scale of an empty dataset")
    mean_lat = math.fsum(values) / len(values)
    cos_lat = math.cos(math.radians(mean_lat))
    # cos of a float 90.0 is ~6e-17, not 0, so guard with a real threshold
    if cos_lat <= 1e-9:
        raise ValueError(f"mean latitude {mean_lat} too close to a pole")
    return 69.0 / (69.172 * cos_lat)


@dataclass(frozen=True)
class TrackDataset:
    """A time-sorted point set stored as parallel column arrays.

    Immutable after construction; the arrays are marked read-only.  Ties in
    ``t`` keep their original input order.
    """

    t: np.ndarray
    lat: np.ndarray
    lon: np.ndarray
    sog: np.ndarray
    cog: np.ndarray
    vids: tuple[str, ...] | None
    alpha: float
    epoch: str = ""

    @classmethod
    def from_points(cls, points: Sequence[AisPoint], epoch: str = "") -> "TrackDataset":
        if not points:
            raise ValueError("dataset needs at least one point")
        t = np.array([p.t for p in points], dtype=np.int64)
        order = np.argsort(t, kind="stable")
        t = t[order]
        lat = np.array([p.lat for p in points], dtype=np.float64)[order]
        lon = np.array([p.lon for p in points], dtype=np.float64)[order]
        sog = np.array([p.sog for p in points], dtype=np.float64)[order]
        cog = np.array([p.cog for p in points], dtype=np.float64)[order]
        with_vid = [p.vid is not None for p in points]
        if any(with_vid) and not all(with_vid):
            raise ValueError("either every point carries a vid or none does")
        vids = tuple(points[i].vid for i in order) if all(with_vid) else None
        for arr in (t, lat, lon, sog, cog):
            arr.setflags(write=False)
        alpha = latitude_scale(lat)
        return cls(t=t, lat=lat, lon=lon, sog=sog, cog=cog, vids=vids,
                   alpha=alpha, epoch=epoch)

    def __len__(self) -> int:
        return int(self.t.shape[0])

    def point(self, i: int) -> AisPoint:
        vid = self.vids[i] if self.vids is not None else None
        return AisPoint(int(self.t[i]), float(self.lat[i]), float(self.lon[i]),
                        float(self.sog[i]), float(self.cog[i]), vid)

    @property
    def points(self) -> tuple[AisPoint, ...]:
        return tuple(self.point(i) for i in range(len(self)))

    def has_vids(self) -> bool:
        return self.vids is not None


@dataclass(frozen=True)
class CbtrConfig:
    """Tuning knobs for the link-and-cluster reconstruction.

    The defaults are the values the pipeline was validated with; every field
    can be overridden per run.
    """

    window_s: int = 1000
    moving_speed_sum: float = 3.0     # knots; pairs summing above this are screened as moving
    time_weight_moving: float = 2e-6  # per-second weight of the time gap in the moving error
    time_weight_steady: float = 2e-9
    angle_time_weight: float = 1e-5   # per-second weight when building direction vectors
    cos_moving_min: float = 0.1       # moving candidates at or below this cosine are dropped
    cos_steady_min: float = 0.95      # steady candidates below this cosine are dropped
    n_abnormal: int = 50              # how many worst links get the end-of-track treatment
    turn_rescue_dist_m: float = 350.0
    turn_rescue_cos_min: float = 0.6

    def __post_init__(self):
        if self.window_s <= 0:
            raise ValueError("window_s must be positive")
        if self.moving_speed_sum < 0:
            raise ValueError("moving_speed_sum must be >= 0")
        for name in ("time_weight_moving", "time_weight_steady", "angle_time_weight"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("cos_moving_min", "cos_steady_min", "turn_rescue_cos_min"):
            value = getattr(self, name)
            if not -1.0 <= value <= 1.0:
                raise ValueError(f"{name} must be a cosine in [-1, 1]")
        if self.n_abnormal < 0:
            raise ValueError("n_abnormal must be >= 0")
        if self.turn_rescue_dist_m < 0:
            raise ValueError("turn_rescue_dist_m must be >= 0")


@dataclass(frozen=True)
class LinkSet:
    """Per-point choice of next report, from the same screening pass.

    ``targets[i]`` is the index of the chosen next point, or -1 when no
    candidate survived.  ``errors`` holds the score of the chosen link (NaN
    when absent) and ``modes`` whether it was screened as moving (1) or
    steady (2); 0 means no link.
    """

    targets: np.ndarray
    errors: np.ndarray
    modes: np.ndarray

    def __post_init__(self):
        for arr in (self.targets, self.errors, self.modes):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return int(self.targets.shape[0])

    def target_of(self, i: int) -> int | None:
        j = int(self.targets[i])
        return j if j >= 0 else None

    def link_of(self, i: int) -> tuple[int, float, PairMode] | None:
        j = int(self.targets[i])
        if j < 0:
            return None
        mode = PairMode.MOVING if int(self.modes[i]) == 1 else PairMode.STEADY
        return j, float(self.errors[i]), mode

    def linked_indices(self) -> np.ndarray:
        return np.nonzero(self.targets >= 0)[0]


@dataclass(frozen=True)
class ClusterAssignment:
    """Cluster label per point plus the points flagged as chain ends.

    ``abnormal`` holds the points whose outgoing link was severed;
    ``endpoints`` additionally includes points that never had a link.
    """

    cluster_of: np.ndarray
    endpoints: frozenset[int]
    abnormal: frozenset[int]

    def __post_init__(self):
        self.cluster_of.setflags(write=False)

    def __len__(self) -> int:
        return int(self.cluster_of.shape[0])

    @property
    def n_clusters(self) -> int:
        return int(self.cluster_of.max()) + 1 if len(self) else 0
