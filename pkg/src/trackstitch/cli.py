"""Command-line front end.

Subcommands: synth (make a labeled fleet), cluster (reconstruct tracks),
classify (label test reports from labeled history), eval (score an
assignment against truth), downsample (thin a dataset).  Every run that
writes files also writes a manifest describing exactly what produced them.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .cbtr import run_cbtr, surviving_targets
from .export import export_geojson, export_label_timeline
from .ingest import IngestError, parse_ais_csv, write_ais_csv
from .metrics import EvalReport, build_report, successor_targets
from .model import AisPoint, CbtrConfig, ClusterAssignment, TrackDataset
from .npc import (
    NpcConfig,
    UnclassifiablePointError,
    npc_classify,
    npc_cluster,
    npc_grouping_targets,
)
from .synth import (
    ARCHETYPES,
    PATTERNS,
    SynthConfig,
    downsample,
    generate_fleet,
    scenario_s1,
    scenario_s1_gaps,
)


@dataclass(frozen=True)
class RunManifest:
    """What produced a set of output files.

    Execution details that do not affect the outputs (worker count, wall
    time) are deliberately left out, so re-running a manifest's command on
    its input reproduces the files byte for byte.
    """

    command: str
    config: dict
    input_sha256: str
    seed: str
    outputs: dict
    report: EvalReport | None

    def to_text(self) -> str:
        lines = [f"command = {self.command}"]
        for key in sorted(self.config):
            lines.append(f"config.{key} = {self.config[key]}")
        lines.append(f"input_sha256 = {self.input_sha256}")
        lines.append(f"seed = {self.seed}")
        for key in sorted(self.outputs):
            lines.append(f"output.{key} = {self.outputs[key]}")
        if self.report is not None:
            lines.append("report:")
            lines.append(self.report.to_text(include_runtime=False))
        else:
            lines.append("report: unavailable (input has no vessel ids)")
        return "\n".join(lines) + "\n"


def _sha256_of(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _cbtr_config_from(args: argparse.Namespace) -> CbtrConfig:
    return CbtrConfig(
        window_s=args.window_s,
        moving_speed_sum=args.moving_speed_sum,
        time_weight_moving=args.time_weight_moving,
        time_weight_steady=args.time_weight_steady,
        angle_time_weight=args.angle_time_weight,
        cos_moving_min=args.cos_moving_min,
        cos_steady_min=args.cos_steady_min,
        n_abnormal=args.n_abnormal,
        turn_rescue_dist_m=args.turn_rescue_dist_m,
        turn_rescue_cos_min=args.turn_rescue_cos_min,
    )


def _npc_config_from(args: argparse.Namespace) -> NpcConfig:
    return NpcConfig(
        k_neighbors=args.k_neighbors,
        time_weight=args.npc_time_weight,
        lat_weight=args.npc_lat_weight,
        lon_weight=args.npc_lon_weight,
        sog_weight=args.npc_sog_weight,
        cog_weight=args.npc_cog_weight,
    )


def _config_dict(cfg) -> dict:
    return {f.name: getattr(cfg, f.name) for f in fields(cfg)}


def _add_cbtr_flags(parser: argparse.ArgumentParser) -> None:
    defaults = CbtrConfig()
    parser.add_argument("--window-s", type=int, default=defaults.window_s)
    parser.add_argument("--moving-speed-sum", type=float, default=defaults.moving_speed_sum)
    parser.add_argument("--time-weight-moving", type=float, default=defaults.time_weight_moving)
    parser.add_argument("--time-weight-steady", type=float, default=defaults.time_weight_steady)
    parser.add_argument("--angle-time-weight", type=float, default=defaults.angle_time_weight)
    parser.add_argument("--cos-moving-min", type=float, default=defaults.cos_moving_min)
    parser.add_argument("--cos-steady-min", type=float, default=defaults.cos_steady_min)
    parser.add_argument("--n-abnormal", type=int, default=defaults.n_abnormal)
    parser.add_argument("--turn-rescue-dist-m", type=float, default=defaults.turn_rescue_dist_m)
    parser.add_argument("--turn-rescue-cos-min", type=float, default=defaults.turn_rescue_cos_min)


def _add_npc_flags(parser: argparse.ArgumentParser) -> None:
    defaults = NpcConfig()
    parser.add_argument("--k-neighbors", type=int, default=defaults.k_neighbors)
    parser.add_argument("--npc-time-weight", type=float, default=defaults.time_weight)
    parser.add_argument("--npc-lat-weight", type=float, default=defaults.lat_weight)
    parser.add_argument("--npc-lon-weight", type=float, default=defaults.lon_weight)
    parser.add_argument("--npc-sog-weight", type=float, default=defaults.sog_weight)
    parser.add_argument("--npc-cog-weight", type=float, default=defaults.cog_weight)


def _assignment_csv(ds: TrackDataset, assignment: ClusterAssignment) -> str:
    lines = ["index,t,lat,lon,cluster,endpoint,abnormal"]
    for i in range(len(ds)):
        lines.append(
            f"{i},{int(ds.t[i])},{float(ds.lat[i])!r},{float(ds.lon[i])!r},"
            f"{int(assignment.cluster_of[i])},{int(i in assignment.endpoints)},"
            f"{int(i in assignment.abnormal)}")
    return "\n".join(lines) + "\n"


def _read_assignment(path: str) -> tuple[np.ndarray, ClusterAssignment]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "index,t,lat,lon,cluster,endpoint,abnormal":
        raise IngestError(f"{path} line 1: not an assignment file")
    t, cluster, endpoints, abnormal = [], [], set(), set()
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise IngestError(f"{path} line {line_no}: expected 7 fields")
        try:
            idx = int(parts[0])
            t.append(int(parts[1]))
            cluster.append(int(parts[4]))
            if int(parts[5]):
                endpoints.add(idx)
            if int(parts[6]):
                abnormal.add(idx)
        except ValueError as exc:
            raise IngestError(f"{path} line {line_no}: {exc}") from None
    if not cluster:
        raise IngestError(f"{path}: no data rows")
    assignment = ClusterAssignment(cluster_of=np.array(cluster, dtype=np.int64),
                                   endpoints=frozenset(endpoints),
                                   abnormal=frozenset(abnormal))
    return np.array(t, dtype=np.int64), assignment


def cmd_cluster(args: argparse.Namespace) -> int:
    ds = parse_ais_csv(args.input)
    if args.algo == "cbtr":
        cfg = _cbtr_config_from(args)
    else:
        cfg = _npc_config_from(args)
    if args.print_config:
        for key, value in sorted(_config_dict(cfg).items()):
            print(f"{key} = {value}")

    start = time.perf_counter()
    if args.algo == "cbtr":
        result = run_cbtr(ds, cfg, threads=args.threads)
        assignment = result.assignment
        targets = surviving_targets(result.links, result.report)
    else:
        targets = npc_grouping_targets(ds, cfg)
        assignment = npc_cluster(ds, cfg)
    runtime = time.perf_counter() - start

    report = None
    if ds.has_vids():
        report = build_report(assignment, targets, ds.vids, runtime)
        print(report.to_text())
    else:
        print(f"clustered {len(ds)} points into {assignment.n_clusters} clusters "
              f"in {runtime:.3f} s (no vessel ids, metrics omitted)")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_text(out / "assignment.csv", _assignment_csv(ds, assignment))
    _write_text(out / "tracks.geojson",
                json.dumps(export_geojson(ds, assignment), indent=2) + "\n")
    _write_text(out / "timeline.svg", export_label_timeline(ds, assignment))
    manifest = RunManifest(
        command=f"cluster --algo {args.algo}",
        config=_config_dict(cfg),
        input_sha256=_sha256_of(args.input),
        seed="-",
        outputs={"assignment": "assignment.csv", "geojson": "tracks.geojson",
                 "svg": "timeline.svg"},
        report=report,
    )
    _write_text(out / "manifest.txt", manifest.to_text())
    print(f"wrote {out / 'assignment.csv'}")
    return 0


def _epoch_seconds(ds: TrackDataset) -> int:
    if not ds.epoch:
        return 0
    try:
        return int(ds.epoch)
    except ValueError:
        from datetime import datetime
        return int(datetime.fromisoformat(ds.epoch).timestamp())


def _rebase(ds: TrackDataset, shift: int) -> TrackDataset:
    if shift == 0:
        return ds
    points = [AisPoint(int(ds.t[i]) + shift, float(ds.lat[i]), float(ds.lon[i]),
                       float(ds.sog[i]), float(ds.cog[i]),
                       ds.vids[i] if ds.vids else None)
              for i in range(len(ds))]
    return TrackDataset.from_points(points, epoch=ds.epoch)


def cmd_classify(args: argparse.Namespace) -> int:
    train = parse_ais_csv(args.train, has_labels=True)
    test = parse_ais_csv(args.test)
    # both files were rebased to their own start; restore a shared timeline
    train_epoch = _epoch_seconds(train)
    test_epoch = _epoch_seconds(test)
    base = min(train_epoch, test_epoch)
    train = _rebase(train, train_epoch - base)
    test = _rebase(test, test_epoch - base)

    labels = npc_classify(train, test)
    points = [AisPoint(int(test.t[i]), float(test.lat[i]), float(test.lon[i]),
                       float(test.sog[i]), float(test.cog[i]), labels[i])
              for i in range(len(test))]
    labeled = TrackDataset.from_points(points, epoch=test.epoch)
    write_ais_csv(labeled, args.out)
    if test.has_vids():
        hits = sum(a == b for a, b in zip(labels, test.vids))
        print(f"classified {len(labels)} points, accuracy {hits / len(labels):.4f}")
    else:
        print(f"classified {len(labels)} points")
    print(f"wrote {args.out}")
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.scenario == "s1":
        cfg = scenario_s1(args.seed) if args.seed is not None else scenario_s1()
    elif args.scenario == "s1-gaps":
        cfg = scenario_s1_gaps(args.seed) if args.seed is not None else scenario_s1_gaps()
    else:
        if args.n_vessels is None:
            raise ValueError("--n-vessels is required without --scenario")
        archetypes = None
        if args.archetypes:
            wanted = tuple(a.strip() for a in args.archetypes.split(","))
            archetypes = tuple(wanted[i % len(wanted)] for i in range(args.n_vessels))
        cfg = SynthConfig(
            n_vessels=args.n_vessels,
            duration_s=args.duration_s,
            archetypes=archetypes,
            sample_interval_s=(args.interval_min_s, args.interval_max_s),
            noise_sigma_m=args.noise_sigma_m,
            drift_radius_m=args.drift_radius_m,
            gaps_per_vessel=args.gaps_per_vessel,
            gap_duration_s=(args.gap_min_s, args.gap_max_s),
            seed=args.seed if args.seed is not None else 0,
        )
    ds = generate_fleet(cfg)
    write_ais_csv(ds, args.out)
    print(f"wrote {len(ds)} points for {cfg.n_vessels} vessels to {args.out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    start = time.perf_counter()
    t_assign, assignment = _read_assignment(args.assignment)
    truth = parse_ais_csv(args.truth, has_labels=True)
    if len(truth) != len(assignment):
        raise ValueError(f"assignment has {len(assignment)} points, "
                         f"truth has {len(truth)}")
    if not np.array_equal(t_assign, truth.t):
        raise ValueError("assignment and truth disagree on report times")
    targets = successor_targets(assignment.cluster_of)
    report = build_report(assignment, targets, truth.vids,
                          time.perf_counter() - start)
    if args.format == "csv":
        print(EvalReport.CSV_HEADER)
        print(report.to_csv_row())
    else:
        print(report.to_text())
    return 0


def cmd_downsample(args: argparse.Namespace) -> int:
    ds = parse_ais_csv(args.input)
    thinned = downsample(ds, args.pattern)
    write_ais_csv(thinned, args.out)
    print(f"kept {len(thinned)} of {len(ds)} points ({args.pattern})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trackstitch",
        description="Reconstruct per-vessel trajectories from anonymous position reports.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_cluster = sub.add_parser("cluster", help="group reports into per-vessel tracks")
    p_cluster.add_argument("input", help="CSV of reports, vid column optional")
    p_cluster.add_argument("--algo", choices=("cbtr", "npc"), default="cbtr")
    p_cluster.add_argument("--out", required=True, help="output directory")
    p_cluster.add_argument("--threads", type=int, default=1)
    p_cluster.add_argument("--print-config", action="store_true",
                           help="dump the effective configuration before running")
    _add_cbtr_flags(p_cluster)
    _add_npc_flags(p_cluster)
    p_cluster.set_defaults(func=cmd_cluster)

    p_classify = sub.add_parser("classify", help="label test reports from labeled history")
    p_classify.add_argument("train", help="labeled CSV")
    p_classify.add_argument("test", help="CSV to label")
    p_classify.add_argument("--out", required=True, help="labeled output CSV")
    p_classify.set_defaults(func=cmd_classify)

    p_synth = sub.add_parser("synth", help="generate a labeled synthetic fleet")
    p_synth.add_argument("--scenario", choices=("s1", "s1-gaps"),
                         help="use a canned benchmark fleet")
    p_synth.add_argument("--n-vessels", type=int)
    p_synth.add_argument("--duration-s", type=int, default=SynthConfig(1).duration_s)
    p_synth.add_argument("--seed", type=int)
    p_synth.add_argument("--noise-sigma-m", type=float, default=0.0)
    p_synth.add_argument("--drift-radius-m", type=float, default=SynthConfig(1).drift_radius_m)
    p_synth.add_argument("--interval-min-s", type=int, default=2)
    p_synth.add_argument("--interval-max-s", type=int, default=180)
    p_synth.add_argument("--gaps-per-vessel", type=int, default=0)
    p_synth.add_argument("--gap-min-s", type=int, default=1200)
    p_synth.add_argument("--gap-max-s", type=int, default=2400)
    p_synth.add_argument("--archetypes",
                         help=f"comma-separated, cycled over vessels; one of {ARCHETYPES}")
    p_synth.add_argument("--out", required=True)
    p_synth.set_defaults(func=cmd_synth)

    p_eval = sub.add_parser("eval", help="score an assignment against labeled truth")
    p_eval.add_argument("assignment", help="assignment.csv from the cluster command")
    p_eval.add_argument("truth", help="labeled CSV the clustering ran on")
    p_eval.add_argument("--format", choices=("text", "csv"), default="text")
    p_eval.set_defaults(func=cmd_eval)

    p_down = sub.add_parser("downsample", help="thin a dataset")
    p_down.add_argument("input")
    p_down.add_argument("--pattern", choices=PATTERNS, required=True)
    p_down.add_argument("--out", required=True)
    p_down.set_defaults(func=cmd_downsample)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, UnclassifiablePointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
