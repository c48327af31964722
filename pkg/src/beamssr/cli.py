"""Command-line front end.

    beamssr ingest   RAW.csv... --out DIR [--schema MAP.json] [--band-label L]
    beamssr analyze  TRACE.csv  --out DIR [--band-label L] [--config CFG.json]
    beamssr fit      TRACE.csv  --out DIR [--config CFG.json] [--strict-beams]
    beamssr simulate --config SPEC.json --trajectory ROUTE --out DIR --seed N
    beamssr report   ANALYSIS.json... --out DIR [--config CFG.json]

Exit codes: 0 success, 1 usage, 2 ingest/trace errors, 3 fit errors,
4 simulate errors, 5 report errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import analytics
from .errors import BeamSsrError, FitError, NoTransitions, SynthesisError, TraceError
from .jsonio import read_json, write_atomic, write_json
from .ssr import estimate_transition_model, extract_ssr_segments, fit_candidates
from .synth import SynthesisSpec, Trajectory, simulate_beam_trace
from .trace import (DEFAULT_CLUSTER_RADIUS_M, collapse_static_clusters, parse_trace, path_legs,
                    read_trace, resolve_band, serialize_trace)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INGEST = 2
EXIT_FIT = 3
EXIT_SIMULATE = 4
EXIT_REPORT = 5

DEFAULT_QUANTILES = (0.5, 0.9)
DEFAULT_THROUGHPUT_THRESHOLD_MBPS = 1000.0

# measured-system findings that depend on the deployed hardware; carried as context only
REFERENCE_FINDINGS = {
    "throughput_delta_gbps_at_cdf_0.5": 0.25,
    "throughput_delta_gbps_at_cdf_0.9": 0.3,
    "fraction_above_1gbps": {"cband": 0.2, "mmwave": 0.05},
    "loss_fraction": {"cband": 0.03, "mmwave": 0.23},
    "max_link_distance_m": {"cband": 1730.0, "mmwave": 640.0},
    "ssr_median_m": 10.0,
    "ssr_p90_upper_m": 125.0,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _err(msg):
    print(msg, file=sys.stderr)


def _load_config(path):
    if path is None:
        return {}
    return read_json(path)


def _route_length(trace) -> float:
    return float(np.sum(path_legs(trace.lat, trace.lon)))


# ingest

def cmd_ingest(args) -> int:
    schema = _load_config(args.schema) if args.schema else None
    out = Path(args.out)
    summaries = []
    failed = False
    for path in sorted(args.inputs):
        try:
            trace = parse_trace(Path(path).read_bytes(), schema=schema,
                                band_label=args.band_label or "", source=path)
        except (TraceError, OSError) as exc:
            _err(f"{path}: {exc}")
            failed = True
            continue
        target = out / (Path(path).stem + ".csv")
        write_atomic(target, serialize_trace(trace))
        summaries.append({
            "input": str(path),
            "output": str(target),
            "band_label": trace.band_label,
            "n_samples": len(trace),
            "n_lost": trace.n_lost,
            "loss_fraction": trace.loss_fraction,
            "route_length_m": _route_length(trace),
        })
    if failed:
        return EXIT_INGEST
    write_json(out / "ingest_summary.json", {"files": summaries})
    return EXIT_OK


# analyze

def _read_collapsed(path, band_label, radius):
    trace = read_trace(path, band_label=band_label or "")
    return collapse_static_clusters(trace, radius)


def cmd_analyze(args) -> int:
    cfg = _load_config(args.config)
    radius = float(cfg.get("collapse_radius", DEFAULT_CLUSTER_RADIUS_M))
    label = args.band_label or cfg.get("band_label") or Path(args.trace).stem
    try:
        trace = _read_collapsed(args.trace, label, radius)
    except (TraceError, OSError) as exc:
        _err(f"{args.trace}: {exc}")
        return EXIT_INGEST
    summary = dict(analytics.summarize_trace(trace))
    summary["source"] = str(args.trace)
    write_json(Path(args.out) / f"analysis_{label}.json", summary)
    return EXIT_OK


# fit

def cmd_fit(args) -> int:
    cfg = _load_config(args.config)
    radius = float(cfg.get("collapse_radius", DEFAULT_CLUSTER_RADIUS_M))
    try:
        band = resolve_band(cfg.get("band", "mmwave_table2"))
    except BeamSsrError as exc:
        _err(f"config: {exc}")
        return EXIT_FIT
    beam_map = cfg.get("beam_map")
    try:
        trace = _read_collapsed(args.trace, args.band_label, radius)
    except (TraceError, OSError) as exc:
        _err(f"{args.trace}: {exc}")
        return EXIT_INGEST
    try:
        ssr = extract_ssr_segments(trace, strict_beams=args.strict_beams)
        report = fit_candidates(ssr)
    except FitError as exc:
        _err(f"fit failed: {type(exc).__name__}: {exc}")
        return EXIT_FIT

    try:
        tm = estimate_transition_model(trace, band.beam_angles, beam_map=beam_map,
                                       strict_beams=args.strict_beams)
        transitions = tm.to_dict()
    except NoTransitions as exc:
        transitions = {"error": str(exc), "counts": {str(k): v for k, v in exc.counts.items()}}
    except FitError as exc:
        _err(f"transition model failed: {exc}")
        return EXIT_FIT

    winner = report.candidates[report.winner]
    gamma = report.candidates["gamma"]
    doc = {
        "source": str(args.trace),
        "alpha": gamma.params.get("shape"),
        "theta": gamma.params.get("scale"),
        "winner": report.winner,
        "ks_d": winner.ks_d,
        "ks_critical_05": winner.critical,
        "n": winner.n,
        "zero_length_runs": ssr.zero_length_runs,
        "total_runs": ssr.total_runs,
        "strict_beams": bool(args.strict_beams),
        "candidates": report.to_dict()["candidates"],
        "transitions": transitions,
    }
    out = Path(args.out)
    write_json(out / "fit_report.json", doc)
    write_atomic(out / "ssr_distances.csv", ssr.to_csv())
    return EXIT_OK


# simulate

def _read_trajectory(path) -> Trajectory:
    p = Path(path)
    text = p.read_text("utf-8")
    if p.suffix.lower() == ".json":
        return Trajectory.from_dict(json.loads(text))
    rows = list(csv.DictReader(io.StringIO(text)))
    return Trajectory(tuple((float(r["lat"]), float(r["lon"])) for r in rows))


def cmd_simulate(args) -> int:
    if args.seed is None:
        _err("simulate requires --seed")
        return EXIT_SIMULATE
    try:
        spec = SynthesisSpec.from_dict(_load_config(args.config), seed=args.seed)
        traj = _read_trajectory(args.trajectory)
        if args.step is not None:
            traj = Trajectory(traj.waypoints, args.step, traj.speed)
        trace = simulate_beam_trace(traj, spec, reflect=not args.no_reflect)
    except (BeamSsrError, OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _err(f"simulate failed: {type(exc).__name__}: {exc}")
        return EXIT_SIMULATE
    out = Path(args.out)
    write_atomic(out / "synthetic_trace.csv", serialize_trace(trace))
    summary = {
        "seed": spec.seed,
        "n_samples": len(trace),
        "segments": trace.meta["segments"],
        "mean_segment_length_m": trace.meta["mean_segment_length"],
        "spec": spec.to_dict(),
    }
    write_json(out / "simulate_summary.json", summary)
    print(f"segments drawn: {summary['segments']}")
    print(f"mean segment length: {summary['mean_segment_length_m']:.3f} m")
    return EXIT_OK


# report

def _band_section(doc, threshold, cap):
    thr = doc.get("throughput_mbps", [])
    snr = doc.get("snr_db", [])
    n_lost = int(doc.get("n_lost", 0))
    section = {
        "label": doc["band_label"],
        "n_samples": int(doc.get("n_samples", len(thr) + n_lost)),
        "n_lost": n_lost,
        "loss_fraction": float(doc.get("loss_fraction", 0.0)),
    }
    counts = {int(k): int(v) for k, v in doc.get("rank_counts", {}).items()}
    if counts:
        table = analytics.rank_table_from_ranks(r for r, c in counts.items() for _ in range(c))
        section["rank_table"] = table.to_dict()
        section["prob_rank_above_2"] = analytics.prob_rank_above(table, 2)
    if thr or n_lost:
        section["throughput_fraction_above_threshold"] = analytics.fraction_above_threshold(
            thr, n_lost, threshold)
    if snr:
        section["snr_fraction_at_cap"] = float(np.mean(np.asarray(snr) >= cap))
    return section


def cmd_report(args) -> int:
    cfg = _load_config(args.config)
    threshold = float(cfg.get("throughput_threshold_mbps", DEFAULT_THROUGHPUT_THRESHOLD_MBPS))
    cap = float(cfg.get("snr_cap_db", analytics.SNR_CAP_DB))
    quantiles = tuple(cfg.get("quantiles", DEFAULT_QUANTILES))

    docs = []
    for path in sorted(args.inputs):
        try:
            docs.append(read_json(path))
        except (OSError, json.JSONDecodeError) as exc:
            _err(f"{path}: {exc}")
            return EXIT_REPORT
    labels = [d.get("band_label") for d in docs]
    if any(not isinstance(lbl, str) or not lbl for lbl in labels):
        _err("every analysis output needs a non-empty band_label")
        return EXIT_REPORT
    if len(set(labels)) != len(labels):
        _err(f"band labels are not unique: {labels}")
        return EXIT_REPORT
    docs.sort(key=lambda d: d["band_label"])

    out = Path(args.out)
    curves = {}
    bands = []
    try:
        for d in docs:
            label = d["band_label"]
            bands.append(_band_section(d, threshold, cap))
            n_lost = int(d.get("n_lost", 0))
            if d.get("throughput_mbps") or n_lost:
                curves[label] = analytics.empirical_cdf_with_loss(d.get("throughput_mbps", []), n_lost)
                write_atomic(out / f"ecdf_throughput_{label}.csv", curves[label].to_csv())
            if d.get("snr_db") or n_lost:
                snr_curve = analytics.empirical_cdf_with_loss(
                    analytics.cap_values(d.get("snr_db", []), cap), n_lost)
                write_atomic(out / f"ecdf_snr_{label}.csv", snr_curve.to_csv())
    except (BeamSsrError, KeyError, ValueError, TypeError) as exc:
        _err(f"report failed: {exc}")
        return EXIT_REPORT

    doc = {
        "bands": bands,
        "throughput_threshold_mbps": threshold,
        "snr_cap_db": cap,
    }
    if len(curves) > 1:
        deltas = []
        names = sorted(curves)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                entry = {"a": a, "b": b, "throughput_delta_mbps": {}}
                for q in quantiles:
                    try:
                        entry["throughput_delta_mbps"][f"{q:g}"] = analytics.percentile_delta(
                            curves[a], curves[b], q)
                    except BeamSsrError as exc:
                        entry["throughput_delta_mbps"][f"{q:g}"] = {"error": str(exc)}
                deltas.append(entry)
        doc["deltas"] = deltas
    doc["reference_findings"] = REFERENCE_FINDINGS
    write_json(out / "report.json", doc)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beamssr", description=__doc__.split("\n")[0] or None,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="canonicalize raw drive-test CSVs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--schema", help="JSON map of canonical column -> source column")
    p.add_argument("--band-label")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="loss-aware throughput/SNR/rank statistics of one trace")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    p.add_argument("--band-label")
    p.add_argument("--config")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="extract SSR distances, fit candidates, estimate transitions")
    p.add_argument("trace")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--band-label")
    p.add_argument("--strict-beams", action="store_true",
                   help="samples without a beam ID end the current run")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("simulate", help="synthesize a beam trace along a trajectory")
    p.add_argument("--config", required=True, help="synthesis spec JSON")
    p.add_argument("--trajectory", required=True, help="waypoints (.json or lat,lon .csv)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--step", type=float, help="override the trajectory sample spacing (m)")
    p.add_argument("--no-reflect", action="store_true",
                   help="fail on infeasible adjacency draws instead of edge-aware selection")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="merge analysis outputs into a comparative report")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
