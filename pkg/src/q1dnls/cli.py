"""Command-line interface: predict, simulate, compare, scan, limit-check.

Every command writes a machine-readable summary JSON plus a manifest
(config hash, package/library versions, wall-clock timings) into the output
directory, and exits nonzero on validation or numerical failure. Outputs
are deterministic for a fixed config and thread count.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, load_config
from .core import SimulationConfig
from .diagnostics import (
    breather_comparator,
    detect_fission_fusion,
    level_set_topology,
    mi_domain_scan,
    ring_radius,
    track_peaks,
    uniform_distance,
)
from .mae import predict_events
from .snapshots import write_snapshot
from .solver import evolve, set_fft_workers

log = logging.getLogger(__name__)


def _float_repr(x) -> str:
    return repr(float(x))


def _write_json(path: Path, doc) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True))


def _write_csv(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_float_repr(v) if isinstance(v, float) else v for v in row])


def _manifest(cfg: ExperimentConfig, command: str, outdir: Path, t0: float, outputs, meta):
    import scipy

    _write_json(
        outdir / "manifest.json",
        {
            "command": command,
            "config_name": cfg.name,
            "config_hash": cfg.config_hash(),
            "versions": {
                "q1dnls": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": sys.version.split()[0],
            },
            "threads": meta.get("threads", 1),
            "seed_meta": meta.get("seed_meta", ""),
            "wall_seconds": time.perf_counter() - t0,
            "outputs": sorted(str(p.name) for p in outputs),
        },
    )


def _max_abs(field) -> float:
    v = field.values
    return float(np.sqrt(np.max(v.real * v.real + v.imag * v.imag)))


def cmd_predict(cfg: ExperimentConfig, outdir: Path, meta) -> int:
    t0 = time.perf_counter()
    if cfg.data is None:
        raise ConfigError("initial", "predict needs a planar or radial datum")
    pred = predict_events(cfg.data)
    doc = pred.to_dict()
    doc["note"] = (
        "t0 is the matched-asymptotics formula value; the measured crest time "
        "of a simulation (compare command, crest_time field) may exceed it by "
        "higher-order-in-epsilon corrections"
    )
    out = outdir / "prediction.json"
    _write_json(out, doc)
    _manifest(cfg, "predict", outdir, t0, [out], meta)
    print(f"prediction written: t0={pred.t0:.6g} x10={pred.x10:.6g} "
          f"events={[(e.kind, round(e.time, 4)) for e in pred.events]}")
    return 0


def _sim_config(cfg: ExperimentConfig, extra_times=()):
    times = sorted(set(cfg.output_times) | set(extra_times))
    t_end = cfg.t_end if cfg.t_end is not None else (times[-1] if times else None)
    if t_end is None:
        raise ConfigError("solver.t_end", "missing (no output times to infer it from)")
    return SimulationConfig(
        cfg.model,
        cfg.grid,
        cfg.dt,
        t_end,
        tuple(times),
        conservation_cadence=cfg.conservation_cadence,
        dealias=cfg.dealias,
    )


def cmd_simulate(cfg: ExperimentConfig, outdir: Path, meta) -> int:
    t0 = time.perf_counter()
    field = cfg.build_initial_field()
    sim = _sim_config(cfg)
    outputs = []
    snap_rows = []

    def sink(f):
        name = f"snapshot_{len(outputs):04d}_t{f.time:.6f}.bin"
        p = write_snapshot(f, outdir / name, cfg.model)
        outputs.append(p)
        snap_rows.append((f.time, _max_abs(f)))

    state = evolve(field, cfg.model, sim, sink=sink)
    series = outdir / "conserved.csv"
    _write_csv(series, ["time", "mass", "hamiltonian"], state.conserved)
    outputs.append(series)
    snaps = outdir / "snapshots.csv"
    _write_csv(snaps, ["time", "max_abs_u"], snap_rows)
    outputs.append(snaps)
    masses = [c[1] for c in state.conserved]
    summary = {
        "final_time": state.field.time,
        "steps": state.steps,
        "aborted": state.aborted,
        "abort_time": state.abort_time,
        "blowup_flagged": state.blowup_flagged,
        "max_abs_u": max((r[1] for r in snap_rows), default=_max_abs(state.field)),
        "mass_rel_drift": float(max(abs(m - masses[0]) for m in masses) / abs(masses[0])),
    }
    out = outdir / "summary.json"
    _write_json(out, summary)
    outputs.append(out)
    _manifest(cfg, "simulate", outdir, t0, outputs, meta)
    print(f"simulate: t={state.field.time:.4g} steps={state.steps} "
          f"max|u|={summary['max_abs_u']:.4g} aborted={state.aborted}")
    return 2 if state.aborted else 0


def cmd_compare(cfg: ExperimentConfig, outdir: Path, meta) -> int:
    t0 = time.perf_counter()
    if cfg.data is None:
        raise ConfigError("initial", "compare needs a planar or radial datum")
    if not cfg.compare_times:
        raise ConfigError("diagnostics.compare", "compare needs comparison times")
    pred = predict_events(cfg.data)
    evaluator = breather_comparator(pred.profiles, cfg.data.delta)
    field = cfg.build_initial_field()
    sim = _sim_config(cfg, extra_times=cfg.compare_times)
    compare_set = {round(t, 12) for t in cfg.compare_times}
    snap_set = {round(t, 12) for t in cfg.output_times}
    outputs = []
    rows = []
    records = []
    topo_rows = []
    snap_rows = []

    def sink(f):
        key = round(f.time, 12)
        if key in compare_set:
            dist = uniform_distance(f, evaluator)
            rec = track_peaks(f, cfg.threshold)
            records.append(rec)
            rows.append((f.time, dist, rec.n,
                         float(rec.heights.max()) if rec.n else 0.0))
        if key in snap_set:
            name = f"snapshot_{len(snap_rows):04d}_t{f.time:.6f}.bin"
            outputs.append(write_snapshot(f, outdir / name, cfg.model))
            snap_rows.append((f.time, _max_abs(f)))
            if cfg.model.dim == 3:
                topo = level_set_topology(f, cfg.isosurface_level)
                topo["time"] = f.time
                topo["ring_radius"] = ring_radius(f, cfg.threshold)
                topo_rows.append(topo)

    state = evolve(field, cfg.model, sim, sink=sink)
    events = detect_fission_fusion(records)
    dist_csv = outdir / "distance.csv"
    _write_csv(dist_csv, ["time", "distance", "n_peaks", "max_height"], rows)
    outputs.append(dist_csv)
    snaps_csv = outdir / "snapshots.csv"
    _write_csv(snaps_csv, ["time", "max_abs_u"], snap_rows)
    outputs.append(snaps_csv)
    crest = [e for e in events if e.kind == "first-appearance-max"]
    masses = [c[1] for c in state.conserved]
    hams = [c[2] for c in state.conserved]
    summary = {
        "aborted": state.aborted,
        "max_distance": max((r[1] for r in rows), default=None),
        "max_abs_u": max((r[3] for r in rows), default=None),
        "formula_t0": pred.t0,
        "crest_time": crest[0].time if crest else None,
        "events": [e.to_dict() for e in events],
        "mass_rel_drift": float(max(abs(m - masses[0]) for m in masses) / abs(masses[0])),
        "hamiltonian_rel_drift": float(
            max(abs(h - hams[0]) for h in hams) / max(abs(hams[0]), 1e-300)
        ),
        "isosurface": topo_rows,
    }
    out = outdir / "summary.json"
    _write_json(out, summary)
    outputs.append(out)
    pred_out = outdir / "prediction.json"
    _write_json(pred_out, pred.to_dict())
    outputs.append(pred_out)
    _manifest(cfg, "compare", outdir, t0, outputs, meta)
    print(f"compare: max distance={summary['max_distance']:.4g} "
          f"crest={summary['crest_time']} formula t0={pred.t0:.4g} "
          f"events={[(e.kind, round(e.time, 3)) for e in events]}")
    return 2 if state.aborted else 0


def cmd_scan(cfg: ExperimentConfig, outdir: Path, meta) -> int:
    t0 = time.perf_counter()
    if cfg.scan is None:
        raise ConfigError("scan", "scan command needs a scan section")
    pts = [(2 * np.pi / Lx, 2 * np.pi / Ly) for Lx, Ly in cfg.scan["points"]]
    results = mi_domain_scan(
        cfg.model,
        pts,
        cfg.scan["epsilon"],
        cfg.scan["t_max"],
        dt=cfg.scan["dt"],
        counts=cfg.scan["counts"],
        threshold=cfg.scan["threshold"],
        cadence=cfg.scan["cadence"],
    )
    for res, (Lx, Ly) in zip(results, cfg.scan["points"]):
        res["Lx"], res["Ly"] = Lx, Ly
    rows = [
        (r["kx"], r["ky"], r["s"], r["classification"], r.get("t_crest", ""))
        for r in results
    ]
    csv_out = outdir / "scan.csv"
    _write_csv(csv_out, ["kx", "ky", "kx2_minus_ky2", "classification", "t_crest"], rows)
    report = outdir / "scan.json"
    _write_json(report, {"points": results})
    _manifest(cfg, "scan", outdir, t0, [csv_out, report], meta)
    failures = [r for r in results if r["classification"] == "error"]
    print("scan:", {f"({r['kx']:.3g},{r['ky']:.3g})": r["classification"] for r in results})
    return 2 if failures else 0


def cmd_limit_check(cfg: ExperimentConfig, outdir: Path, meta) -> int:
    from .analytic import peregrine_limit_check

    t0 = time.perf_counter()
    lc = cfg.limit_check or {
        "phi_offsets": [0.3, 0.1, 0.03, 0.01],
        "x_half": 1.0,
        "t_half": 1.0,
        "n": 201,
    }
    rows = []
    for off in lc["phi_offsets"]:
        phi = np.pi / 2 - off
        sup = peregrine_limit_check(phi, lc["x_half"], lc["t_half"], lc["n"])
        rows.append((float(phi), float(off), sup))
    sups = [r[2] for r in rows]
    ordered = sorted(rows, key=lambda r: -r[1])
    monotone = all(a[2] >= b[2] for a, b in zip(ordered[:-1], ordered[1:]))
    csv_out = outdir / "limit.csv"
    _write_csv(csv_out, ["phi", "offset_from_pi_over_2", "sup_distance"], rows)
    report = outdir / "limit.json"
    _write_json(report, {"rows": [list(r) for r in rows], "monotone_in_offset": monotone})
    _manifest(cfg, "limit-check", outdir, t0, [csv_out, report], meta)
    print(f"limit-check: sup distances {['%.3g' % s for s in sups]} monotone={monotone}")
    return 0 if monotone else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="q1dnls",
        description="quasi-1D anomalous-wave toolkit for multidimensional NLS",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("predict", cmd_predict),
        ("simulate", cmd_simulate),
        ("compare", cmd_compare),
        ("scan", cmd_scan),
        ("limit-check", cmd_limit_check),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--dt", type=float, default=None, help="time step override")
        p.add_argument("--threads", type=int, default=None,
                       help="FFT worker threads (default: Q1DNLS_THREADS or 1)")
        p.add_argument("--seed-meta", default="", help="free-form string recorded in the manifest")
        p.set_defaults(fn=fn)
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    threads = args.threads
    if threads is None:
        threads = int(os.environ.get("Q1DNLS_THREADS", "1"))
    set_fft_workers(threads)
    try:
        import numba

        numba.set_num_threads(max(1, threads))
    except ImportError:
        pass

    try:
        cfg = load_config(args.config)
        if args.dt is not None:
            cfg.dt = args.dt
        outdir = Path(args.out) if args.out else Path(cfg.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        return args.fn(cfg, outdir, {"threads": threads, "seed_meta": args.seed_meta})
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        log.exception("command failed: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
