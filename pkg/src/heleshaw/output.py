"""Deterministic run outputs: timeseries.csv, snapshots/curve_NNNN.csv, manifest.json."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import csv_header
from .errors import OutputError
from .spectral import grid


def git_blob_hash(data: bytes) -> str:
    """SHA-1 of ``blob <len>\\0<data>``, as git computes object ids."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def _fmt(x) -> str:
    # repr round-trips doubles exactly
    return repr(float(x))


def write_timeseries(path: Path, records, k_list) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_header(k_list))
        for rec in records:
            w.writerow([_fmt(v) for v in rec.row(k_list)])


def write_snapshot(path: Path, h, rho: float) -> None:
    theta = grid(h.n)
    r = rho + h.values()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["theta", "r"])
        for a, b in zip(theta, r):
            w.writerow([_fmt(a), _fmt(b)])


def _clean(obj):
    """Replace non-finite floats so the manifest stays strict JSON."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def manifest(outcome, config_text: str) -> dict:
    cfg = outcome.config
    inputs = {"config": git_blob_hash(config_text.encode())}
    if cfg.samples_path is not None:
        inputs["samples"] = git_blob_hash(Path(cfg.samples_path).read_bytes())
    report = outcome.report.to_dict()
    return _clean(
        {
            "version": __version__,
            "mode": outcome.mode,
            "config": cfg.to_dict(),
            "regime_report": report,
            "nu": report["nu"],
            "K": report["K"],
            "beta": cfg.beta,
            "input_hashes": inputs,
            "status": outcome.status,
            "exit_status": outcome.exit_status,
            "error": str(outcome.error) if outcome.error is not None else None,
            "records": len(outcome.records),
            "total_norm_components": outcome.total_norm(),
        }
    )


def emit_outputs(outcome, out_dir, config_text: str) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if outcome.records:
            write_timeseries(out / "timeseries.csv", outcome.records, outcome.config.k_list)
        snap_dir = out / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for idx, state, rho in outcome.snapshots:
            write_snapshot(snap_dir / f"curve_{idx:04d}.csv", state.h, rho)
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest(outcome, config_text), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OutputError(f"cannot write outputs to {out}: {exc}") from exc
    return out


def read_timeseries(path) -> dict[str, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) for v in row] for row in body], dtype=float).reshape(len(body), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
