"""
Run configuration: JSON text in, validated ``RunConfig`` out.

Minimal example::

    {"N": 64, "method": "if_rk2", "T": 1,
     "schedule": {"kind": "zero"},
     "initial": [[2, 1e-4, 0]]}

Initial modes are (k, amplitude, phase) triples meaning
``amplitude * cos(k theta - phase)``. ``initial`` may also be an object with
``modes`` or ``samples`` (path to a whitespace-separated file of N values)
plus ``normalize`` (``area`` [default], ``area+center`` or ``none``).
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .evolution import METHODS, IntegratorConfig
from .initial import NORMALIZE_MODES
from .schedule import DEFAULT_BETA, InjectionSchedule

OUT_DIR_ENV = "HELESHAW_OUT"
MIN_N, MAX_N = 8, 1024
STAR_HEADROOM = 0.5


@dataclass
class RunConfig:
    n: int = 64
    method: str = "if_rk2"
    dt: float | None = None
    adaptive: bool = False
    c_stab: float = 0.5
    t_final: float = 1.0
    records: int = 200
    schedule: dict = field(default_factory=lambda: {"kind": "zero"})
    modes: list = field(default_factory=list)
    samples_path: str | None = None
    normalize: str = "area"
    beta: float = DEFAULT_BETA
    k_list: list = field(default_factory=lambda: [1, 2, 3])
    out_dir: str | None = None
    solver_tol: float | None = None
    adaptive_tol: float = 1e-7
    snapshots: int = 5
    classify_horizon: float | None = None

    def injection(self) -> InjectionSchedule:
        return InjectionSchedule.from_spec(self.schedule)

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(
            method=self.method,
            dt=self.dt,
            adaptive=self.adaptive,
            c_stab=self.c_stab,
            t_final=self.t_final,
            n=self.n,
            tol=self.adaptive_tol,
            solver_tol=self.solver_tol,
        )

    def output_times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.records + 1)[1:]

    def horizon(self) -> float:
        return self.classify_horizon if self.classify_horizon is not None else max(self.t_final, 1.0)

    def load_samples(self) -> np.ndarray | None:
        if self.samples_path is None:
            return None
        return np.loadtxt(self.samples_path, dtype=float).ravel()

    def to_dict(self) -> dict:
        return asdict(self)


def _number(raw, key, errors, positive=False, integer=False):
    v = raw.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        errors.append(f"{key} must be a number")
        return None
    if integer and int(v) != v:
        errors.append(f"{key} must be an integer")
        return None
    if not np.isfinite(v) or (positive and v <= 0):
        errors.append(f"{key} must be {'positive and ' if positive else ''}finite")
        return None
    return int(v) if integer else float(v)


def parse_config(text: str, base_dir: str | os.PathLike | None = None) -> RunConfig:
    """Validate JSON config text; every violation is reported, not just the first."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    errors: list[str] = []
    cfg = RunConfig()
    aliases = {"resolution": "N", "T_final": "T", "out_dir": "out"}
    for old, new in aliases.items():
        if old in raw and new not in raw:
            raw[new] = raw.pop(old)

    if "N" in raw:
        n = _number(raw, "N", errors, positive=True, integer=True)
        if n is not None:
            if n % 2:
                errors.append("resolution must be even")
            if not MIN_N <= n <= MAX_N:
                errors.append(f"resolution must lie in [{MIN_N}, {MAX_N}]")
            cfg.n = n

    method = raw.get("method", cfg.method)
    if method not in METHODS:
        errors.append(f"method must be one of {', '.join(METHODS)}")
    cfg.method = method

    if "dt" in raw:
        if raw["dt"] == "adaptive":
            cfg.adaptive = True
            if cfg.method == "rk4":
                errors.append("adaptive stepping is only available for if_rk2")
        elif raw["dt"] is not None:
            cfg.dt = _number(raw, "dt", errors, positive=True)
    elif cfg.method == "if_rk2":
        cfg.adaptive = True
    if "c_stab" in raw:
        c = _number(raw, "c_stab", errors, positive=True)
        if c is not None and c > 1:
            errors.append("c_stab must lie in (0, 1]")
        cfg.c_stab = c if c is not None else cfg.c_stab

    if "T" in raw:
        t = _number(raw, "T", errors, positive=True)
        cfg.t_final = t if t is not None else cfg.t_final
    if "output_interval" in raw:
        dt_out = _number(raw, "output_interval", errors, positive=True)
        if dt_out is not None:
            cfg.records = max(1, int(round(cfg.t_final / dt_out)))
    elif "records" in raw:
        r = _number(raw, "records", errors, positive=True, integer=True)
        cfg.records = r if r is not None else cfg.records

    sched = raw.get("schedule", {"kind": "zero"})
    try:
        if not isinstance(sched, dict):
            raise ValueError("schedule must be an object")
        cfg.schedule = InjectionSchedule.from_spec(sched).to_spec()
    except (KeyError, ValueError, TypeError) as exc:
        errors.append(f"invalid schedule: {exc}")

    if "beta" in raw:
        b = _number(raw, "beta", errors, positive=True)
        if b is not None and not b < 7 / 8:
            errors.append("beta must lie in (0, 7/8)")
        cfg.beta = b if b is not None else cfg.beta

    _parse_initial(raw.get("initial", []), cfg, errors, base_dir)

    k_list = raw.get("k_list", cfg.k_list)
    if not isinstance(k_list, list) or not all(isinstance(k, int) and not isinstance(k, bool) and k >= 0 for k in k_list):
        errors.append("k_list must be a list of nonnegative integers")
    else:
        bad = [k for k in k_list if k > cfg.n // 2]
        if bad:
            errors.append(f"k_list entries {bad} exceed N/2")
        cfg.k_list = k_list

    out = raw.get("out")
    if out is not None:
        cfg.out_dir = str(out)
    tols = raw.get("tolerances", {})
    if not isinstance(tols, dict):
        errors.append("tolerances must be an object")
    else:
        if "solver" in tols:
            cfg.solver_tol = _number(tols, "solver", errors, positive=True)
        if "adaptive" in tols:
            cfg.adaptive_tol = _number(tols, "adaptive", errors, positive=True) or cfg.adaptive_tol
    if "snapshots" in raw:
        s = raw["snapshots"]
        if isinstance(s, bool) or not isinstance(s, int) or s < 0:
            errors.append("snapshots must be a nonnegative integer")
        else:
            cfg.snapshots = s
    if "classify_horizon" in raw:
        cfg.classify_horizon = _number(raw, "classify_horizon", errors, positive=True)

    if errors:
        raise ConfigError(errors)
    return cfg


def _parse_initial(spec, cfg: RunConfig, errors, base_dir):
    if isinstance(spec, dict):
        cfg.normalize = spec.get("normalize", cfg.normalize)
        if cfg.normalize not in NORMALIZE_MODES:
            errors.append(f"normalize must be one of {', '.join(NORMALIZE_MODES)}")
        if "samples" in spec:
            path = Path(spec["samples"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            cfg.samples_path = str(path)
            try:
                vals = cfg.load_samples()
            except (OSError, ValueError) as exc:
                errors.append(f"cannot read samples file: {exc}")
                return
            if vals.size < 8 or vals.size % 2:
                errors.append("samples file must hold an even number (>= 8) of values")
            elif not np.all(np.isfinite(vals)):
                errors.append("samples must be finite")
            elif np.max(np.abs(vals)) >= STAR_HEADROOM:
                errors.append("star-shape headroom violated: max |h| must be < 0.5 rho(0)")
            return
        spec = spec.get("modes", [])
    if not isinstance(spec, list):
        errors.append("initial must be a list of (k, amplitude, phase) triples")
        return
    modes = []
    for i, m in enumerate(spec):
        if not isinstance(m, (list, tuple)) or len(m) not in (2, 3):
            errors.append(f"initial[{i}] must be (k, amplitude[, phase])")
            continue
        k, amp = m[0], m[1]
        phase = m[2] if len(m) == 3 else 0.0
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            errors.append(f"initial[{i}]: k must be a nonnegative integer")
            continue
        if k > cfg.n // 2:
            errors.append(f"initial[{i}]: mode {k} exceeds N/2")
        if not all(isinstance(v, (int, float)) and np.isfinite(v) for v in (amp, phase)):
            errors.append(f"initial[{i}]: amplitude and phase must be finite numbers")
            continue
        modes.append([k, float(amp), float(phase)])
    total = sum(abs(m[1]) for m in modes)
    if total >= STAR_HEADROOM:
        errors.append(f"star-shape headroom violated: sum |amplitude| = {total:g} must be < 0.5 rho(0)")
    cfg.modes = modes


def load_config(path) -> tuple[RunConfig, str]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, base_dir=path.parent), text
