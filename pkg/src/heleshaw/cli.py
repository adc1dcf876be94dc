"""Command-line interface.

Exit statuses: 0 success, 2 config error, 3 solver failure,
4 geometry failure or blow-up, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

import numpy as np

from .config import OUT_DIR_ENV, load_config
from .diagnostics import decay_clock_from_rho, fit_decay
from .errors import ConfigError, HeleShawError
from .output import emit_outputs, read_timeseries


def _out_dir(args, cfg):
    out = args.out or os.environ.get(OUT_DIR_ENV) or cfg.out_dir
    if out is None:
        raise ConfigError("no output directory (use --out, the config 'out' key or $HELESHAW_OUT)")
    return out


def _run(args, mode):
    from . import runner

    cfg, text = load_config(args.config)
    out = _out_dir(args, cfg)
    outcome = runner.simulate(cfg) if mode == "simulate" else runner.linear(cfg)
    emit_outputs(outcome, out, text)
    last = outcome.records[-1] if outcome.records else None
    msg = f"{mode}: status={outcome.status} records={len(outcome.records)} regime={outcome.report.regime}"
    if last is not None:
        msg += f" t={last.t:g} norm_h25={last.norm_h25:.6e} bound_ratio={last.bound_ratio:.6e}"
    print(msg)
    if outcome.error is not None:
        print(f"error: {outcome.error}", file=sys.stderr)
    return outcome.exit_status


def cmd_simulate(args):
    return _run(args, "simulate")


def cmd_linear(args):
    return _run(args, "linear")


def cmd_validate(args):
    from .validate import run_all

    results = run_all()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def cmd_fit_decay(args):
    data = read_timeseries(args.series)
    t = data["t"]
    mask = t >= args.t_min
    d = decay_clock_from_rho(t, data["rho"])
    fit = fit_decay(t[mask], data["norm_h25"][mask], "exp_in_d" if args.mode == "exp" else "algebraic_in_t", d=d[mask])
    print(json.dumps(fit.to_dict(), indent=2, default=lambda x: None if not np.isfinite(x) else x))
    return 0


def cmd_classify(args):
    cfg, _ = load_config(args.config)
    print(json.dumps(cfg.injection().classify(cfg.horizon()).to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heleshaw", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("simulate", cmd_simulate, "full nonlinear run"),
        ("linear", cmd_linear, "closed-form linear trajectories"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", default=None)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("validate", help="run the built-in oracle checks")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("fit-decay", help="fit a decay exponent to a timeseries.csv")
    sp.add_argument("--series", required=True)
    sp.add_argument("--mode", choices=("exp", "alg"), default="exp")
    sp.add_argument("--t-min", type=float, default=0.0, help="ignore records before this time")
    sp.set_defaults(func=cmd_fit_decay)

    sp = sub.add_parser("classify", help="print the injection regime report")
    sp.add_argument("--config", required=True)
    sp.set_defaults(func=cmd_classify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except HeleShawError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
