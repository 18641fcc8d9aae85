"""Command-line driver: ``xy-qcr {evolve,sweep-temperature,quench-length,map-qcr,validate}``.

Exit codes: 0 ok, 1 configuration error, 2 failed validation, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .config import load_config
from .detector import (
    Quantity,
    QuenchResponse,
    boundary_overlap,
    map_qcr_all,
)
from .errors import ConfigError, FlatResponse, InvalidState, NumericalAbort, ZeroDenominator
from .lattice import make_grid
from .modes import QuenchTrajectory
from .observables import log_negativity, mutual_information, negativity

EXIT_OK, EXIT_CONFIG, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3

EVOLVE_COLUMNS = ["t", "delta_energy", "negativity", "log_negativity", "delta_log_negativity",
                  "mutual_information", "delta_mutual_information", "mz", "cxx", "cyy", "czz", "cxy"]
SWEEP_COLUMNS = ["quantity", "h0", "h1", "gamma", "T", "max_response", "scaled_response"]
QCR_COLUMNS = ["h0", "gamma", "tstar", "flag", "interval_lo", "interval_hi"]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    value = float(value)
    if not math.isfinite(value):
        raise NumericalAbort(f"refusing to write non-finite value {value}")
    return repr(value)


def render_csv(command, cfg, columns, rows, extra_header=()):
    buf = io.StringIO()
    buf.write(f"# xy-qcr v{__version__}\n")
    buf.write(f"# command: {command}\n")
    buf.write(f"# config: {cfg.echo()}\n")
    buf.write(f"# grid_nodes: {cfg.nodes}\n")
    for line in extra_header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text, path):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _pool_map(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def evolve_rows(cfg):
    h0 = cfg.h0[0]
    gamma = cfg.gamma_for(h0)
    n = int(round(cfg.t_end / cfg.t_step))
    times = np.linspace(0.0, n * cfg.t_step, n + 1)
    traj = QuenchTrajectory(h0, cfg.h1, gamma, cfg.T, make_grid(cfg.nodes))
    s = traj.fields(times)
    energy = traj.energy(times)
    neg = negativity(s)
    ln = log_negativity(s)
    mi = mutual_information(s)
    return [
        (times[i], energy[i], neg[i], ln[i], ln[i] - ln[0], mi[i], mi[i] - mi[0],
         s.mz[i], s.cxx[i], s.cyy[i], s.czz[i], s.cxy[i])
        for i in range(len(times))
    ]


def cmd_evolve(cfg):
    rows = evolve_rows(cfg)
    h0 = cfg.h0[0]
    return render_csv("evolve", cfg, EVOLVE_COLUMNS, rows,
                      [f"quench: h0={h0!r} h1={cfg.h1!r} gamma={cfg.gamma_for(h0)!r} T={cfg.T!r}"])


def _temperatures(cfg):
    temps = sorted(set(float(t) for t in cfg.temperatures) | {0.0})
    return temps


def _sweep_job(args):
    h0, h1, gamma, temps, quantities, tcfg, nodes = args
    resp = QuenchResponse(h0, h1, gamma, tcfg, nodes)
    rows = []
    for q in quantities:
        try:
            denom = resp.zero_temperature(q)
        except FlatResponse as exc:
            raise ZeroDenominator(str(exc)) from exc
        for T in temps:
            try:
                value = denom if T == 0 else resp.max_response(q, T)
            except FlatResponse:
                value = 0.0
            rows.append((q.value, h0, h1, gamma, T, value, value / denom))
    return rows


def sweep_rows(cfg, pairs):
    temps = _temperatures(cfg)
    jobs = [(h0, h1, cfg.gamma_for(h0), temps, cfg.quantities(), cfg.time_search(), cfg.nodes)
            for h0, h1 in pairs]
    return [row for rows in _pool_map(_sweep_job, jobs, cfg.worker_count()) for row in rows]


def cmd_sweep_temperature(cfg):
    rows = sweep_rows(cfg, [(h0, cfg.h1) for h0 in cfg.h0])
    return render_csv("sweep-temperature", cfg, SWEEP_COLUMNS, rows)


def cmd_quench_length(cfg):
    pairs = [(float(a), float(b)) for a, b in cfg.pairs]
    rows = sweep_rows(cfg, pairs)
    label = " ".join(f"{a!r}->{b!r}" for a, b in pairs)
    return render_csv("quench-length", cfg, SWEEP_COLUMNS, rows, [f"pairs: {label}"])


def qcr_outputs(cfg):
    """Return {filename: text} for the boundary CSVs and the fit sidecar."""
    quantities = cfg.quantities()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        maps = map_qcr_all(quantities, cfg.h0, cfg.gamma, cfg.multicritical, cfg.h1, cfg.eta,
                           cfg.time_search(), cfg.nodes, cfg.window(), cfg.worker_count())
    mode = "multicritical" if cfg.multicritical else "fixed-gamma"
    files = {}
    summary = {"version": __version__, "mode": mode, "eta": cfg.eta, "t_hi": cfg.window(),
               "quantities": {}, "overlap": {}}
    for q, b in maps.items():
        rows = []
        for h0, g, ts in zip(b.h0, b.gamma, b.tstar):
            value = ts.value if math.isfinite(ts.value) else None
            lo, hi = ts.interval if ts.interval else (None, None)
            rows.append((h0, g, value, ts.flag or "", lo, hi))
        files[f"qcr_{q.value}.csv"] = render_csv("map-qcr", cfg, QCR_COLUMNS, rows,
                                                 [f"quantity: {q.value}", f"mode: {mode}"])
        summary["quantities"][q.value] = {
            "C": _json_float(b.slope), "intercept": _json_float(b.intercept),
            "r_squared": _json_float(b.r_squared), "window": list(b.window) if b.window else None,
            "fit_points": b.fit_points,
            "flanks": {side: {"C": _json_float(f["slope"]), "intercept": _json_float(f["intercept"]),
                              "r_squared": _json_float(f["r_squared"]), "fit_points": f["fit_points"],
                              "window": list(f["window"]) if f["window"] else None}
                       for side, f in b.flanks.items()},
        }
    qs = list(maps)
    for i, a in enumerate(qs):
        for b in qs[i + 1:]:
            summary["overlap"][f"{a.value}-{b.value}"] = _json_float(boundary_overlap(maps[a], maps[b]))
    files["qcr_fit.json"] = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    return files


def _json_float(x):
    return None if x is None or not math.isfinite(x) else float(x)


def cmd_map_qcr(cfg):
    files = qcr_outputs(cfg)
    out = cfg.output if cfg.output != "-" else "."
    os.makedirs(out, exist_ok=True)
    for name, text in files.items():
        with open(os.path.join(out, name), "w", newline="") as fh:
            fh.write(text)
    return files


def cmd_validate(cfg, quick=False):
    from .validate import run_all

    if quick:
        # the N=10 finite-size gap is about 1.7e-2, so the quick tolerance is looser
        checks = run_all(N=8, seed=cfg.seed, finite_sizes=(6, 8, 10), finite_tol=2e-2)
    else:
        checks = run_all(N=12, seed=cfg.seed)
    report = {"version": __version__, "passed": all(c.passed for c in checks),
              "checks": [c.as_dict() for c in checks]}
    return report


def build_parser():
    parser = argparse.ArgumentParser(prog="xy-qcr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"xy-qcr v{__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with RunConfig fields")
        p.add_argument("-o", "--output", help="output file (directory for map-qcr); '-' for stdout")
        p.add_argument("--nodes", type=int, help="Gauss-Legendre nodes over (0, pi)")
        p.add_argument("--workers", type=int, help="parallel workers (0 = all cores)")
        p.add_argument("--seed", type=int)
        p.add_argument("--gamma", type=float)
        p.add_argument("--multicritical", action="store_true", default=None,
                       help="set gamma = |1 - |h0|| per initial field")
        p.add_argument("--h1", type=float)
        p.add_argument("--t-max", dest="t_max", type=float, help="time-search horizon")
        p.add_argument("--dt", type=float, help="coarse time step of the search")
        p.add_argument("--refine-tol", dest="refine_tol", type=float)
        p.add_argument("--quantity", help="E, L, I, a comma list, or 'all'")

    p = sub.add_parser("evolve", help="time series after a quench")
    common(p)
    p.add_argument("--h0", help="initial field")
    p.add_argument("-T", "--temperature", dest="T", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--t-step", dest="t_step", type=float)

    p = sub.add_parser("sweep-temperature", help="scaled responses versus temperature")
    common(p)
    p.add_argument("--h0", help="initial fields: 'a,b,c' or 'start:stop:num'")
    p.add_argument("--temperatures", help="'a,b,c' or 'start:stop:num'")

    p = sub.add_parser("quench-length", help="scaled energy response for several (h0, h1) pairs")
    common(p)
    p.add_argument("--pairs", help="'h0->h1,h0->h1'")
    p.add_argument("--temperatures")

    p = sub.add_parser("map-qcr", help="boundary T*(h0) of the quantum critical region")
    common(p)
    p.add_argument("--h0")
    p.add_argument("--eta", type=float)
    p.add_argument("--t-hi", dest="t_hi", type=float, help="upper edge of the temperature window")

    p = sub.add_parser("validate", help="run the exact-diagonalisation cross-checks")
    common(p)
    p.add_argument("--quick", action="store_true", help="smaller chains (N <= 10)")
    return parser


_NON_CONFIG = {"command", "config", "quick"}

_DEFAULTS = {"evolve": {"quantity": "all"},
             "quench-length": {"quantity": "E"},
             "map-qcr": {"h0": "0.5:1.5:41"}}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = dict(_DEFAULTS.get(args.command, {}))
    overrides.update({k: v for k, v in vars(args).items() if k not in _NON_CONFIG and v is not None})
    try:
        file_values = {}
        if args.config:
            file_values = json.load(open(args.config))
        merged = {**overrides}
        # file values beat command defaults but lose to explicit flags
        for key, value in file_values.items():
            if key not in vars(args) or getattr(args, key, None) is None:
                merged[key] = value
        cfg = load_config(None, merged)
        if args.command == "validate":
            report = cmd_validate(cfg, quick=args.quick)
            _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", cfg.output)
            return EXIT_OK if report["passed"] else EXIT_VALIDATION
        if args.command == "map-qcr":
            cmd_map_qcr(cfg)
            return EXIT_OK
        handler = {"evolve": cmd_evolve, "sweep-temperature": cmd_sweep_temperature,
                   "quench-length": cmd_quench_length}[args.command]
        _emit(handler(cfg), cfg.output)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalAbort, InvalidState, ZeroDenominator) as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
