"""Command-line front end.

Exit status: 0 success, 2 configuration error, 3 physically invalid state,
4 output error. Tables go to ``--out`` (or stdout) as CSV with 12
significant digits, or JSON.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from chaindecoherence import __version__, analysis
from chaindecoherence.analysis import COLUMNS, RunConfig
from chaindecoherence.exceptions import ConfigError, DegenerateModeError, PositivityError
from chaindecoherence.presets import PRESETS, run_preset, series_events
from chaindecoherence.spectrum import ChainParams, CouplingParams, mode_data
from chaindecoherence.xstate import BellDiagonalCoeffs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_IO = 4

FLAG_FOR_FIELD = {
    "n_sites": "--n",
    "lam": "--lambda",
    "gamma": "--gamma",
    "alpha": "--alpha",
    "g": "--g",
    "delta": "--delta",
    "c1": "--c1/--c2/--c3",
    "t_max": "--t-max",
    "steps": "--t-steps",
    "alpha_range": "--alpha-min/--alpha-max",
    "gamma_range": "--gamma-min/--gamma-max",
    "n_points": "--gamma-steps",
}


class OutputError(Exception):
    pass


def fmt(value):
    """12 significant digits, shortest form."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".12g")


def format_csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in np.atleast_2d(rows):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def format_json_table(header, rows):
    body = {
        "columns": list(header),
        "rows": [[None if math.isnan(float(v)) else float(fmt(v)) for v in row] for row in np.atleast_2d(rows)],
    }
    return json.dumps(body, indent=1) + "\n"


def _write_text(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def emit_csv(header, rows, path):
    """Write a table; ``path`` None or '-' means stdout."""
    if np.size(rows) == 0:
        raise ConfigError("refusing to write an empty table")
    _write_text(format_csv(header, rows), path)


def emit_table(header, rows, path, fmt_name):
    if fmt_name == "json":
        if np.size(rows) == 0:
            raise ConfigError("refusing to write an empty table")
        _write_text(format_json_table(header, rows), path)
    else:
        emit_csv(header, rows, path)


def emit_metadata(meta, path):
    _write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", path)


def _add_physics(p):
    g = p.add_argument_group("physics")
    g.add_argument("--n", type=int, default=400, help="chain sites N")
    g.add_argument("--lambda", dest="lam", type=float, default=1.0, help="transverse field")
    g.add_argument("--gamma", type=float, default=1.0, help="anisotropy")
    g.add_argument("--alpha", type=float, default=0.0, help="three-site interaction")
    g.add_argument("--g", type=float, default=0.05, help="qubit-chain coupling")
    g.add_argument("--delta", type=float, default=0.0, help="coupling asymmetry")
    g.add_argument("--c1", type=float, default=1.0)
    g.add_argument("--c2", type=float, default=-1.0)
    g.add_argument("--c3", type=float, default=1.0)


def _add_time_grid(p, defaults=True):
    g = p.add_argument_group("time grid")
    g.add_argument("--t-max", type=float, default=20.0 if defaults else None)
    g.add_argument("--t-steps", type=int, default=2000 if defaults else None)


def _add_alpha_grid(p, steps=41):
    g = p.add_argument_group("alpha grid")
    g.add_argument("--alpha-min", type=float, default=-1.0)
    g.add_argument("--alpha-max", type=float, default=1.0)
    g.add_argument("--alpha-steps", type=int, default=steps)


def _add_io(p):
    g = p.add_argument_group("output")
    g.add_argument("--out", default=None, help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--metadata", default=None, help="write a JSON sidecar here")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chaindecoherence",
        description="Decoherence, discord and entanglement of two qubits coupled to an XY chain "
                    "with three-site interaction.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("evolve", help="time series of factors and correlations")
    _add_physics(p)
    _add_time_grid(p)
    _add_io(p)

    p = sub.add_parser("sweep", help="alpha x t surface")
    _add_physics(p)
    _add_time_grid(p)
    _add_alpha_grid(p)
    _add_io(p)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("events", help="sudden-death and transition times")
    _add_physics(p)
    _add_time_grid(p)
    _add_io(p)
    p.add_argument("--zero-tol", type=float, default=0.0,
                   help="concurrence at or below this counts as zero")

    p = sub.add_parser("alpha-scan", help="transition time over alpha")
    _add_physics(p)
    _add_time_grid(p)
    _add_alpha_grid(p)
    _add_io(p)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("gamma-scan", help="transition time over gamma with a polynomial fit")
    _add_physics(p)
    _add_time_grid(p)
    _add_io(p)
    g = p.add_argument_group("gamma grid")
    g.add_argument("--gamma-min", type=float, default=0.1)
    g.add_argument("--gamma-max", type=float, default=2.0)
    g.add_argument("--gamma-steps", type=int, default=20)
    g.add_argument("--fit-degree", type=int, default=4)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("preset", help="reproduce a figure's data (fig1..fig8)")
    p.add_argument("name", help="preset name: " + ", ".join(PRESETS))
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_time_grid(p, defaults=False)
    p.add_argument("--alpha-steps", type=int, default=None)
    p.add_argument("--gamma-steps", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _run_config(args):
    if args.t_steps is not None and args.t_steps < 2:
        raise ConfigError(f"must be >= 2, got {args.t_steps}", "steps")
    return RunConfig(
        chain=ChainParams(args.n, args.lam, args.gamma, args.alpha),
        coupling=CouplingParams(args.g, args.delta),
        coeffs=BellDiagonalCoeffs(args.c1, args.c2, args.c3),
        t_max=args.t_max,
        steps=args.t_steps,
    )


def _metadata(args, cfg, **extra):
    c = cfg.chain
    meta = {
        "tool": "chaindecoherence",
        "version": __version__,
        "subcommand": args.subcommand,
        "parameters": {
            "n_sites": c.n_sites, "lam": c.lam, "gamma": c.gamma, "alpha": c.alpha,
            "g": cfg.coupling.g, "delta": cfg.coupling.delta,
            "c1": cfg.coeffs.c1, "c2": cfg.coeffs.c2, "c3": cfg.coeffs.c3,
            "t_max": cfg.t_max, "t_steps": cfg.steps,
        },
        "flags": {"negative_energy_modes": mode_data(cfg.chain, cfg.coupling).negative_energy_count},
    }
    meta.update(extra)
    return meta


def _cmd_evolve(args):
    cfg = _run_config(args)
    ts = analysis.time_series(cfg)
    emit_table(COLUMNS, ts.as_array(), args.out, args.format)
    if args.metadata:
        emit_metadata(_metadata(args, cfg, events=series_events(cfg)), args.metadata)


def _cmd_sweep(args):
    cfg = _run_config(args)
    sweep = analysis.sweep_alpha_time(cfg, (args.alpha_min, args.alpha_max), args.alpha_steps, n_jobs=args.jobs)
    emit_table(("alpha",) + COLUMNS, sweep.rows(), args.out, args.format)
    if args.metadata:
        emit_metadata(_metadata(args, cfg, alpha_grid=[args.alpha_min, args.alpha_max, args.alpha_steps]),
                      args.metadata)


def _cmd_events(args):
    cfg = _run_config(args)
    events = [analysis.sudden_death_time(cfg, zero_tol=args.zero_tol), analysis.transition_time(cfg)]
    header = ("kind", "t_event", "bracket_lo", "bracket_hi", "tolerance", "n_crossings")
    if args.format == "json":
        _write_text(json.dumps([e.as_dict() for e in events], indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for e in events:
            lo, hi = e.bracket if e.bracket is not None else (math.nan, math.nan)
            writer.writerow([
                e.kind,
                fmt(math.nan if e.t_event is None else e.t_event),
                fmt(lo), fmt(hi),
                fmt(math.nan if e.tolerance is None else e.tolerance),
                len(e.crossings),
            ])
        _write_text(buf.getvalue(), args.out)
    if args.metadata:
        emit_metadata(_metadata(args, cfg, events=[e.as_dict() for e in events]), args.metadata)


def _cmd_alpha_scan(args):
    cfg = _run_config(args)
    scan = analysis.transition_time_vs_alpha(cfg, (args.alpha_min, args.alpha_max), args.alpha_steps,
                                             n_jobs=args.jobs)
    emit_table(("alpha", "t_prime"), np.column_stack([scan.alphas, scan.t_prime]), args.out, args.format)
    if args.metadata:
        emit_metadata(_metadata(args, cfg, alpha_opt=scan.alpha_opt, t_prime_opt=scan.t_prime_opt,
                                alpha_opt_flag=scan.flag), args.metadata)


def _cmd_gamma_scan(args):
    cfg = _run_config(args)
    scan = analysis.transition_time_vs_gamma(cfg, (args.gamma_min, args.gamma_max), args.gamma_steps,
                                             args.fit_degree, n_jobs=args.jobs)
    emit_table(("gamma", "t_prime"), np.column_stack([scan.gammas, scan.t_prime]), args.out, args.format)
    if args.metadata:
        emit_metadata(_metadata(args, cfg, fit={
            "degree": args.fit_degree,
            "coefficients_ascending": scan.coefficients.tolist(),
            "minimizer": scan.minimizer,
            "fitted_min": scan.fitted_min,
        }), args.metadata)


def _cmd_preset(args):
    if args.name not in PRESETS:
        raise ConfigError(f"unknown preset {args.name!r}; choose from {', '.join(PRESETS)}", "name")
    if args.t_steps is not None and args.t_steps < 2:
        raise ConfigError(f"must be >= 2, got {args.t_steps}", "steps")
    result = run_preset(args.name, t_max=args.t_max, steps=args.t_steps, alpha_steps=args.alpha_steps,
                        gamma_steps=args.gamma_steps, n_jobs=args.jobs)
    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {args.out}: {exc}") from exc
    ext = "json" if args.format == "json" else "csv"
    files = []
    for label, header, rows in result.tables:
        stem = f"{args.name}_{label}" if label else args.name
        path = os.path.join(args.out, f"{stem}.{ext}")
        emit_table(header, rows, path, args.format)
        files.append(os.path.basename(path))
    meta = {"tool": "chaindecoherence", "version": __version__, "subcommand": "preset", "files": files}
    meta.update(result.metadata)
    emit_metadata(meta, os.path.join(args.out, f"{args.name}.meta.json"))


COMMANDS = {
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "events": _cmd_events,
    "alpha-scan": _cmd_alpha_scan,
    "gamma-scan": _cmd_gamma_scan,
    "preset": _cmd_preset,
}


def run(argv=None):
    """Parse ``argv`` and execute; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.subcommand](args)
    except ConfigError as exc:
        flag = FLAG_FOR_FIELD.get(exc.field, exc.field)
        prefix = f"{flag}: " if flag else ""
        print(f"chaindecoherence: error: {prefix}{exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateModeError as exc:
        print(f"chaindecoherence: error: {exc} (shift --lambda by ~1e-12)", file=sys.stderr)
        return EXIT_CONFIG
    except PositivityError as exc:
        print(f"chaindecoherence: invalid state: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OutputError as exc:
        print(f"chaindecoherence: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
