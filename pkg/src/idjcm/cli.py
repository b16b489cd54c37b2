"""Command-line interface.

Subcommands map one-to-one onto the sweep drivers, plus ``validate`` which
runs the invariant suites.  Exit codes: 0 success, 1 validation failure,
2 configuration error, 3 numerical error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
from dataclasses import asdict

import numpy as np

from . import __version__, kernels
from .errors import ConfigurationError, IdjcmError, InvalidParameterError, NumericalError
from .experiments import (
    PointError,
    SeriesTable,
    SweepSpec,
    alpha_sweep,
    cr_traces,
    parametric_fisher_vs_wehrl,
    surface_sweep,
    time_traces,
)
from .model import ModelConfig
from .phase_space import DEFAULT_N_R, DEFAULT_N_THETA, MIN_N_R, MIN_N_THETA

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

SUBCOMMANDS = ("surface", "trace", "parametric", "alpha-sweep", "cr", "validate")

# key -> parser for the ``key = value`` config file
CONFIG_KEYS = {
    "alpha_mag": float,
    "alpha_phase": float,
    "lambda": float,
    "omega_f": float,
    "omega_a": float,
    "n_max": lambda s: s.strip() if s.strip() == "auto" else int(s),
    "tail_tol": float,
    "n_r": int,
    "n_theta": int,
    "alpha": lambda s: [float(x) for x in s.split(",") if x.strip()],
    "alpha_min": float,
    "alpha_max": float,
    "alpha_steps": int,
    "t_min": float,
    "t_max": float,
    "t_steps": int,
    "format": str,
    "threads": int,
}

DEFAULT_ALPHAS = {
    "surface": (0.5, 3.5, 31),
    "trace": [1.0, 2.0, 3.0],
    "parametric": [1.0, 2.0, 3.0],
    "alpha-sweep": (1.0, 5.0, 21),
    "cr": [1.0, 2.0, 3.0],
    "validate": [1.0, 2.0, 3.0],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigurationError(message)


def parse_config(path: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise ConfigurationError(f"cannot read config {path}: {err.strerror}") from err
    values = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key '{key}'")
        try:
            values[key] = CONFIG_KEYS[key](val)
        except ValueError as err:
            raise ConfigurationError(f"{path}:{lineno}: bad value for '{key}': {val!r}") from err
    return values


def _float_list(s: str):
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}")


def _n_max(s: str):
    if s == "auto":
        return s
    try:
        return int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integer or 'auto', got {s!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=_float_list, help="comma-separated alpha magnitudes")
    common.add_argument("--alpha-min", type=float, help="lower end of a linear alpha range")
    common.add_argument("--alpha-max", type=float, help="upper end of a linear alpha range")
    common.add_argument("--alpha-steps", type=int, help="number of alpha values in the range")
    common.add_argument("--alpha-phase", type=float, help="phase of the coherent amplitude (default 0)")
    common.add_argument("--t-min", type=float, help="first scaled time (default 0)")
    common.add_argument("--t-max", type=float, help="last scaled time (default 2*pi)")
    common.add_argument("--t-steps", type=int, help="number of scaled times (default 257)")
    common.add_argument("--n-max", type=_n_max, help="Fock truncation: 'auto' or an integer")
    common.add_argument("--grid-radial", type=int, help="Gauss-Legendre radial nodes (default 200)")
    common.add_argument("--grid-angular", type=int, help="uniform angular nodes (default 256)")
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--config", help="key = value file; flags take precedence")
    common.add_argument("--threads", type=int, help="worker threads for the sweep")

    parser = _Parser(prog="idjcm", description="Intensity-dependent JCM phase-space information measures")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    helps = {
        "surface": "I_F and S_W over an (alpha, T) grid",
        "trace": "I_F, S_W and var_x2 time traces",
        "parametric": "(S_W, I_F) parametric curves",
        "alpha-sweep": "period means of I_F and S_W versus alpha",
        "cr": "Cramer-Rao product traces",
        "validate": "run the invariant suites",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _pick(flag, conf, key, default):
    if flag is not None:
        return flag
    return conf.get(key, default)


def resolve(args) -> tuple[ModelConfig, SweepSpec, dict]:
    """Merge flags over config-file values over defaults."""
    conf = parse_config(args.config) if args.config else {}

    has_list = args.alpha is not None
    has_range = any(v is not None for v in (args.alpha_min, args.alpha_max, args.alpha_steps))
    if has_list and has_range:
        raise ConfigurationError("--alpha is mutually exclusive with --alpha-min/--alpha-max/--alpha-steps")
    if has_list:
        alphas = args.alpha
    elif has_range or any(k in conf for k in ("alpha_min", "alpha_max", "alpha_steps")):
        d = DEFAULT_ALPHAS[args.subcommand]
        lo, hi, n = d if isinstance(d, tuple) else (min(d), max(d), len(d))
        lo = _pick(args.alpha_min, conf, "alpha_min", lo)
        hi = _pick(args.alpha_max, conf, "alpha_max", hi)
        n = _pick(args.alpha_steps, conf, "alpha_steps", n)
        if n < 1 or (n > 1 and hi < lo):
            raise ConfigurationError(f"bad alpha range [{lo}, {hi}] x {n}")
        alphas = list(np.linspace(lo, hi, n))
    elif "alpha" in conf:
        alphas = conf["alpha"]
    elif "alpha_mag" in conf:
        alphas = [conf["alpha_mag"]]
    else:
        d = DEFAULT_ALPHAS[args.subcommand]
        alphas = list(np.linspace(*d)) if isinstance(d, tuple) else list(d)

    n_max = _pick(args.n_max, conf, "n_max", "auto")
    base = ModelConfig(
        alpha_mag=conf.get("alpha_mag", alphas[0] if alphas else 1.0),
        alpha_phase=_pick(args.alpha_phase, conf, "alpha_phase", 0.0),
        coupling=conf.get("lambda", 1.0),
        omega_f=conf.get("omega_f", 1.0),
        omega_a=conf.get("omega_a", 1.0),
        n_max=n_max,
        tail_tol=conf.get("tail_tol", 1e-12),
    )
    for a in alphas:
        base.with_alpha(a)  # validates each alpha against the model invariants
    n_r = _pick(args.grid_radial, conf, "n_r", DEFAULT_N_R)
    n_theta = _pick(args.grid_angular, conf, "n_theta", DEFAULT_N_THETA)
    spec = SweepSpec(
        alpha_values=tuple(alphas),
        t_min=_pick(args.t_min, conf, "t_min", 0.0),
        t_max=_pick(args.t_max, conf, "t_max", 2.0 * math.pi),
        t_steps=_pick(args.t_steps, conf, "t_steps", 257),
        grid_overrides=(n_r, n_theta),
        aggregate="period_mean" if args.subcommand == "alpha-sweep" else "none",
    )
    if n_r < MIN_N_R or n_theta < MIN_N_THETA:
        raise ConfigurationError(f"grid {n_r}x{n_theta} below quadrature floor {MIN_N_R}x{MIN_N_THETA}")
    fmt = _pick(args.format, conf, "format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"unknown format {fmt!r}")
    threads = _pick(args.threads, conf, "threads", None)
    if threads is not None and threads < 1:
        raise ConfigurationError("--threads must be >= 1")
    settings = {"format": fmt, "threads": threads, "config_file": args.config, "file_values": conf}
    return base, spec, settings


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def format_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def format_json(columns, rows, meta) -> str:
    obj = {
        "meta": dict(meta, columns=list(columns)),
        "rows": [[_jsonable(v) for v in row] for row in rows],
    }
    return json.dumps(obj, indent=1, default=_jsonable) + "\n"


def _check_writable(path: str):
    if path == "-":
        return
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise ConfigurationError(f"output directory not writable: {directory}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise ConfigurationError(f"output path not writable: {path}")


def emit(columns, rows, meta, fmt: str, out: str):
    text = format_csv(columns, rows) if fmt == "csv" else format_json(columns, rows, meta)
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    with open(out + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(dict(meta, columns=list(columns)), fh, indent=1, default=_jsonable)
        fh.write("\n")


DRIVERS = {
    "surface": surface_sweep,
    "trace": time_traces,
    "parametric": parametric_fisher_vs_wehrl,
    "alpha-sweep": alpha_sweep,
    "cr": cr_traces,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        base, spec, settings = resolve(args)
        _check_writable(args.out)
    except (ConfigurationError, InvalidParameterError) as err:
        print(f"idjcm: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG

    echo = {
        "config": {k: v for k, v in asdict(base).items() if k != "alpha_mag"},
        "config_file": settings["config_file"],
        "file_values": settings["file_values"],
        "argv": list(argv) if argv is not None else sys.argv[1:],
    }
    try:
        if args.subcommand == "validate":
            from .validation import run_validation

            columns, rows, ok = run_validation(base, spec)
            meta = {"kind": "validate", "version": __version__, "backend": kernels.BACKEND, **echo}
            emit(columns, rows, meta, settings["format"], args.out)
            for row in rows:
                print(f"{'PASS' if row[-1] else 'FAIL'} {row[0]} alpha={row[1]:g} value={row[2]:.3e} tol={row[3]:.1e}",
                      file=sys.stderr)
            return EXIT_OK if ok else EXIT_VALIDATION
        table: SeriesTable = DRIVERS[args.subcommand](spec, base, threads=settings["threads"])
        table.meta.update(echo)
        emit(table.columns, table.rows, table.meta, settings["format"], args.out)
    except (ConfigurationError, InvalidParameterError) as err:
        print(f"idjcm: configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, PointError, ArithmeticError) as err:
        print(f"idjcm: numerical error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f"idjcm: cannot write output: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
