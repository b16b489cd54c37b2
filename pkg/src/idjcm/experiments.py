"""Sweep drivers producing the data series behind the figures.

Every driver evaluates a product grid of coherent amplitudes and scaled
times and returns a :class:`SeriesTable` with rows ordered alpha-major,
time-minor.  Points are independent and may be evaluated on a thread pool;
row order never depends on scheduling.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import spearmanr

from . import __version__, kernels
from .errors import ConfigurationError, IdjcmError
from .measures import marginal_cr_check, measure_record
from .model import ModelConfig, evolve_closed_form
from .phase_space import DEFAULT_N_R, DEFAULT_N_THETA, build_grid, sample_qfield

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SweepSpec:
    alpha_values: tuple
    t_min: float = 0.0
    t_max: float = TWO_PI
    t_steps: int = 257
    grid_overrides: Optional[tuple] = None
    aggregate: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "alpha_values", tuple(float(a) for a in self.alpha_values))
        if not self.alpha_values:
            raise ConfigurationError("alpha_values must not be empty")
        if any(not (a >= 0 and math.isfinite(a)) for a in self.alpha_values):
            raise ConfigurationError(f"alpha values must be finite and >= 0: {self.alpha_values}")
        if self.t_steps < 2:
            raise ConfigurationError(f"t_steps must be >= 2, got {self.t_steps}")
        if not self.t_max > self.t_min:
            raise ConfigurationError(f"t_max ({self.t_max}) must exceed t_min ({self.t_min})")
        if self.aggregate not in ("none", "period_mean"):
            raise ConfigurationError(f"unknown aggregate {self.aggregate!r}")
        if self.grid_overrides is not None and len(self.grid_overrides) != 2:
            raise ConfigurationError("grid_overrides must be (n_r, n_theta)")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    @property
    def grid_size(self) -> tuple:
        return tuple(self.grid_overrides) if self.grid_overrides else (DEFAULT_N_R, DEFAULT_N_THETA)


@dataclass
class SeriesTable:
    columns: list
    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def select(self, alpha: float) -> "SeriesTable":
        mask = self.column("alpha") == alpha
        return SeriesTable(list(self.columns), self.rows[mask], dict(self.meta))

    def __len__(self):
        return len(self.rows)


class PointError(IdjcmError):
    """Wraps a failure at one sweep point with its (alpha, T) context."""

    def __init__(self, alpha, t, err):
        super().__init__(f"at alpha={alpha:g}, T={t:g}: {err}")
        self.alpha = alpha
        self.t = t
        self.cause = err


def _point(cfg, grid, t, marginal):
    state = evolve_closed_form(cfg, t)
    qf = sample_qfield(state, grid)
    rec = measure_record(qf, grid)
    if marginal:
        rec.marginal_cr = (marginal_cr_check(qf, grid, 1)[2], marginal_cr_check(qf, grid, 2)[2])
    return rec


def _evaluate(spec: SweepSpec, base: ModelConfig, marginal: bool, threads: Optional[int]):
    n_r, n_theta = spec.grid_size
    times = spec.times
    jobs = []
    for a in spec.alpha_values:
        cfg = base.with_alpha(a)
        grid = build_grid(cfg, n_r, n_theta)
        jobs.extend((a, cfg, grid, t) for t in times)

    def run(job):
        a, cfg, grid, t = job
        try:
            return _point(cfg, grid, t, marginal)
        except IdjcmError as err:
            raise PointError(a, t, err) from err

    workers = threads or os.cpu_count() or 1
    if workers == 1:
        return [run(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, jobs))


def _table(spec, base, columns, rowfn, marginal=False, threads=None, kind=""):
    start = time.perf_counter()
    records = _evaluate(spec, base, marginal, threads)
    times = spec.times
    rows = []
    k = 0
    for a in spec.alpha_values:
        for t in times:
            rows.append(rowfn(a, t, records[k]))
            k += 1
    data = np.array(rows, dtype=float).reshape(len(rows), len(columns))
    if not np.all(np.isfinite(data)):
        raise ArithmeticError(f"non-finite values in {kind} table")
    return SeriesTable(list(columns), data, _meta(spec, base, kind, time.perf_counter() - start))


def _meta(spec, base, kind, wall):
    n_r, n_theta = spec.grid_size
    return {
        "kind": kind,
        "config": {k: v for k, v in asdict(base).items() if k != "alpha_mag"},
        "sweep": {
            "alpha_values": list(spec.alpha_values),
            "t_min": spec.t_min,
            "t_max": spec.t_max,
            "t_steps": spec.t_steps,
            "aggregate": spec.aggregate,
        },
        "grid": {"n_r": n_r, "n_theta": n_theta},
        "version": __version__,
        "backend": kernels.BACKEND,
        "wall_time_s": wall,
    }


def surface_sweep(spec: SweepSpec, base: ModelConfig = ModelConfig(), threads=None) -> SeriesTable:
    """Fisher information and Wehrl entropy over the full (alpha, T) grid."""
    return _table(
        spec, base, ["alpha", "T", "I_F", "S_W"],
        lambda a, t, r: (a, t, r.i_f, r.s_w), threads=threads, kind="surface",
    )


def time_traces(spec: SweepSpec, base: ModelConfig = ModelConfig(), threads=None) -> SeriesTable:
    """Per-alpha traces of I_F, S_W and the X2 variance."""
    return _table(
        spec, base, ["alpha", "T", "I_F", "S_W", "var_x2"],
        lambda a, t, r: (a, t, r.i_f, r.s_w, r.variances.var_x2), threads=threads, kind="trace",
    )


def parametric_fisher_vs_wehrl(spec: SweepSpec, base: ModelConfig = ModelConfig(), threads=None) -> SeriesTable:
    """Same data as the time traces, laid out as (S_W, I_F) parametric curves."""
    return _table(
        spec, base, ["alpha", "T", "S_W", "I_F"],
        lambda a, t, r: (a, t, r.s_w, r.i_f), threads=threads, kind="parametric",
    )


def cr_traces(spec: SweepSpec, base: ModelConfig = ModelConfig(), threads=None) -> SeriesTable:
    """Cramer-Rao product traces with the 1-D marginal products alongside."""
    return _table(
        spec, base, ["alpha", "T", "cr_product", "marginal_cr_x1", "marginal_cr_x2"],
        lambda a, t, r: (a, t, r.cr_product, *r.marginal_cr),
        marginal=True, threads=threads, kind="cr",
    )


def period_mean(t: np.ndarray, y: np.ndarray) -> float:
    """Trapezoid mean of ``y`` over the sampled interval."""
    return float(trapezoid(y, t) / (t[-1] - t[0]))


def alpha_sweep(spec: SweepSpec, base: ModelConfig = ModelConfig(), threads=None) -> SeriesTable:
    """Period means of I_F and S_W, one row per alpha."""
    if spec.aggregate != "period_mean":
        raise ConfigurationError("alpha_sweep requires aggregate='period_mean'")
    traces = _table(
        spec, base, ["alpha", "T", "I_F", "S_W"],
        lambda a, t, r: (a, t, r.i_f, r.s_w), threads=threads, kind="alpha-sweep",
    )
    rows = []
    for a in spec.alpha_values:
        sub = traces.select(a)
        t = sub.column("T")
        rows.append((a, period_mean(t, sub.column("I_F")), period_mean(t, sub.column("S_W"))))
    return SeriesTable(["alpha", "I_F_mean", "S_W_mean"], np.array(rows, dtype=float), traces.meta)


def rank_correlation(table: SeriesTable, alpha: float, t_lo: float, t_hi: float,
                     x: str = "I_F", y: str = "S_W") -> float:
    """Spearman correlation of two columns over the open window ``(t_lo, t_hi)``."""
    sub = table.select(alpha)
    t = sub.column("T")
    m = (t > t_lo) & (t < t_hi)
    return float(spearmanr(sub.column(x)[m], sub.column(y)[m]).statistic)


def column_range(table: SeriesTable, alpha: float, col: str, t_lo: float, t_hi: float) -> float:
    sub = table.select(alpha)
    t = sub.column("T")
    m = (t > t_lo) & (t < t_hi)
    v = sub.column(col)[m]
    return float(v.max() - v.min())


def period_mean_by_alpha(table: SeriesTable, col: str) -> dict:
    return {
        a: period_mean(table.select(a).column("T"), table.select(a).column(col))
        for a in dict.fromkeys(table.column("alpha").tolist())
    }


def located_argmax(table: SeriesTable, col: str) -> float:
    """Alpha at which an alpha-sweep column peaks."""
    return float(table.column("alpha")[int(np.argmax(table.column(col)))])
