"""Invariant suites behind ``idjcm validate``.

Each check yields one row ``(check, alpha, value, tolerance, passed)``
where ``value`` is a nonnegative defect and passing means
``value <= tolerance``.
"""
from __future__ import annotations

import math

import numpy as np

from .measures import (
    WEHRL_MIN,
    fisher_information,
    initial_identities,
    marginal_cr_check,
    measure_record,
    wehrl_entropy,
)
from .model import ModelConfig, evolve_brute_force, evolve_closed_form, state_fidelity
from .phase_space import build_grid, husimi_gradient, husimi_q, sample_qfield

COLUMNS = ["check", "alpha", "value", "tolerance", "passed"]
TWO_PI = 2.0 * math.pi
FD_STEP = 1e-5


def fd_gradient(beta: complex, state, h: float = FD_STEP) -> tuple[float, float]:
    """Central finite-difference gradient of the Husimi function."""
    d1 = (husimi_q(beta + h, state) - husimi_q(beta - h, state)) / (2 * h)
    d2 = (husimi_q(beta + 1j * h, state) - husimi_q(beta - 1j * h, state)) / (2 * h)
    return d1, d2


def gradient_defect(cfg: ModelConfig, n_points: int, rng: np.random.Generator) -> float:
    """Largest relative analytic-vs-FD gradient error over random probes."""
    worst = 0.0
    r_span = math.sqrt(cfg.truncation())
    done = 0
    while done < n_points:
        t = rng.uniform(0, TWO_PI)
        state = evolve_closed_form(cfg, t)
        beta = complex(*rng.uniform(-r_span, r_span, 2))
        if husimi_q(beta, state) <= 1e-12 / math.pi:
            continue
        ga = np.array(husimi_gradient(beta, state))
        gf = np.array(fd_gradient(beta, state))
        worst = max(worst, float(np.linalg.norm(ga - gf) / np.linalg.norm(gf)))
        done += 1
    return worst


def _checks_for_alpha(a: float, base: ModelConfig, spec) -> list:
    cfg = base.with_alpha(a)
    n_r, n_theta = spec.grid_size
    g = build_grid(cfg, n_r, n_theta)
    rows = []

    def add(name, value, tol):
        rows.append((name, a, float(value), tol, bool(value <= tol)))

    ident = initial_identities(a, n_r, n_theta, cfg.tail_tol)
    add("fisher_t0_equals_2", abs(ident["i_f"] - 2.0), 1e-6)
    add("fisher_wehrl_t0_identity", abs(ident["fisher_wehrl_residual"]), 1e-6)

    explicit = ModelConfig(**{**cfg.__dict__, "n_max": cfg.truncation()})
    fid = min(
        state_fidelity(evolve_closed_form(explicit, 0.1 * k), evolve_brute_force(explicit, 0.1 * k))
        for k in range(63)
    )
    add("closed_form_vs_expm", 1.0 - fid, 1e-10)
    add("revival_fidelity", abs(1.0 - state_fidelity(evolve_closed_form(cfg, 0.0), evolve_closed_form(cfg, TWO_PI))), 1e-12)
    add("disentangled_at_pi", max(float(np.sum(np.abs(evolve_closed_form(cfg, k * math.pi).lower) ** 2)) for k in (1, 2, 3)), 1e-20)

    norm_dev = per = mirror = ang = 0.0
    s_min = np.inf
    for t in np.linspace(0.3, TWO_PI - 0.3, 5):
        qf = sample_qfield(evolve_closed_form(cfg, t), g)
        rec = measure_record(qf, g)
        norm_dev = max(norm_dev, abs(qf.norm - 1.0))
        s_min = min(s_min, rec.s_w)
        ang = max(ang, abs(np.sum(rec.s_theta) * g.theta_weight - rec.s_w),
                  abs(np.sum(rec.i_theta) * g.theta_weight - rec.i_f))
        s_shift = wehrl_entropy(sample_qfield(evolve_closed_form(cfg, t + TWO_PI), g), g)
        s_mirror = wehrl_entropy(sample_qfield(evolve_closed_form(cfg, TWO_PI - t), g), g)
        per = max(per, abs(rec.s_w - s_shift))
        mirror = max(mirror, abs(rec.s_w - s_mirror))
    add("husimi_normalisation", norm_dev, 1e-8)
    add("wehrl_lower_bound", max(0.0, WEHRL_MIN - s_min), 1e-6)
    add("angular_integral_consistency", ang, 1e-8)
    add("wehrl_periodicity", per, 1e-8)
    add("wehrl_mirror_symmetry", mirror, 1e-8)

    cr_ineq = cr_eq = 0.0
    for t in (0.0, 0.9, 2.0, math.pi, TWO_PI):
        qf = sample_qfield(evolve_closed_form(cfg, t), g)
        for axis in (1, 2):
            prod = marginal_cr_check(qf, g, axis)[2]
            cr_ineq = max(cr_ineq, 1.0 - prod)
            if t in (0.0, math.pi, TWO_PI):
                cr_eq = max(cr_eq, abs(prod - 1.0))
    add("marginal_cramer_rao_inequality", max(cr_ineq, 0.0), 1e-3)
    add("marginal_cramer_rao_equality", cr_eq, 1e-3)

    add("gradient_vs_finite_difference", gradient_defect(cfg, 20, np.random.default_rng(int(a * 1000) + 7)), 1e-6)
    add("fisher_nonnegative", max(0.0, -fisher_information(sample_qfield(evolve_closed_form(cfg, 1.0), g), g)), 0.0)
    return rows


def run_validation(base: ModelConfig, spec) -> tuple[list, list, bool]:
    rows = []
    for a in spec.alpha_values:
        rows.extend(_checks_for_alpha(a, base, spec))
    return COLUMNS, rows, all(r[-1] for r in rows)
