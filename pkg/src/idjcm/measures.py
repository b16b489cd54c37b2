"""Information quantifiers computed from a sampled Husimi field.

Wehrl entropy and its phase density, quadrature moments, the
variance-weighted Husimi Fisher information and its phase density, the
``|beta|``-variance Cramer-Rao product, and a 1-D marginal Cramer-Rao check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from numpy.polynomial.legendre import leggauss
from scipy.special import erf

from .errors import InvalidParameterError
from .model import ModelConfig, evolve_closed_form
from .phase_space import (
    DEFAULT_N_R,
    DEFAULT_N_THETA,
    PhaseSpaceGrid,
    QField,
    build_grid,
    husimi_on_points,
    integrate,
    radial_integrate,
    sample_qfield,
)

Q_FLOOR = 1e-300
GUARD_REL = 1e-12
MARGINAL_POINTS = 512

WEHRL_MIN = 1.0 + math.log(math.pi)


@dataclass(frozen=True)
class VariancePair:
    mean_x1: float
    mean_x2: float
    var_x1: float
    var_x2: float


@dataclass
class MeasureRecord:
    t_scaled: float
    s_w: float
    i_f: float
    s_theta: np.ndarray
    i_theta: np.ndarray
    variances: VariancePair
    delta_sq: float
    cr_product: float


def _entropy_density(q):
    return -q * np.log(np.maximum(q, Q_FLOOR))


def wehrl_entropy(qf: QField, g: PhaseSpaceGrid) -> float:
    """``-int Q ln Q d^2 beta`` in nats."""
    return integrate(g, _entropy_density(qf.q))


def wehrl_pd(qf: QField, g: PhaseSpaceGrid) -> np.ndarray:
    """Wehrl phase density at each grid angle (radial integral of ``-Q ln Q``)."""
    return radial_integrate(g, _entropy_density(qf.q))


def marginal_stats(qf: QField, g: PhaseSpaceGrid) -> VariancePair:
    x1, x2 = g.cartesian()
    m1 = integrate(g, x1 * qf.q)
    m2 = integrate(g, x2 * qf.q)
    v1 = integrate(g, (x1 - m1) ** 2 * qf.q)
    v2 = integrate(g, (x2 - m2) ** 2 * qf.q)
    return VariancePair(m1, m2, v1, v2)


def _guard(q):
    return q >= GUARD_REL * np.max(q)


def fisher_gamma(qf: QField, vp: VariancePair) -> np.ndarray:
    """Per-node ``sum_j (sigma_j d ln Q / dX_j)^2``; zero where Q is below the guard."""
    ok = _guard(qf.q)
    q = np.where(ok, qf.q, 1.0)
    gamma = vp.var_x1 * (qf.grad_x1 / q) ** 2 + vp.var_x2 * (qf.grad_x2 / q) ** 2
    return np.where(ok, gamma, 0.0)


def _fisher_density(qf: QField, vp: VariancePair) -> np.ndarray:
    # Q * Gamma written as sum_j sigma_j^2 (dQ/dX_j)^2 / Q
    ok = _guard(qf.q)
    q = np.where(ok, qf.q, 1.0)
    dens = (vp.var_x1 * qf.grad_x1**2 + vp.var_x2 * qf.grad_x2**2) / q
    return np.where(ok, dens, 0.0)


def fisher_information(qf: QField, g: PhaseSpaceGrid, vp: VariancePair | None = None) -> float:
    """``int Q Gamma d^2 beta``; equals 2 for every coherent state."""
    vp = marginal_stats(qf, g) if vp is None else vp
    return integrate(g, _fisher_density(qf, vp))


def fisher_pd(qf: QField, g: PhaseSpaceGrid, vp: VariancePair | None = None) -> np.ndarray:
    """Fisher phase density at each grid angle, taken nonnegative so it integrates to I_F."""
    vp = marginal_stats(qf, g) if vp is None else vp
    return radial_integrate(g, _fisher_density(qf, vp))


def initial_fisher_pd_closed_form(alpha_mag, theta):
    """Printed t=0 closed form of the Fisher phase density.

    ``(1/2pi) exp(x^2 - a^2) {x sqrt(pi) [1 + erf x] f1 + exp(-x^2) f2}``
    with ``x = a cos(theta)`` and ``f_j = a^2 - x^2 + j/2``.
    """
    if np.any(np.asarray(alpha_mag) < 0):
        raise InvalidParameterError("alpha_mag must be >= 0")
    a = np.asarray(alpha_mag, dtype=float)
    x = a * np.cos(theta)
    f1 = a * a - x * x + 0.5
    f2 = a * a - x * x + 1.0
    val = (
        np.exp(x * x - a * a) * x * math.sqrt(math.pi) * (1.0 + erf(x)) * f1
        + np.exp(-a * a) * f2
    ) / (2.0 * math.pi)
    return float(val) if np.ndim(val) == 0 else val


def beta_moments(qf: QField, g: PhaseSpaceGrid, s: int) -> float:
    """``<|beta|^s>`` under Q, for ``s`` in {1, 2}."""
    if s not in (1, 2):
        raise InvalidParameterError(f"moment order must be 1 or 2, got {s}")
    r, _ = g.mesh()
    return integrate(g, r**s * qf.q)


def delta_sq(qf: QField, g: PhaseSpaceGrid) -> float:
    """Variance of ``|beta|`` under Q."""
    return beta_moments(qf, g, 2) - beta_moments(qf, g, 1) ** 2


def cr_product(qf: QField, g: PhaseSpaceGrid, i_f: float | None = None) -> float:
    i_f = fisher_information(qf, g) if i_f is None else i_f
    return i_f * delta_sq(qf, g)


def _central_diff4(f, dx):
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * dx)
    d[:2] = np.gradient(f[:4], dx, edge_order=2)[:2]
    d[-2:] = np.gradient(f[-4:], dx, edge_order=2)[-2:]
    return d


def marginal_density(qf: QField, g: PhaseSpaceGrid, axis: int, n_points: int = MARGINAL_POINTS):
    """1-D marginal of Q along ``X_axis`` on a uniform grid over ``[-r_max, r_max]``.

    The other coordinate is integrated out by Gauss-Legendre quadrature with
    ``g.n_r`` nodes on the same interval.  Returns ``(x, f)``.
    """
    if axis not in (1, 2):
        raise InvalidParameterError(f"axis must be 1 or 2, got {axis}")
    if qf.state is None:
        raise InvalidParameterError("QField carries no state; resample with sample_qfield")
    L = g.r_max
    x = np.linspace(-L, L, n_points)
    y, w = leggauss(g.n_r)
    y = L * y
    w = L * w
    xx, yy = np.meshgrid(x, y, indexing="ij")
    if axis == 1:
        q, _, _ = husimi_on_points(qf.state, xx, yy)
    else:
        q, _, _ = husimi_on_points(qf.state, yy, xx)
    return x, q @ w


def marginal_cr_check(qf: QField, g: PhaseSpaceGrid, axis: int) -> tuple[float, float, float]:
    """``(variance, Fisher information, product)`` of the 1-D marginal along ``X_axis``.

    The marginal Fisher information uses fourth-order central differences
    of the sampled marginal; the product is bounded below by 1.
    """
    x, f = marginal_density(qf, g, axis)
    dx = x[1] - x[0]
    mass = trapezoid(f, x)
    mean = trapezoid(x * f, x) / mass
    var = trapezoid((x - mean) ** 2 * f, x) / mass
    df = _central_diff4(f, dx)
    ok = f >= GUARD_REL * f.max()
    fi = trapezoid(np.where(ok, df**2 / np.where(ok, f, 1.0), 0.0), x) / mass
    return float(var), float(fi), float(var * fi)


def measure_record(qf: QField, g: PhaseSpaceGrid) -> MeasureRecord:
    """All quantifiers for one sampled time."""
    vp = marginal_stats(qf, g)
    dens = _fisher_density(qf, vp)
    i_f = integrate(g, dens)
    d2 = delta_sq(qf, g)
    return MeasureRecord(
        t_scaled=qf.t_scaled,
        s_w=wehrl_entropy(qf, g),
        i_f=i_f,
        s_theta=wehrl_pd(qf, g),
        i_theta=radial_integrate(g, dens),
        variances=vp,
        delta_sq=d2,
        cr_product=i_f * d2,
    )


def initial_identities(
    alpha_mag: float,
    n_r: int = DEFAULT_N_R,
    n_theta: int = DEFAULT_N_THETA,
    tail_tol: float = 1e-12,
) -> dict:
    """Numerical check of the t=0 Fisher-Wehrl relations.

    ``fisher_wehrl_residual`` is ``I_F(0) - (S_W(0) + 1 - ln pi)`` and must vanish.
    The phase-density relation and the ``I_F - I_theta`` claim are only
    reported, as ``phase_density_residual_*`` and ``if_minus_itheta_at_0``.
    """
    cfg = ModelConfig(alpha_mag=alpha_mag, tail_tol=tail_tol)
    g = build_grid(cfg, n_r, n_theta)
    qf = sample_qfield(evolve_closed_form(cfg, 0.0), g)
    rec = measure_record(qf, g)
    theta = g.theta_nodes
    x = alpha_mag * np.cos(theta)
    closed = initial_fisher_pd_closed_form(alpha_mag, theta)
    correction = (
        math.log(math.pi) / (2 * math.pi) * math.exp(-alpha_mag**2)
        * (1.0 + x * math.sqrt(math.pi) * (1.0 + erf(x)) * np.exp(x * x))
    )
    rhs_pd = rec.s_theta - correction
    return {
        "alpha": alpha_mag,
        "i_f": rec.i_f,
        "s_w": rec.s_w,
        "fisher_wehrl_residual": rec.i_f - (rec.s_w + 1.0 - math.log(math.pi)),
        "phase_density_residual_closed_form": float(np.max(np.abs(closed - rhs_pd))),
        "phase_density_residual_numeric": float(np.max(np.abs(rec.i_theta - rhs_pd))),
        "fisher_pd_vs_closed_form": float(np.max(np.abs(rec.i_theta - closed))),
        "if_minus_itheta_at_0": rec.i_f - float(rec.i_theta[0]) - (1.0 - math.log(math.pi)),
    }
