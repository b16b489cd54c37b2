"""Husimi Q-function of the cavity field on a polar quadrature grid.

Conventions: ``beta = X1 + i*X2`` (so ``d^2 beta = dX1 dX2``) and
``<beta|n> = exp(-|beta|^2/2) conj(beta)^n / sqrt(n!)``.  With these the
Husimi function of a coherent state ``|alpha>`` is
``exp(-|beta - alpha|^2) / pi`` and both quadrature variances equal 1/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss

from . import kernels
from .errors import ConfigurationError, GridCoverageError, InvalidParameterError
from .model import JointStateBranches, ModelConfig

DEFAULT_N_R = 200
DEFAULT_N_THETA = 256
MIN_N_R = 16
MIN_N_THETA = 32
R_MARGIN = 4.0

NORM_WARN = 1e-8
NORM_FAIL = 1e-6


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Gauss-Legendre radial nodes on ``[0, r_max]`` times uniform angles."""

    r_nodes: np.ndarray
    r_weights: np.ndarray
    theta_nodes: np.ndarray
    theta_weight: float
    r_max: float

    @property
    def n_r(self) -> int:
        return len(self.r_nodes)

    @property
    def n_theta(self) -> int:
        return len(self.theta_nodes)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_r, self.n_theta)

    @cached_property
    def _mesh(self):
        r, th = np.meshgrid(self.r_nodes, self.theta_nodes, indexing="ij")
        return r, th, r * np.cos(th), r * np.sin(th)

    def mesh(self):
        """``(r, theta)`` arrays of shape ``(n_r, n_theta)``."""
        return self._mesh[:2]

    def cartesian(self):
        """``(X1, X2)`` arrays of shape ``(n_r, n_theta)``."""
        return self._mesh[2:]

    def radial_measure(self) -> np.ndarray:
        """Per-ring factor ``r_i * w_i`` of the ``|beta| d|beta|`` measure."""
        return self.r_nodes * self.r_weights


@dataclass
class QField:
    """Husimi values and Cartesian gradients sampled on a grid."""

    q: np.ndarray
    grad_x1: np.ndarray
    grad_x2: np.ndarray
    norm: float
    t_scaled: float
    state: JointStateBranches | None = field(default=None, repr=False)

    @property
    def well_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= NORM_WARN


def make_grid(r_max: float, n_r: int = DEFAULT_N_R, n_theta: int = DEFAULT_N_THETA) -> PhaseSpaceGrid:
    if n_r < MIN_N_R or n_theta < MIN_N_THETA:
        raise ConfigurationError(
            f"grid {n_r}x{n_theta} below quadrature floor {MIN_N_R}x{MIN_N_THETA}"
        )
    if not r_max > 0:
        raise ConfigurationError(f"r_max must be positive, got {r_max}")
    x, w = leggauss(n_r)
    r_nodes = 0.5 * r_max * (x + 1.0)
    r_weights = 0.5 * r_max * w
    theta_nodes = 2.0 * np.pi * np.arange(n_theta) / n_theta
    return PhaseSpaceGrid(r_nodes, r_weights, theta_nodes, 2.0 * np.pi / n_theta, float(r_max))


def build_grid(cfg: ModelConfig, n_r: int = DEFAULT_N_R, n_theta: int = DEFAULT_N_THETA) -> PhaseSpaceGrid:
    """Grid with ``r_max = sqrt(N_max) + 4`` for the configuration's truncation."""
    return make_grid(math.sqrt(cfg.truncation()) + R_MARGIN, n_r, n_theta)


def coherent_overlap(beta: complex, v: np.ndarray) -> complex:
    """``<beta|v>`` for a Fock amplitude vector ``v``."""
    beta = complex(beta)
    if not (math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise InvalidParameterError(f"beta must be finite, got {beta}")
    amp, _ = kernels.branch_amplitudes(
        np.ascontiguousarray(v, dtype=complex), np.array([beta.real]), np.array([beta.imag])
    )
    return complex(amp[0])


def _sample_points(s: JointStateBranches, x1, x2):
    x1 = np.ascontiguousarray(np.ravel(x1), dtype=float)
    x2 = np.ascontiguousarray(np.ravel(x2), dtype=float)
    return kernels.husimi_sample(
        np.ascontiguousarray(s.upper, dtype=complex),
        np.ascontiguousarray(s.lower, dtype=complex),
        x1,
        x2,
    )


def husimi_q(beta: complex, s: JointStateBranches) -> float:
    """Field Husimi ``(|<beta|upper>|^2 + |<beta|lower>|^2) / pi`` (atom traced out)."""
    beta = complex(beta)
    q, _, _ = _sample_points(s, [beta.real], [beta.imag])
    return float(q[0])


def husimi_gradient(beta: complex, s: JointStateBranches) -> tuple[float, float]:
    """Analytic ``(dQ/dX1, dQ/dX2)`` at ``beta``."""
    beta = complex(beta)
    _, g1, g2 = _sample_points(s, [beta.real], [beta.imag])
    return float(g1[0]), float(g2[0])


def husimi_on_points(s: JointStateBranches, x1, x2):
    """Vectorised ``(Q, dQ/dX1, dQ/dX2)`` at arbitrary Cartesian points."""
    shape = np.shape(x1)
    q, g1, g2 = _sample_points(s, x1, x2)
    return q.reshape(shape), g1.reshape(shape), g2.reshape(shape)


def integrate(g: PhaseSpaceGrid, f) -> float:
    """``sum_ij f(r_i, theta_j) r_i w_i dtheta``, compensated sum in ascending (i, j) order."""
    f = np.asarray(f, dtype=float)
    if f.shape != g.shape:
        raise InvalidParameterError(f"integrand shape {f.shape} does not match grid {g.shape}")
    terms = f * g.radial_measure()[:, None]
    return kernels.compensated_sum(np.ascontiguousarray(terms.ravel())) * g.theta_weight


def radial_integrate(g: PhaseSpaceGrid, f) -> np.ndarray:
    """Radial integral at each angle: ``sum_i f(r_i, theta_j) r_i w_i``."""
    f = np.asarray(f, dtype=float)
    if f.shape != g.shape:
        raise InvalidParameterError(f"integrand shape {f.shape} does not match grid {g.shape}")
    return g.radial_measure() @ f


def sample_qfield(s: JointStateBranches, g: PhaseSpaceGrid) -> QField:
    """Sample Q and its gradient on every grid node and check normalisation."""
    x1, x2 = g.cartesian()
    q, g1, g2 = husimi_on_points(s, x1, x2)
    norm = integrate(g, q)
    if abs(norm - 1.0) > NORM_FAIL:
        raise GridCoverageError(
            f"Husimi normalisation {norm:.12f} at T={s.t_scaled:g} deviates by more than "
            f"{NORM_FAIL:g}; increase r_max (now {g.r_max:.3f}) or n_r (now {g.n_r})"
        )
    return QField(q, g1, g2, norm, s.t_scaled, s)
