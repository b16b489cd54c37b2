"""Buck-Sukumar (intensity-dependent) Jaynes-Cummings dynamics.

The atom starts in its upper level and the field in a coherent state
``|alpha>``.  With coupling ``f(n) = sqrt(n)`` the interaction only links
``|upper, n>`` to ``|lower, n+1>`` with matrix element ``lambda*(n+1)``, so
every two-level block rotates at an integer frequency and the joint state is
exactly periodic in the scaled time ``T = lambda*t`` with period ``2*pi``.

All dynamics are in the interaction picture at resonance; ``omega_f`` and
``omega_a`` are carried on :class:`ModelConfig` but never enter the
propagator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Union

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln, pdtrc

from .errors import InvalidParameterError, TruncationError

MIN_TRUNCATION = 16


@dataclass(frozen=True)
class ModelConfig:
    """Physical parameters plus the Fock-space truncation controls."""

    alpha_mag: float = 1.0
    alpha_phase: float = 0.0
    coupling: float = 1.0
    omega_f: float = 1.0
    omega_a: float = 1.0
    n_max: Union[int, Literal["auto"]] = "auto"
    tail_tol: float = 1e-12

    def __post_init__(self):
        if not (self.alpha_mag >= 0 and math.isfinite(self.alpha_mag)):
            raise InvalidParameterError(f"alpha_mag must be >= 0, got {self.alpha_mag}")
        if not math.isfinite(self.alpha_phase):
            raise InvalidParameterError("alpha_phase must be finite")
        if not self.coupling > 0:
            raise InvalidParameterError(f"coupling must be > 0, got {self.coupling}")
        if not 0 < self.tail_tol < 1:
            raise InvalidParameterError(f"tail_tol must lie in (0, 1), got {self.tail_tol}")
        if self.n_max != "auto":
            if isinstance(self.n_max, bool) or not isinstance(self.n_max, (int, np.integer)):
                raise InvalidParameterError(f"n_max must be a positive integer or 'auto', got {self.n_max!r}")
            if self.n_max < 1:
                raise InvalidParameterError(f"n_max must be >= 1, got {self.n_max}")

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))

    def truncation(self) -> int:
        """Resolved ``N_max`` (explicit value or the automatic rule)."""
        if self.n_max == "auto":
            return choose_truncation(self.alpha_mag, self.tail_tol)
        return int(self.n_max)

    def with_alpha(self, alpha_mag: float) -> "ModelConfig":
        return replace(self, alpha_mag=float(alpha_mag))

    def time_from_scaled(self, t_scaled: float) -> float:
        """Physical time corresponding to ``T = lambda*t``."""
        return t_scaled / self.coupling


@dataclass(frozen=True)
class JointStateBranches:
    """Pure atom-field state ``|upper>|u> + |lower>|l>``.

    ``upper`` and ``lower`` are Fock-basis amplitude arrays of equal length
    ``N_max + 1``.
    """

    upper: np.ndarray
    lower: np.ndarray
    t_scaled: float

    @property
    def n_max(self) -> int:
        return len(self.upper) - 1

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.upper) ** 2) + np.sum(np.abs(self.lower) ** 2))


def choose_truncation(alpha_mag: float, tail_tol: float = 1e-12) -> int:
    """Smallest ``N`` whose Poisson tail beyond ``N`` is below ``tail_tol``, plus one.

    The extra level absorbs the ``|n> -> |n+1>`` shift on the lower branch.
    Never returns less than ``MIN_TRUNCATION``.
    """
    if not 0 < tail_tol < 1:
        raise InvalidParameterError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    if alpha_mag < 0:
        raise InvalidParameterError(f"alpha_mag must be >= 0, got {alpha_mag}")
    mean = alpha_mag * alpha_mag
    n = 0
    # pdtrc(n, mu) = P(X > n) for X ~ Poisson(mu)
    while mean > 0 and pdtrc(n, mean) >= tail_tol:
        n += 1
    return max(n + 1, MIN_TRUNCATION)


def coherent_amplitudes(alpha_mag: float, alpha_phase: float, n_max: int) -> np.ndarray:
    """Fock amplitudes ``alpha^n exp(-|alpha|^2/2) / sqrt(n!)`` for ``n = 0..n_max``.

    Magnitudes are built in log space so large ``n`` neither overflows nor
    loses precision.
    """
    if alpha_mag < 0:
        raise InvalidParameterError(f"alpha_mag must be >= 0, got {alpha_mag}")
    if n_max < 0:
        raise InvalidParameterError(f"n_max must be >= 0, got {n_max}")
    n = np.arange(n_max + 1)
    amps = np.zeros(n_max + 1, dtype=complex)
    if alpha_mag == 0:
        amps[0] = 1.0
        return amps
    log_mag = n * math.log(alpha_mag) - 0.5 * gammaln(n + 1) - 0.5 * alpha_mag**2
    return np.exp(log_mag) * np.exp(1j * alpha_phase * n)


def initial_state(cfg: ModelConfig) -> JointStateBranches:
    n_max = cfg.truncation()
    upper = coherent_amplitudes(cfg.alpha_mag, cfg.alpha_phase, n_max)
    return JointStateBranches(upper, np.zeros(n_max + 1, dtype=complex), 0.0)


def evolve_closed_form(cfg: ModelConfig, t_scaled: float) -> JointStateBranches:
    """Exact evolution ``exp(-i H_I t)`` acting on ``|upper>|alpha>``.

    ``upper[n] = C_n cos((n+1)T)`` and ``lower[m] = -i C_{m-1} sin(mT)``.
    """
    n_max = cfg.truncation()
    c = coherent_amplitudes(cfg.alpha_mag, cfg.alpha_phase, n_max)
    n = np.arange(n_max + 1)
    upper = c * np.cos((n + 1) * t_scaled)
    lower = np.zeros(n_max + 1, dtype=complex)
    lower[1:] = -1j * c[:-1] * np.sin(n[1:] * t_scaled)
    return JointStateBranches(upper, lower, float(t_scaled))


def interaction_hamiltonian(n_max: int) -> np.ndarray:
    """Dense ``H_I / lambda`` on the ``2(n_max+1)`` space, upper block first.

    Built from the ladder operators themselves (``psi = a sqrt(a^dag a)``)
    rather than from the known matrix elements.
    """
    dim = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1)
    sqrt_n = np.diag(np.sqrt(np.arange(dim)))
    psi = a @ sqrt_n
    psi_dag = psi.conj().T
    h = np.zeros((2 * dim, 2 * dim), dtype=complex)
    # |lower><upper| psi^dag + |upper><lower| psi
    h[dim:, :dim] = psi_dag
    h[:dim, dim:] = psi
    return h


def evolve_brute_force(cfg: ModelConfig, t_scaled: float) -> JointStateBranches:
    """Reference evolution by dense matrix exponential of the truncated ``H_I``.

    Only meant as a validation oracle; cost is cubic in ``n_max``.
    """
    n_max = cfg.truncation()
    tail = float(pdtrc(n_max, cfg.alpha_mag**2)) if cfg.alpha_mag > 0 else 0.0
    if tail > cfg.tail_tol:
        raise TruncationError(
            f"n_max={n_max} leaves Poisson tail {tail:.3e} > tail_tol={cfg.tail_tol:.1e}"
        )
    dim = n_max + 1
    psi0 = np.zeros(2 * dim, dtype=complex)
    psi0[:dim] = coherent_amplitudes(cfg.alpha_mag, cfg.alpha_phase, n_max)
    psi_t = expm(-1j * t_scaled * interaction_hamiltonian(n_max)) @ psi0
    return JointStateBranches(psi_t[:dim].copy(), psi_t[dim:].copy(), float(t_scaled))


def state_fidelity(a: JointStateBranches, b: JointStateBranches) -> float:
    """``|<a|b>|^2`` for two joint states of the same truncation."""
    if a.upper.shape != b.upper.shape or a.lower.shape != b.lower.shape:
        raise InvalidParameterError(
            f"truncation mismatch: {a.upper.shape[0]} vs {b.upper.shape[0]} levels"
        )
    # ascending-n accumulation, upper branch then lower
    overlap = complex(np.dot(a.upper.conj(), b.upper)) + complex(np.dot(a.lower.conj(), b.lower))
    return abs(overlap) ** 2
