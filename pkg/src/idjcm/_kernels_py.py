"""Pure numpy implementation of the Husimi kernels.

Terms ``conj(beta)^n / sqrt(n!) * exp(-|beta|^2/2)`` are formed from their
log-magnitude and phase, so no intermediate overflows.  Nodes are processed
in chunks to bound the ``nodes x levels`` temporaries.
"""
import math

import numpy as np
from scipy.special import gammaln

_CHUNK = 4096


def _terms(x1, x2, nlev):
    n = np.arange(nlev)
    r2 = x1 * x1 + x2 * x2
    theta = np.arctan2(x2, x1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_r = 0.5 * np.log(r2)
        log_mag = np.outer(log_r, n) - 0.5 * gammaln(n + 1) - 0.5 * r2[:, None]
    log_mag[:, 0] = -0.5 * r2
    log_mag[~np.isfinite(log_mag)] = -np.inf
    return np.exp(log_mag) * np.exp(-1j * np.outer(theta, n))


def branch_amplitudes(v, x1, x2):
    v = np.ascontiguousarray(v, dtype=complex)
    x1 = np.ascontiguousarray(x1, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    nlev = len(v)
    dv = v[1:] * np.sqrt(np.arange(1, nlev))
    amp = np.empty(len(x1), dtype=complex)
    damp = np.empty(len(x1), dtype=complex)
    for s in range(0, len(x1), _CHUNK):
        t = _terms(x1[s:s + _CHUNK], x2[s:s + _CHUNK], nlev)
        amp[s:s + _CHUNK] = t @ v
        damp[s:s + _CHUNK] = t[:, :-1] @ dv
    return amp, damp


def husimi_sample(upper, lower, x1, x2):
    x1 = np.ascontiguousarray(x1, dtype=float)
    x2 = np.ascontiguousarray(x2, dtype=float)
    au, du = branch_amplitudes(upper, x1, x2)
    al, dl = branch_amplitudes(lower, x1, x2)
    qa = np.abs(au) ** 2 + np.abs(al) ** 2
    q = qa / np.pi
    g1 = 2.0 / np.pi * (-x1 * qa + np.real(au.conj() * du) + np.real(al.conj() * dl))
    g2 = 2.0 / np.pi * (-x2 * qa + np.real(au.conj() * (-1j * du)) + np.real(al.conj() * (-1j * dl)))
    return q, g1, g2


def compensated_sum(x):
    # exactly rounded; the compiled path uses Neumaier summation
    return math.fsum(x)
