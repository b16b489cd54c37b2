# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Husimi kernels.

Each branch amplitude ``A(beta) = exp(-|beta|^2/2) sum_n v[n] conj(beta)^n / sqrt(n!)``
is accumulated with the forward recurrence
``t_n = t_{n-1} * conj(beta) / sqrt(n)``, ``t_0 = exp(-|beta|^2/2)``, which
keeps every partial term in range without forming powers or factorials.
Complex arithmetic is spelled out on (re, im) pairs.
"""
import numpy as np
from libc.math cimport exp, fabs, M_PI


cdef inline void _branch(const double *vr, const double *vi, const double *inv_sqrt,
                         const double *sqrt_n, Py_ssize_t nlev, double x1, double x2,
                         double *out) noexcept nogil:
    # out = [Re A, Im A, Re D, Im D] with D = exp(-|beta|^2/2) S'(conj beta)
    cdef double tr = exp(-0.5 * (x1 * x1 + x2 * x2)), ti = 0.0
    cdef double ar = vr[0] * tr, ai = vi[0] * tr
    cdef double dr = 0.0, di = 0.0, s, nr, ni
    cdef Py_ssize_t n
    for n in range(1, nlev):
        s = sqrt_n[n]
        dr += s * (vr[n] * tr - vi[n] * ti)
        di += s * (vr[n] * ti + vi[n] * tr)
        # t *= (x1 - i x2) / sqrt(n)
        s = inv_sqrt[n]
        nr = (tr * x1 + ti * x2) * s
        ni = (ti * x1 - tr * x2) * s
        tr = nr
        ti = ni
        ar += vr[n] * tr - vi[n] * ti
        ai += vr[n] * ti + vi[n] * tr
    out[0] = ar
    out[1] = ai
    out[2] = dr
    out[3] = di


def _tables(Py_ssize_t nlev):
    n = np.arange(nlev, dtype=np.float64)
    sqrt_n = np.sqrt(n)
    inv_sqrt = np.zeros(nlev)
    inv_sqrt[1:] = 1.0 / sqrt_n[1:]
    return inv_sqrt, sqrt_n


def _split(v):
    v = np.asarray(v, dtype=np.complex128)
    return np.ascontiguousarray(v.real), np.ascontiguousarray(v.imag)


def branch_amplitudes(v, const double[::1] x1, const double[::1] x2):
    """Return ``(A, exp(-|beta|^2/2) S'(conj beta))`` at every node."""
    cdef Py_ssize_t m = x1.shape[0], i
    vr_a, vi_a = _split(v)
    cdef Py_ssize_t nlev = vr_a.shape[0]
    inv_a, sq_a = _tables(nlev)
    cdef const double[::1] vr = vr_a
    cdef const double[::1] vi = vi_a
    cdef const double[::1] inv_sqrt = inv_a
    cdef const double[::1] sqrt_n = sq_a
    out_a = np.empty((m, 4))
    cdef double[:, ::1] out = out_a
    with nogil:
        for i in range(m):
            _branch(&vr[0], &vi[0], &inv_sqrt[0], &sqrt_n[0], nlev, x1[i], x2[i], &out[i, 0])
    return out_a[:, 0] + 1j * out_a[:, 1], out_a[:, 2] + 1j * out_a[:, 3]


cdef inline void _two_branches(const double *ur, const double *ui, const double *lr,
                               const double *li, const double *inv_sqrt,
                               const double *sqrt_n, Py_ssize_t nlev, double x1, double x2,
                               double *bu, double *bl) noexcept nogil:
    # both branches share the term recurrence; layout as in _branch
    cdef double tr = exp(-0.5 * (x1 * x1 + x2 * x2)), ti = 0.0
    cdef double uar = ur[0] * tr, uai = ui[0] * tr, udr = 0.0, udi = 0.0
    cdef double lar = lr[0] * tr, lai = li[0] * tr, ldr = 0.0, ldi = 0.0
    cdef double s, nr, ni
    cdef Py_ssize_t n
    for n in range(1, nlev):
        s = sqrt_n[n]
        udr += s * (ur[n] * tr - ui[n] * ti)
        udi += s * (ur[n] * ti + ui[n] * tr)
        ldr += s * (lr[n] * tr - li[n] * ti)
        ldi += s * (lr[n] * ti + li[n] * tr)
        s = inv_sqrt[n]
        nr = (tr * x1 + ti * x2) * s
        ni = (ti * x1 - tr * x2) * s
        tr = nr
        ti = ni
        uar += ur[n] * tr - ui[n] * ti
        uai += ur[n] * ti + ui[n] * tr
        lar += lr[n] * tr - li[n] * ti
        lai += lr[n] * ti + li[n] * tr
    bu[0] = uar
    bu[1] = uai
    bu[2] = udr
    bu[3] = udi
    bl[0] = lar
    bl[1] = lai
    bl[2] = ldr
    bl[3] = ldi


def husimi_sample(upper, lower, const double[::1] x1, const double[::1] x2):
    """Husimi value and Cartesian gradient at every node ``x1 + i*x2``."""
    cdef Py_ssize_t m = x1.shape[0], i
    ur_a, ui_a = _split(upper)
    lr_a, li_a = _split(lower)
    cdef Py_ssize_t nlev = ur_a.shape[0]
    inv_a, sq_a = _tables(nlev)
    cdef const double[::1] ur = ur_a
    cdef const double[::1] ui = ui_a
    cdef const double[::1] lr = lr_a
    cdef const double[::1] li = li_a
    cdef const double[::1] inv_sqrt = inv_a
    cdef const double[::1] sqrt_n = sq_a
    q_a = np.empty(m)
    g1_a = np.empty(m)
    g2_a = np.empty(m)
    cdef double[::1] q = q_a
    cdef double[::1] g1 = g1_a
    cdef double[::1] g2 = g2_a
    cdef double bu[4]
    cdef double bl[4]
    cdef double qa, xa, xb, re_ad, im_ad
    with nogil:
        for i in range(m):
            xa = x1[i]
            xb = x2[i]
            _two_branches(&ur[0], &ui[0], &lr[0], &li[0], &inv_sqrt[0], &sqrt_n[0],
                          nlev, xa, xb, bu, bl)
            qa = bu[0] * bu[0] + bu[1] * bu[1] + bl[0] * bl[0] + bl[1] * bl[1]
            # Re(conj(A) D) and Im(conj(A) D), summed over branches
            re_ad = bu[0] * bu[2] + bu[1] * bu[3] + bl[0] * bl[2] + bl[1] * bl[3]
            im_ad = bu[0] * bu[3] - bu[1] * bu[2] + bl[0] * bl[3] - bl[1] * bl[2]
            q[i] = qa / M_PI
            # dA/dX1 = -X1 A + D ; dA/dX2 = -X2 A - i D
            g1[i] = 2.0 / M_PI * (-xa * qa + re_ad)
            g2[i] = 2.0 / M_PI * (-xb * qa + im_ad)
    return q_a, g1_a, g2_a


def compensated_sum(const double[::1] x):
    """Neumaier-compensated sum in index order."""
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double s = 0.0, c = 0.0, t, v
    with nogil:
        for i in range(m):
            v = x[i]
            t = s + v
            if fabs(s) >= fabs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
    return s + c
