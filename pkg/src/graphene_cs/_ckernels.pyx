# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``.

Same signatures and results as ``_pykernels``.  The spinor field evaluation
is fused with the Hermite recurrence so no ``(M, G)`` table is allocated.
``bilinear_sum`` is not compiled: its numpy form is a BLAS matrix product,
which a scalar loop does not beat.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, log, fabs, M_PI

cnp.import_array()

cdef double _BIG = 1e150
cdef double _INV_BIG = 1e-150


def hermite_table(Py_ssize_t nmax, xi):
    cdef const double[::1] x = np.ascontiguousarray(xi, dtype=np.float64).ravel()
    cdef Py_ssize_t npts = x.shape[0]
    out_arr = np.empty((nmax + 1, npts), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] prev = np.zeros(npts)
    cdef double[::1] cur = np.ones(npts)
    cdef double[::1] factor = np.empty(npts)
    cdef Py_ssize_t j, n
    cdef double a, b, nxt
    cdef double log_pi_q = -0.25 * log(M_PI)
    for j in range(npts):
        # factor = exp(log-scale); it only changes on a rescale
        factor[j] = exp(-0.5 * x[j] * x[j] + log_pi_q)
        out[0, j] = factor[j]
    for n in range(nmax):
        a = sqrt(2.0 / (n + 1))
        b = sqrt(n / (n + 1.0))
        for j in range(npts):
            nxt = a * x[j] * cur[j] - b * prev[j]
            if fabs(nxt) > _BIG:
                nxt *= _INV_BIG
                cur[j] *= _INV_BIG
                factor[j] *= _BIG
            prev[j] = cur[j]
            cur[j] = nxt
            out[n + 1, j] = nxt * factor[j]
    return out_arr


def spinor_fields(upper, lower, xi):
    cdef const double complex[::1] cu = np.ascontiguousarray(upper, dtype=np.complex128)
    cdef const double complex[::1] cl = np.ascontiguousarray(lower, dtype=np.complex128)
    cdef const double[::1] x = np.ascontiguousarray(xi, dtype=np.float64).ravel()
    cdef Py_ssize_t nmax = cu.shape[0] - 1
    cdef Py_ssize_t npts = x.shape[0]
    if cl.shape[0] != cu.shape[0]:
        raise ValueError("upper and lower must have the same length")
    u_arr = np.empty(npts, dtype=np.complex128)
    l_arr = np.empty(npts, dtype=np.complex128)
    du_arr = np.empty(npts, dtype=np.complex128)
    dl_arr = np.empty(npts, dtype=np.complex128)
    cdef double complex[::1] u = u_arr
    cdef double complex[::1] l = l_arr
    cdef double complex[::1] du = du_arr
    cdef double complex[::1] dl = dl_arr
    cdef double[::1] a = np.empty(nmax + 1)
    cdef double[::1] b = np.empty(nmax + 1)
    cdef double[::1] s = np.empty(nmax + 1)
    cdef Py_ssize_t j, n
    cdef double logs, prev, cur, nxt, xj, scale
    cdef double complex su, sl, sdu, sdl
    cdef double log_big = log(_BIG)
    cdef double log_pi_q = -0.25 * log(M_PI)
    for n in range(nmax + 1):
        a[n] = sqrt(2.0 / (n + 1))
        b[n] = sqrt(n / (n + 1.0))
        s[n] = sqrt(2.0 * n)
    for j in range(npts):
        xj = x[j]
        logs = -0.5 * xj * xj + log_pi_q
        prev = 0.0
        cur = 1.0
        # running sums are kept in the same scaled units as cur
        su = cu[0] * cur
        sl = cl[0] * cur
        sdu = -xj * su
        sdl = -xj * sl
        for n in range(nmax):
            nxt = a[n] * xj * cur - b[n] * prev
            if fabs(nxt) > _BIG:
                nxt *= _INV_BIG
                cur *= _INV_BIG
                su *= _INV_BIG
                sl *= _INV_BIG
                sdu *= _INV_BIG
                sdl *= _INV_BIG
                logs += log_big
            prev = cur
            cur = nxt
            su += cu[n + 1] * cur
            sl += cl[n + 1] * cur
            sdu += cu[n + 1] * (s[n + 1] * prev - xj * cur)
            sdl += cl[n + 1] * (s[n + 1] * prev - xj * cur)
        scale = exp(logs)
        u[j] = su * scale
        l[j] = sl * scale
        du[j] = sdu * scale
        dl[j] = sdl * scale
    return u_arr, l_arr, du_arr, dl_arr
