# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled element-summation kernels. Panel lies in the z = 0 plane.

Output points are split across OpenMP threads; each point's sum runs in a
fixed element order, so results do not depend on the thread count.
"""

import numpy as np
from cython.parallel cimport prange
from libc.math cimport cos, sin, sqrt


def cascade_sum(const double[::1] ex, const double[::1] ey, const double[::1] amp,
                const double[::1] phase, double k, const double[::1] src,
                const double[:, ::1] dests):
    cdef Py_ssize_t n_el = ex.shape[0]
    cdef Py_ssize_t n_pt = dests.shape[0]
    cdef Py_ssize_t n, m
    cdef double dx, dy, dz, r2, arg, re, im
    cdef double[::1] base = np.empty(n_el)
    cdef double[::1] out_re = np.empty(n_pt)
    cdef double[::1] out_im = np.empty(n_pt)
    for n in range(n_el):
        dx = ex[n] - src[0]
        dy = ey[n] - src[1]
        base[n] = phase[n] - k * sqrt(dx * dx + dy * dy + src[2] * src[2])
    for m in prange(n_pt, nogil=True, schedule="static"):
        re = 0.0
        im = 0.0
        dz = dests[m, 2]
        for n in range(n_el):
            dx = ex[n] - dests[m, 0]
            dy = ey[n] - dests[m, 1]
            r2 = sqrt(dx * dx + dy * dy + dz * dz)
            arg = base[n] - k * r2
            re = re + amp[n] * cos(arg)
            im = im + amp[n] * sin(arg)
        out_re[m] = re
        out_im[m] = im
    return np.asarray(out_re) + 1j * np.asarray(out_im)


def plane_wave_sum(const double[::1] ex, const double[::1] ey, const double[::1] amp,
                   const double[::1] phase, double k, const double[:, ::1] dirs):
    cdef Py_ssize_t n_el = ex.shape[0]
    cdef Py_ssize_t n_pt = dirs.shape[0]
    cdef Py_ssize_t n, m
    cdef double ux, uy, arg, re, im
    cdef double[::1] out_re = np.empty(n_pt)
    cdef double[::1] out_im = np.empty(n_pt)
    for m in prange(n_pt, nogil=True, schedule="static"):
        ux = k * dirs[m, 0]
        uy = k * dirs[m, 1]
        re = 0.0
        im = 0.0
        for n in range(n_el):
            arg = phase[n] + ux * ex[n] + uy * ey[n]
            re = re + amp[n] * cos(arg)
            im = im + amp[n] * sin(arg)
        out_re[m] = re
        out_im[m] = im
    return np.asarray(out_re) + 1j * np.asarray(out_im)
