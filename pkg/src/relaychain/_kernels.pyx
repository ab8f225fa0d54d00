# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``_kernels_py``."""
import numpy as np

from libc.math cimport log, log1p, sqrt

from .errors import NotPositiveDefinite

cdef double _HALF_LOG2 = 0.5 / log(2.0)


def cholesky(a, double pivot_tol=1e-14):
    cdef const double[:, ::1] A = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t n = A.shape[0], i, j, k
    L_arr = np.zeros((n, n))
    cdef double[:, ::1] L = L_arr
    cdef double s, t, d
    for j in range(n):
        s = A[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if not s > pivot_tol:
            raise NotPositiveDefinite(f"pivot {j} is {s!r} (tolerance {pivot_tol})")
        d = sqrt(s)
        L[j, j] = d
        for i in range(j + 1, n):
            t = A[i, j]
            for k in range(j):
                t -= L[i, k] * L[j, k]
            L[i, j] = t / d
    return L_arr


def log_det(a, double pivot_tol=1e-14):
    L = cholesky(a, pivot_tol)
    cdef double[:, ::1] Lv = L
    cdef double acc = 0.0
    cdef Py_ssize_t i
    for i in range(Lv.shape[0]):
        acc += log(Lv[i, i])
    return 2.0 * acc


def min_rate_grid(double h1_sq, double h2_sq, double h3_sq,
                  double rho12, double rho13, double rho23, q1, q2):
    cdef const double[::1] Q1 = np.ascontiguousarray(q1, dtype=np.float64)
    cdef const double[::1] Q2 = np.ascontiguousarray(q2, dtype=np.float64)
    cdef Py_ssize_t n1 = Q1.shape[0], n2 = Q2.shape[0], i, j
    out_arr = np.empty((n1, n2))
    cdef double[:, ::1] out = out_arr
    cdef double s23 = 1.0 - rho23 * rho23
    cdef double s13 = 1.0 - rho13 * rho13
    cdef double b = rho12 - rho13 * rho23
    cdef double e3 = 1.0 + h3_sq
    cdef double c3 = _HALF_LOG2 * log1p(h3_sq)
    cdef double a, c, bb, k_beta, x1, x2, x3, det2
    # r2 splits into a q2-only gain and a q1-only penalty
    gain_arr = np.empty(n2)
    gain_lin_arr = np.empty(n2)
    pen_arr = np.empty(n1)
    pen_lin_arr = np.empty(n1)
    cdef double[::1] gain = gain_arr, gain_lin = gain_lin_arr
    cdef double[::1] pen = pen_arr, pen_lin = pen_lin_arr
    for j in range(n2):
        gain_lin[j] = h2_sq / (1.0 + Q2[j] - rho23 * rho23)
        gain[j] = _HALF_LOG2 * log1p(gain_lin[j])
    for i in range(n1):
        pen_lin[i] = s13 / Q1[i]
        pen[i] = _HALF_LOG2 * log1p(pen_lin[i])
    for i in range(n1):
        a = Q1[i]
        for j in range(n2):
            c = Q2[j]
            bb = 1.0 + c - rho23 * rho23
            k_beta = ((1.0 + a) * ((1.0 + c) - rho23 * rho23)
                      - rho12 * (rho12 - rho23 * rho13)
                      + rho13 * (rho12 * rho23 - (1.0 + c) * rho13))
            det2 = (s13 + a) * (s23 + c) - b * b
            # every rate is 1/2 log2 of a positive ratio: rank the ratios,
            # then take the log of the winner only
            x1 = 1.0 + bb * h1_sq / k_beta
            x2 = (1.0 + gain_lin[j]) / (1.0 + pen_lin[i])
            x3 = e3 * (a * c) / det2
            if x2 <= x1 and x2 <= x3:
                out[i, j] = gain[j] - pen[i]
            elif x3 <= x1:
                out[i, j] = c3 - _HALF_LOG2 * log(det2 / (a * c))
            else:
                out[i, j] = _HALF_LOG2 * log1p(bb * h1_sq / k_beta)
    return out_arr
