"""Pure-Python implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the extension is tested against.
"""
import math

import numpy as np

from .errors import NotPositiveDefinite

_HALF_LOG2 = 0.5 / math.log(2.0)


def cholesky(a, pivot_tol=1e-14):
    """Lower Cholesky factor of a small dense symmetric matrix.

    Raises NotPositiveDefinite if any pivot is <= ``pivot_tol``.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    L = np.zeros((n, n))
    for j in range(n):
        s = a[j, j]
        for k in range(j):
            s -= L[j, k] * L[j, k]
        if not s > pivot_tol:
            raise NotPositiveDefinite(f"pivot {j} is {s!r} (tolerance {pivot_tol})")
        d = math.sqrt(s)
        L[j, j] = d
        for i in range(j + 1, n):
            t = a[i, j]
            for k in range(j):
                t -= L[i, k] * L[j, k]
            L[i, j] = t / d
    return L


def log_det(a, pivot_tol=1e-14):
    L = cholesky(a, pivot_tol)
    return 2.0 * sum(math.log(L[i, i]) for i in range(L.shape[0]))


def min_rate_grid(h1_sq, h2_sq, h3_sq, rho12, rho13, rho23, q1, q2):
    """Min-cut NNC rate in bits on the outer grid ``q1 x q2``.

    Returns an array of shape ``(len(q1), len(q2))``.
    """
    Q1 = np.asarray(q1, dtype=np.float64)[:, None]
    Q2 = np.asarray(q2, dtype=np.float64)[None, :]
    s23 = 1.0 - rho23 * rho23
    s13 = 1.0 - rho13 * rho13
    b = rho12 - rho13 * rho23

    k_beta = ((1.0 + Q1) * ((1.0 + Q2) - rho23 * rho23)
              - rho12 * (rho12 - rho23 * rho13)
              + rho13 * (rho12 * rho23 - (1.0 + Q2) * rho13))
    r1 = _HALF_LOG2 * np.log1p((1.0 + Q2 - rho23 * rho23) * h1_sq / k_beta)
    r2 = (_HALF_LOG2 * np.log1p(h2_sq / (1.0 + Q2 - rho23 * rho23))
          - _HALF_LOG2 * np.log1p(s13 / Q1))
    det2 = (s13 + Q1) * (s23 + Q2) - b * b
    r3 = _HALF_LOG2 * math.log1p(h3_sq) - _HALF_LOG2 * np.log(det2 / (Q1 * Q2))
    return np.minimum(np.minimum(r1, r2), r3)
