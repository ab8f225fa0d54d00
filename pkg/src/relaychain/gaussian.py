"""Dense symmetric-matrix algebra for jointly Gaussian vectors.

Covariances here are small (at most 8x8), so everything is direct
factorization. Log-determinants are natural logs; mutual informations are
returned in bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from . import kernels
from .errors import NotPositiveDefinite, SingularConditioningBlock

PSD_TOL = 1e-12
PIVOT_TOL = 1e-14
_LN2 = math.log(2.0)


def sym_matrix(entries) -> np.ndarray:
    """Validate ``entries`` as a symmetric matrix and return a read-only copy.

    The returned array is exactly symmetric (mirrored from the lower
    triangle). Raises ValueError for non-square or asymmetric input.
    """
    m = np.array(entries, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    m = np.tril(m) + np.tril(m, -1).T
    m.setflags(write=False)
    return m


def log_det(m) -> float:
    """Natural-log determinant of a positive definite matrix via Cholesky.

    Raises NotPositiveDefinite if a pivot drops to 1e-14 or below.
    """
    return kernels.log_det(np.asarray(m, dtype=np.float64), PIVOT_TOL)


def is_psd(m, tol: float = PSD_TOL) -> bool:
    """True iff the smallest eigenvalue of the unit-diagonal normalization is >= -tol.

    Rows with a zero diagonal are left unscaled; a negative diagonal is
    never PSD.
    """
    m = np.asarray(m, dtype=np.float64)
    d = np.diag(m)
    if np.any(d < -tol):
        return False
    s = np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 1.0)
    normed = m * s[:, None] * s[None, :]
    return bool(np.linalg.eigvalsh(normed)[0] >= -tol)


@dataclass(frozen=True)
class GaussianJoint:
    """Zero-mean jointly Gaussian vector with named components."""

    labels: tuple[str, ...]
    cov: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate labels in {labels}")
        cov = sym_matrix(self.cov)
        if cov.shape[0] != len(labels):
            raise ValueError(
                f"{len(labels)} labels but covariance is {cov.shape[0]}x{cov.shape[0]}"
            )
        if not is_psd(cov):
            raise NotPositiveDefinite("joint covariance is not positive semidefinite")
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def indices(self, names: Iterable[str]) -> list[int]:
        """Positions of ``names`` in joint order (duplicates collapsed)."""
        wanted = set(names)
        missing = wanted.difference(self.labels)
        if missing:
            raise KeyError(f"unknown labels: {sorted(missing)}")
        return [i for i, lab in enumerate(self.labels) if lab in wanted]

    def block(self, rows: Iterable[str], cols: Iterable[str] | None = None) -> np.ndarray:
        r = self.indices(rows)
        c = r if cols is None else self.indices(cols)
        return self.cov[np.ix_(r, c)]


def _disjoint(*sets: Sequence[str]) -> None:
    seen: set[str] = set()
    for s in sets:
        s = set(s)
        if seen & s:
            raise ValueError(f"label sets overlap on {sorted(seen & s)}")
        seen |= s


def conditional_cov(j: GaussianJoint, target: Iterable[str], given: Iterable[str] = ()) -> np.ndarray:
    """Covariance of ``target`` given ``given``: K_T - K_TG K_G^-1 K_GT."""
    target, given = list(target), list(given)
    _disjoint(target, given)
    K_T = j.block(target)
    if not given:
        return sym_matrix(K_T)
    K_G = j.block(given)
    K_GT = j.block(given, target)
    try:
        L = kernels.cholesky(K_G, PIVOT_TOL)
    except NotPositiveDefinite as exc:
        raise SingularConditioningBlock(f"cannot condition on {given}: {exc}") from None
    W = solve_triangular(L, K_GT, lower=True)
    S = K_T - W.T @ W
    return sym_matrix(0.5 * (S + S.T))


def conditional_mi(j: GaussianJoint, a: Iterable[str], b: Iterable[str], c: Iterable[str] = ()) -> float:
    """I(A; B | C) in bits, computed as 1/2 log2(det K_{A|C} / det K_{A|B,C}).

    The raw value is returned; it may be slightly negative from rounding.
    """
    a, b, c = list(a), list(b), list(c)
    _disjoint(a, b, c)
    if not a or not b:
        return 0.0
    K_a_c = conditional_cov(j, a, c)
    K_a_bc = conditional_cov(j, a, b + c)
    try:
        num = log_det(K_a_c)
        den = log_det(K_a_bc)
    except NotPositiveDefinite as exc:
        raise SingularConditioningBlock(str(exc)) from None
    return 0.5 * (num - den) / _LN2
