"""Closed-form cut-set upper bounds for the four cuts of the chain.

Cuts are S1 = {X}, S2 = {X, X1}, S3 = {X, X1, X2}, S4 = {X, X2}. Each bound
maximizes its own mutual information separately, so ``c_min`` is an upper
bound on (not equal to) the true cut-set bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import ChainParams, check, one_minus_sq

SINGULAR_TOL = 1e-14


@dataclass(frozen=True)
class CutsetBounds:
    c1: float
    c2: float
    c3: float
    c4: float
    c_min: float
    divergent: bool = False

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)


def _ratio_bound(num: float, den: float) -> float:
    # 1/2 log2(1 + num/den); den ~ 0 diverges unless there is no signal
    if num == 0.0:
        return 0.0
    if den <= SINGULAR_TOL:
        return math.inf
    return 0.5 * math.log1p(num / den) / math.log(2.0)


def cutset_bound(p: ChainParams) -> CutsetBounds:
    """The four per-cut bounds in bits and their minimum.

    A bound whose noise determinant is numerically zero is reported as
    ``inf`` and ``divergent`` is set.
    """
    check(p)
    s23 = one_minus_sq(p.rho23)
    s13 = one_minus_sq(p.rho13)
    c1 = _ratio_bound(s23 * p.h1_sq, p.noise_det())
    c2 = _ratio_bound(p.h2_sq, s23)
    c3 = _ratio_bound(p.h3_sq, 1.0)
    c4 = _ratio_bound(p.h1_sq + p.h3_sq + p.h1_sq * p.h3_sq, s13)
    cs = (c1, c2, c3, c4)
    return CutsetBounds(c1, c2, c3, c4, min(cs), divergent=any(math.isinf(c) for c in cs))
