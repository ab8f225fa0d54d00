"""Derivative-free maximization of the min-cut NNC rate over (q1, q2).

A coarse log-spaced grid locates an incumbent; successive 5x5 sub-grids
centred on it then shrink the bracket by a factor of 4 per level. The
objective is a minimum of smooth terms, so it has kinks where terms cross.
Grid refinement stalls on sharp ridges where two or three terms are equal,
so the incumbent is finally polished with the epigraph form

    max t  subject to  R(S_i)(q) >= t,  i = 1, 2, 3

solved by SLSQP in log10(q); the polished point is kept only if it is
strictly better.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .chain import ChainParams, QuantLevels, check, scenario_params
from .cutset import cutset_bound
from .errors import EmptyGrid
from .nnc import nnc_rates_closed

SUBGRID = 5
SHRINK = 4.0
_MAX_MOVES = 200


@dataclass(frozen=True)
class GridSpec:
    q_lo: float = 1e-4
    q_hi: float = 1e4
    points_per_decade: int = 8
    max_depth: int = 12
    rel_tol: float = 1e-4

    def validate(self) -> None:
        if not (self.q_lo > 0 and self.q_hi > self.q_lo and math.isfinite(self.q_hi)):
            raise EmptyGrid(f"invalid q bounds [{self.q_lo}, {self.q_hi}]")
        if self.points_per_decade < 4:
            raise EmptyGrid(f"points_per_decade must be >= 4, got {self.points_per_decade}")

    def coarse_axis(self) -> np.ndarray:
        """Log10 positions of the coarse grid, endpoints included."""
        self.validate()
        lo, hi = math.log10(self.q_lo), math.log10(self.q_hi)
        n = max(2, int(math.ceil((hi - lo) * self.points_per_decade)) + 1)
        return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class OptResult:
    q1_opt: float
    q2_opt: float
    rate_opt: float
    gap_at_opt: float
    evaluations: int
    depth: int


def _argmax_first(values: np.ndarray) -> tuple[int, int]:
    # row-major first maximum == smallest (q1, q2) lexicographically on ascending axes
    flat = int(np.argmax(values))
    return divmod(flat, values.shape[1])


def _objective(p: ChainParams, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return kernels.min_rate_grid(p.h1_sq, p.h2_sq, p.h3_sq, p.rho12, p.rho13, p.rho23,
                                 10.0 ** x1, 10.0 ** x2)


def optimize_quant(p: ChainParams, grid: GridSpec | None = None) -> OptResult:
    """Grid-refined maximizer of min{R(S1), R(S2), R(S3)} over (q1, q2).

    Deterministic for a fixed ``grid``. Refinement stays inside the
    coarse-grid bounds and never replaces the incumbent with a worse point.
    """
    check(p)
    grid = grid or GridSpec()
    axis = grid.coarse_axis()
    lo, hi = axis[0], axis[-1]
    vals = _objective(p, axis, axis)
    evals = vals.size
    i, k = _argmax_first(vals)
    best = float(vals[i, k])
    x1, x2 = float(axis[i]), float(axis[k])

    half = float(axis[1] - axis[0])
    offsets = np.linspace(-1.0, 1.0, SUBGRID)
    depth = 0
    while depth < grid.max_depth:
        # relative width of the bracket [q/10^half, q*10^half]
        if 2.0 * math.sinh(half * math.log(10.0)) < grid.rel_tol:
            break
        # stay at this scale while the incumbent keeps improving
        for _ in range(_MAX_MOVES):
            a1 = np.clip(x1 + half * offsets, lo, hi)
            a2 = np.clip(x2 + half * offsets, lo, hi)
            sub = _objective(p, a1, a2)
            evals += sub.size
            si, sk = _argmax_first(sub)
            if not sub[si, sk] > best:
                break
            best = float(sub[si, sk])
            x1, x2 = float(a1[si]), float(a2[sk])
        half /= SHRINK
        depth += 1

    q = QuantLevels(10.0 ** x1, 10.0 ** x2)
    rate = nnc_rates_closed(p, q).r_min
    polished = _polish(p, x1, x2, rate, lo, hi)
    if polished is not None and polished[1] > rate:
        q, rate = polished
    return OptResult(
        q1_opt=q.q1,
        q2_opt=q.q2,
        rate_opt=rate,
        gap_at_opt=cutset_bound(p).c_min - rate,
        evaluations=evals,
        depth=depth,
    )


def _polish(p: ChainParams, x1: float, x2: float, t0: float, lo: float, hi: float):
    def rates(z):
        return np.array(nnc_rates_closed(p, QuantLevels(10.0 ** z[0], 10.0 ** z[1])).as_tuple())

    try:
        res = minimize(
            lambda z: -z[2],
            np.array([x1, x2, t0]),
            jac=lambda z: np.array([0.0, 0.0, -1.0]),
            method="SLSQP",
            bounds=[(lo, hi), (lo, hi), (None, None)],
            constraints=[{"type": "ineq", "fun": lambda z: rates(z) - z[2]}],
            options={"ftol": 1e-14, "maxiter": 200},
        )
    except (ValueError, ArithmeticError):
        return None
    z1, z2 = (float(np.clip(v, lo, hi)) for v in res.x[:2])
    q = QuantLevels(10.0 ** z1, 10.0 ** z2)
    return q, nnc_rates_closed(p, q).r_min


class SweepRecord(NamedTuple):
    rho12: float
    c_min: float
    rate_opt: float
    gap_at_opt: float


def unboundedness_sweep(h1_sq: float, rho_list: Sequence[float],
                        grid: GridSpec | None = None) -> list[SweepRecord]:
    """Optimized NNC gap along a ladder of rho12 values under the symmetric scenario."""
    out = []
    for rho in rho_list:
        p = scenario_params(h1_sq, rho)
        res = optimize_quant(p, grid)
        out.append(SweepRecord(rho, cutset_bound(p).c_min, res.rate_opt, res.gap_at_opt))
    return out
