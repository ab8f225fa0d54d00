"""Monte Carlo check of Gaussian mutual informations.

Samples are drawn from the assembled joint law and mutual informations are
re-estimated with the plug-in log-det formula on the sample covariance:

    I(A;B|C) = 1/2 log2( |S_AC| |S_BC| / (|S_C| |S_ABC|) )

Random numbers come from NumPy's PCG64 bit generator; standard normals use
NumPy's ziggurat transform of its uniform stream. Samples are generated in
fixed-size shards, shard ``k`` seeded by ``SeedSequence([seed, k])``, so the
result depends only on ``(seed, n)`` and not on how many workers run.

The reported ``std_error_proxy`` is a batch-means standard error: the
sample is split into 20 contiguous batches, the estimate is recomputed on
each, and their standard deviation is divided by sqrt(20).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chain import ChainParams, QuantLevels, assemble_joint
from .cutset import cutset_bound
from .errors import FactorizationFailure, SingularSampleCovariance
from .gaussian import PSD_TOL, GaussianJoint, is_psd
from .nnc import nnc_terms_closed

SHARD_SIZE = 1 << 17
N_BATCHES = 20
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class McEstimate:
    value: float
    n_samples: int
    seed: int
    std_error_proxy: float


def cov_sqrt(cov: np.ndarray) -> np.ndarray:
    """Symmetric square root via eigendecomposition, eigenvalues floored at 0."""
    cov = np.asarray(cov, dtype=np.float64)
    if not is_psd(cov, PSD_TOL):
        raise FactorizationFailure("covariance is indefinite")
    w, V = np.linalg.eigh(cov)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def _shard(root: np.ndarray, seed: int, k: int, rows: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, k])))
    return rng.standard_normal((rows, root.shape[0])) @ root


def sample_joint(j: GaussianJoint, n: int, seed: int, workers: int = 1) -> np.ndarray:
    """Draw ``n`` samples (rows) from ``j``; deterministic in ``(n, seed)``."""
    if n < 1:
        raise ValueError("n must be positive")
    root = cov_sqrt(j.cov)
    sizes = [min(SHARD_SIZE, n - s) for s in range(0, n, SHARD_SIZE)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda kr: _shard(root, seed, *kr), enumerate(sizes)))
    else:
        parts = [_shard(root, seed, k, r) for k, r in enumerate(sizes)]
    return np.concatenate(parts, axis=0)


def _plugin_mi(S: np.ndarray, ia: list[int], ib: list[int], ic: list[int]) -> float:
    def ld(idx):
        if not idx:
            return 0.0
        sign, val = np.linalg.slogdet(S[np.ix_(idx, idx)])
        if sign <= 0 or not np.isfinite(val):
            raise SingularSampleCovariance(f"sample block {idx} is singular")
        return val

    return 0.5 * (ld(ia + ic) + ld(ib + ic) - ld(ic) - ld(ia + ib + ic)) / _LN2


def _split_covs(samples: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    batches = np.array_split(samples, N_BATCHES)
    return np.cov(samples, rowvar=False), [np.cov(b, rowvar=False) for b in batches]


def _estimate(labels, covs, n, seed, a, b, c) -> McEstimate:
    pos = {lab: i for i, lab in enumerate(labels)}
    ia, ib, ic = ([pos[x] for x in s] for s in (a, b, c))
    full_cov, batch_covs = covs
    full = _plugin_mi(full_cov, ia, ib, ic)
    parts = [_plugin_mi(S, ia, ib, ic) for S in batch_covs]
    se = float(np.std(parts, ddof=1)) / math.sqrt(len(parts))
    return McEstimate(full, n, seed, se)


def mc_conditional_mi_samples(labels: Sequence[str], samples: np.ndarray, a, b, c=(),
                              seed: int = 0) -> McEstimate:
    """Plug-in estimate from an existing sample matrix (columns ordered as ``labels``)."""
    return _estimate(labels, _split_covs(samples), samples.shape[0], seed, a, b, c)


def mc_conditional_mi(j: GaussianJoint, a, b, c=(), n: int = 10**6, seed: int = 0,
                      workers: int = 1) -> McEstimate:
    """Monte Carlo estimate of I(A;B|C) in bits with a batch-means error proxy."""
    if n < 10**4:
        raise ValueError("n must be at least 1e4")
    x = sample_joint(j, n, seed, workers)
    return mc_conditional_mi_samples(j.labels, x, a, b, c, seed)


# (term name, A, B, C) for every closed-form mutual information in the model
TERMS = (
    ("cut_s1", ["X"], ["Y1", "Y2", "Y3"], ["X1", "X2"]),
    ("cut_s2", ["X", "X1"], ["Y2", "Y3"], ["X2"]),
    ("cut_s3", ["X", "X1", "X2"], ["Y3"], []),
    ("cut_s4", ["X", "X2"], ["Y1", "Y3"], ["X1"]),
    ("nnc_s1", ["X"], ["Yh1", "Yh2", "Y3"], ["X1", "X2"]),
    ("nnc_s2_gain", ["X", "X1"], ["Yh2", "Y3"], ["X2"]),
    ("nnc_s2_penalty", ["Y1"], ["Yh1"], ["X", "X1", "X2", "Y3"]),
    ("nnc_s3_gain", ["X", "X1", "X2"], ["Y3"], []),
    ("nnc_s3_penalty", ["Y1", "Y2"], ["Yh1", "Yh2"], ["X", "X1", "X2", "Y3"]),
)


def closed_form_terms(p: ChainParams, q: QuantLevels) -> dict[str, float]:
    c = cutset_bound(p)
    t = nnc_terms_closed(p, q)
    return {
        "cut_s1": c.c1, "cut_s2": c.c2, "cut_s3": c.c3, "cut_s4": c.c4,
        "nnc_s1": t.s1, "nnc_s2_gain": t.s2_gain, "nnc_s2_penalty": t.s2_penalty,
        "nnc_s3_gain": t.s3_gain, "nnc_s3_penalty": t.s3_penalty,
    }


def regression_set() -> list[tuple[ChainParams, QuantLevels]]:
    """Ten fixed, well-conditioned parameter points for MC validation."""
    from .chain import scenario_params

    return [
        (ChainParams.from_powers(1.0, 1.0, 1.0), QuantLevels(1.0, 1.0)),
        (ChainParams.from_powers(100.0, 100.0, 100.0, 0.5), QuantLevels(1.0, 1.0)),
        (scenario_params(100.0, math.sqrt(0.75)), QuantLevels(0.25, 1.0)),
        (scenario_params(10.0, 0.3), QuantLevels(0.91, 0.5)),
        (ChainParams.from_powers(30.0, 5.0, 50.0, 0.3, -0.2, 0.4), QuantLevels(0.7, 1.3)),
        (ChainParams.from_powers(1.0, 10.0, 3.0, -0.6, 0.1, 0.2), QuantLevels(0.9, 3.4)),
        (ChainParams.from_powers(4.0, 2.0, 8.0, 0.7, 0.5, 0.3), QuantLevels(2.0, 0.5)),
        (ChainParams.from_powers(0.5, 20.0, 1.5, -0.4, -0.4, 0.6), QuantLevels(0.3, 0.3)),
        (ChainParams.from_powers(1000.0, 200.0, 500.0, 0.8, 0.0, 0.0), QuantLevels(0.36, 1.0)),
        (ChainParams.from_powers(12.0, 7.0, 2.0, 0.1, 0.6, -0.5), QuantLevels(5.0, 0.1)),
    ]


@dataclass(frozen=True)
class TermCheck:
    point: int
    term: str
    closed: float
    estimate: McEstimate

    @property
    def tolerance(self) -> float:
        return max(0.02, 3.0 * self.estimate.std_error_proxy)

    @property
    def error(self) -> float:
        return abs(self.estimate.value - self.closed)

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def validate_regression(n: int = 10**6, seed: int = 20240601, workers: int = 1) -> list[TermCheck]:
    """Compare every closed-form term with its MC estimate on the regression set.

    One sample matrix is drawn per point, with seed ``seed + point index``.
    """
    out = []
    for idx, (p, q) in enumerate(regression_set()):
        j = assemble_joint(p, q)
        covs = _split_covs(sample_joint(j, n, seed + idx, workers))
        closed = closed_form_terms(p, q)
        for name, a, b, c in TERMS:
            est = _estimate(j.labels, covs, n, seed + idx, a, b, c)
            out.append(TermCheck(idx, name, closed[name], est))
    return out
