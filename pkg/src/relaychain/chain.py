"""Four-node Gaussian relay chain: parameters, validity and joint law.

Signals: source X, relay inputs X1, X2, observations

    Y1 = h1 X  + Z1
    Y2 = h2 X1 + Z2
    Y3 = h3 X2 + Z3

with unit-power inputs, unit-variance noises correlated through ``K_Z``,
and Gaussian quantizations Yh_i = Y_i + Zh_i, Zh_i ~ N(0, q_i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCorrelation, InvalidParameters
from .gaussian import PSD_TOL, GaussianJoint, is_psd, sym_matrix

LABELS = ("X", "X1", "X2", "Y1", "Y2", "Y3", "Yh1", "Yh2")


def one_minus_sq(r: float) -> float:
    """1 - r**2, factored for accuracy as |r| -> 1."""
    return (1.0 - r) * (1.0 + r)


def db_to_power(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ChainParams:
    """Gains (amplitudes) and noise correlation coefficients."""

    h1: float
    h2: float
    h3: float
    rho12: float = 0.0
    rho13: float = 0.0
    rho23: float = 0.0

    @classmethod
    def from_powers(cls, h1_sq, h2_sq, h3_sq, rho12=0.0, rho13=0.0, rho23=0.0):
        for name, v in (("h1_sq", h1_sq), ("h2_sq", h2_sq), ("h3_sq", h3_sq)):
            if v < 0:
                raise InvalidParameters(f"{name} must be non-negative, got {v}")
        return cls(math.sqrt(h1_sq), math.sqrt(h2_sq), math.sqrt(h3_sq), rho12, rho13, rho23)

    @property
    def h1_sq(self) -> float:
        return self.h1 * self.h1

    @property
    def h2_sq(self) -> float:
        return self.h2 * self.h2

    @property
    def h3_sq(self) -> float:
        return self.h3 * self.h3

    def noise_cov(self) -> np.ndarray:
        """The 3x3 unit-diagonal noise covariance K_Z."""
        r12, r13, r23 = self.rho12, self.rho13, self.rho23
        return sym_matrix([[1.0, r12, r13], [r12, 1.0, r23], [r13, r23, 1.0]])

    def noise_det(self) -> float:
        """|K_Z| by cofactor expansion."""
        r12, r13, r23 = self.rho12, self.rho13, self.rho23
        return one_minus_sq(r12) - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23


@dataclass(frozen=True)
class QuantLevels:
    """Gaussian quantization noise variances of the two relays."""

    q1: float
    q2: float

    def __post_init__(self):
        if not (self.q1 > 0 and self.q2 > 0):
            raise InvalidParameters(f"quantization levels must be positive, got {self.q1}, {self.q2}")


def validate(p: ChainParams) -> str | None:
    """Return None if ``p`` is a valid chain, else a description of the violation."""
    for name in ("rho12", "rho13", "rho23"):
        r = getattr(p, name)
        if not (abs(r) <= 1.0):
            return f"correlation out of range: |{name}| = {abs(r)} > 1"
    for name in ("h1", "h2", "h3"):
        if not math.isfinite(getattr(p, name)):
            return f"gain {name} is not finite"
    if not is_psd(p.noise_cov(), PSD_TOL):
        return "K_Z not PSD: noise correlation matrix is not positive semidefinite"
    return None


def check(p: ChainParams) -> ChainParams:
    """Raise InvalidParameters unless ``p`` validates; returns ``p``."""
    msg = validate(p)
    if msg is not None:
        raise InvalidParameters(msg)
    return p


def scenario_params(h1_sq: float, rho12: float) -> ChainParams:
    """Parameters with Z3 independent and h2^2 = h3^2 = h1^2 / (1 - rho12^2)."""
    if not abs(rho12) < 1.0:
        raise DegenerateCorrelation(f"|rho12| must be < 1, got {rho12}")
    if not h1_sq > 0:
        raise InvalidParameters(f"h1_sq must be positive, got {h1_sq}")
    g = h1_sq / one_minus_sq(rho12)
    return ChainParams(math.sqrt(h1_sq), math.sqrt(g), math.sqrt(g), rho12, 0.0, 0.0)


def is_scenario(p: ChainParams, tol: float = 1e-12) -> bool:
    return abs(p.rho13) <= tol and abs(p.rho23) <= tol


def assemble_joint(p: ChainParams, q: QuantLevels) -> GaussianJoint:
    """Joint covariance of (X, X1, X2, Y1, Y2, Y3, Yh1, Yh2).

    Entries are written out directly rather than through a linear map so
    that the noise block is reproduced without rounding.
    """
    check(p)
    h = (p.h1, p.h2, p.h3)
    Kz = p.noise_cov()
    K = np.zeros((8, 8))
    K[0, 0] = K[1, 1] = K[2, 2] = 1.0
    # Y_i depends on input i (X, X1, X2 respectively)
    for i in range(3):
        K[3 + i, i] = K[i, 3 + i] = h[i]
    for i in range(2):
        K[6 + i, i] = K[i, 6 + i] = h[i]
    for i in range(3):
        for k in range(3):
            K[3 + i, 3 + k] = Kz[i, k] + (h[i] * h[i] if i == k else 0.0)
    # Yh1, Yh2 copy Y1, Y2 plus independent quantization noise
    for i in range(2):
        for k in range(3):
            K[6 + i, 3 + k] = K[3 + k, 6 + i] = K[3 + i, 3 + k]
        for k in range(2):
            K[6 + i, 6 + k] = K[3 + i, 3 + k]
    K[6, 6] += q.q1
    K[7, 7] += q.q2
    return GaussianJoint(LABELS, K)
