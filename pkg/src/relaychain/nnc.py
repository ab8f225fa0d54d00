"""Noisy network coding rates with Gaussian inputs and Gaussian quantization.

Two independent routes compute the per-cut rates for cuts S1, S2, S3:

* ``nnc_rates_closed`` evaluates the closed-form expressions directly;
* ``nnc_rates_generic`` evaluates the underlying mutual informations on the
  assembled joint covariance through :mod:`relaychain.gaussian`.

The S2 quantization penalty in the closed form equals
I(Y1; Yh1 | X X1 X2 Y3). Conditioning additionally on Yh2 (as the general
noisy-network-coding bound allows) gives a smaller penalty and hence a
larger rate; ``nnc_rates_generic(..., condition_s2_on_yh2=True)`` computes
that variant. The two agree exactly when rho12 == rho13 * rho23.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import ChainParams, QuantLevels, assemble_joint, check
from .cutset import SINGULAR_TOL, cutset_bound
from .errors import SingularNoiseCovariance
from .gaussian import conditional_mi

_LN2 = math.log(2.0)


def _hl(x: float) -> float:
    """0.5 * log2(1 + x)."""
    return 0.5 * math.log1p(x) / _LN2


@dataclass(frozen=True)
class NncRates:
    r1: float
    r2: float
    r3: float

    @property
    def r_min(self) -> float:
        return min(self.r1, self.r2, self.r3)

    @property
    def r_min_clamped(self) -> float:
        return max(0.0, self.r_min)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r1, self.r2, self.r3)


@dataclass(frozen=True)
class NncTerms:
    """The five mutual-information terms the per-cut rates are built from.

    r1 = s1;  r2 = s2_gain - s2_penalty;  r3 = s3_gain - s3_penalty.
    """

    s1: float
    s2_gain: float
    s2_penalty: float
    s3_gain: float
    s3_penalty: float

    def rates(self) -> NncRates:
        return NncRates(self.s1, self.s2_gain - self.s2_penalty, self.s3_gain - self.s3_penalty)


@dataclass(frozen=True)
class GapReport:
    d1: float
    d2: float
    d3: float

    @property
    def d_max(self) -> float:
        return max(self.d1, self.d2, self.d3)


def k_beta_det(p: ChainParams, q: QuantLevels) -> float:
    """det of K_Z with q1, q2 added to its first two diagonal entries."""
    r12, r13, r23 = p.rho12, p.rho13, p.rho23
    a, b = 1.0 + q.q1, 1.0 + q.q2
    return a * (b - r23 * r23) - r12 * (r12 - r23 * r13) + r13 * (r12 * r23 - b * r13)


def nnc_terms_closed(p: ChainParams, q: QuantLevels) -> NncTerms:
    check(p)
    kb = k_beta_det(p, q)
    if kb <= SINGULAR_TOL:
        raise SingularNoiseCovariance(f"|K_beta| = {kb!r}")
    s23 = 1.0 - p.rho23 * p.rho23
    s13 = 1.0 - p.rho13 * p.rho13
    b = p.rho12 - p.rho13 * p.rho23
    q1, q2 = q.q1, q.q2
    det2 = (s13 + q1) * (s23 + q2) - b * b
    return NncTerms(
        s1=_hl((1.0 + q2 - p.rho23 * p.rho23) * p.h1_sq / kb),
        s2_gain=_hl(p.h2_sq / (1.0 + q2 - p.rho23 * p.rho23)),
        s2_penalty=_hl(s13 / q1),
        s3_gain=_hl(p.h3_sq),
        s3_penalty=0.5 * math.log(det2 / (q1 * q2)) / _LN2,
    )


def nnc_rates_closed(p: ChainParams, q: QuantLevels) -> NncRates:
    """Per-cut NNC rates in bits from the closed-form expressions.

    Rates may be negative; see ``NncRates.r_min_clamped``.
    """
    return nnc_terms_closed(p, q).rates()


def nnc_terms_generic(p: ChainParams, q: QuantLevels, condition_s2_on_yh2: bool = False) -> NncTerms:
    j = assemble_joint(p, q)
    s2_given = ["X", "X1", "X2", "Y3"] + (["Yh2"] if condition_s2_on_yh2 else [])
    return NncTerms(
        s1=conditional_mi(j, ["X"], ["Yh1", "Yh2", "Y3"], ["X1", "X2"]),
        s2_gain=conditional_mi(j, ["X", "X1"], ["Yh2", "Y3"], ["X2"]),
        s2_penalty=conditional_mi(j, ["Y1"], ["Yh1"], s2_given),
        s3_gain=conditional_mi(j, ["X", "X1", "X2"], ["Y3"]),
        s3_penalty=conditional_mi(j, ["Y1", "Y2"], ["Yh1", "Yh2"], ["X", "X1", "X2", "Y3"]),
    )


def nnc_rates_generic(p: ChainParams, q: QuantLevels, condition_s2_on_yh2: bool = False) -> NncRates:
    """Per-cut NNC rates from conditional mutual informations of the joint law.

    With the default conditioning this matches ``nnc_rates_closed``.
    """
    return nnc_terms_generic(p, q, condition_s2_on_yh2).rates()


def nnc_gaps(p: ChainParams, q: QuantLevels) -> GapReport:
    """Per-cut gaps C(S_i) - R(S_i) between cut-set bound and closed-form rate."""
    c = cutset_bound(p)
    r = nnc_rates_closed(p, q)
    return GapReport(c.c1 - r.r1, c.c2 - r.r2, c.c3 - r.r3)
