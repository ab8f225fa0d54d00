"""Concatenated scheme: correlation-aware NNC over the first hop pair, then
decode-and-forward from relay 2 to the destination.

Defined only when Z3 is independent of Z1 and Z2 (rho13 = rho23 = 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import ChainParams, check, is_scenario, one_minus_sq
from .cutset import cutset_bound
from .errors import DegenerateCorrelation, InvalidParameters, UnsupportedCorrelationStructure

_LN2 = math.log(2.0)


def _hl(x: float) -> float:
    return 0.5 * math.log1p(x) / _LN2


@dataclass(frozen=True)
class ConcatResult:
    rate: float
    q1: float
    q1_star: float
    stage1_terms: tuple[float, float]
    stage2_term: float
    gap_bound: float

    @property
    def active_term(self) -> int:
        """Index (0, 1, 2) of the smallest of the three rate terms."""
        terms = (*self.stage1_terms, self.stage2_term)
        return terms.index(min(terms))


def optimal_q1(rho12: float) -> float:
    """Quantization level 1 - rho12^2 that equalizes the two stage-1 penalties."""
    if not abs(rho12) < 1.0:
        raise DegenerateCorrelation(f"|rho12| must be < 1, got {rho12}")
    return one_minus_sq(rho12)


def gap_bound(rho12: float, q1: float) -> float:
    """max of the two stage-1 penalties; bounds cut-set minus concatenated rate."""
    s = one_minus_sq(rho12)
    return max(_hl(q1 / s), _hl(s / q1))


def _check_structure(p: ChainParams, q1: float) -> float:
    check(p)
    if not is_scenario(p):
        raise UnsupportedCorrelationStructure(
            f"need rho13 = rho23 = 0, got rho13={p.rho13}, rho23={p.rho23}"
        )
    if not q1 > 0:
        raise InvalidParameters(f"q1 must be positive, got {q1}")
    return optimal_q1(p.rho12)


def concat_rate(p: ChainParams, q1: float) -> ConcatResult:
    """Achievable rate of the concatenated scheme at quantization level ``q1``."""
    q1_star = _check_structure(p, q1)
    s = q1_star
    t1 = _hl(p.h1_sq / s) - _hl(q1 / s)
    t2 = _hl(p.h2_sq) - _hl(s / q1)
    t3 = _hl(p.h3_sq)
    return ConcatResult(
        rate=min(t1, t2, t3),
        q1=q1,
        q1_star=q1_star,
        stage1_terms=(t1, t2),
        stage2_term=t3,
        gap_bound=gap_bound(p.rho12, q1),
    )


def concat_gap(p: ChainParams, q1: float) -> float:
    """Cut-set minimum minus the concatenated rate, in bits.

    With rho13 = rho23 = 0 the four-cut minimum coincides with the
    three-term bound the scheme is compared against.
    """
    res = concat_rate(p, q1)
    return cutset_bound(p).c_min - res.rate
