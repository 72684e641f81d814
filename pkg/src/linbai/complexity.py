"""Problem-complexity quantities used to characterize instances.

All quantities are defined with respect to the average parameter and its
gap profile (best arm's gap = runner-up's gap).  These are reporting
metadata: no algorithm consumes them.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._fw import minimax_design
from .designs import REG_SCALE
from .errors import NonUniqueBestArmError
from .instances import gap_profile

logger = logging.getLogger(__name__)

DEFAULT_FW = (5000, 1e-7)


def h_gbai(arm_set, theta_bar):
    """d / min_gap^2."""
    prof = gap_profile(arm_set, theta_bar)
    return arm_set.d / prof.min_gap ** 2


def i_zero(min_gap):
    """ceil(log2(1/min_gap)) + 1, the phase count the theory requires."""
    if min_gap <= 0:
        raise NonUniqueBestArmError("min gap must be positive")
    return math.ceil(math.log2(1.0 / min_gap)) + 1


def _difference_directions(arm_set, prof, scale):
    """Rows (x - x*) / scale_x over all non-best arms."""
    X = arm_set.arms
    best = prof.best_index
    others = [k for k in range(arm_set.K) if k != best]
    return np.array([(X[k] - X[best]) / scale(prof.gaps[k]) for k in others])


def rho_star(arm_set, theta_bar, fw=DEFAULT_FW):
    """inf over designs of max_x ||x - x*||^2_{A^-1} / gap_x^2, by
    Frank-Wolfe on the pointwise max of the gap-normalized directions."""
    prof = gap_profile(arm_set, theta_bar)
    Y = _difference_directions(arm_set, prof, lambda g: g)
    _, value, _, _ = minimax_design(arm_set.arms, Y, fw[0], fw[1], REG_SCALE)
    return float(value)


def h_p1rage(arm_set, theta_bar, m, fw=DEFAULT_FW):
    """(m i0 / gap) inf max ||x-x*||^2 / gap_x  +  (m sqrt(d) / gap) inf
    max ||x-x*||, each inf solved independently."""
    prof = gap_profile(arm_set, theta_bar)
    gap = prof.min_gap
    i0 = i_zero(gap)
    Y1 = _difference_directions(arm_set, prof, lambda g: math.sqrt(g))
    _, v1, _, _ = minimax_design(arm_set.arms, Y1, fw[0], fw[1], REG_SCALE)
    Y2 = _difference_directions(arm_set, prof, lambda g: 1.0)
    _, v2, _, _ = minimax_design(arm_set.arms, Y2, fw[0], fw[1], REG_SCALE)
    return (m * i0 / gap) * float(v1) \
        + (m * math.sqrt(arm_set.d) / gap) * math.sqrt(float(v2))


def h_bob(prof):
    """(1 / gap) max_k k / gap_(k) over the ascending sorted gaps."""
    if prof.min_gap <= 0:
        raise NonUniqueBestArmError("min gap must be positive")
    sorted_gaps = np.sort(prof.gaps)
    k = np.arange(1, len(sorted_gaps) + 1)
    return float((k / sorted_gaps).max() / prof.min_gap)


def is_canonical(arm_set):
    """True when the arms are exactly the canonical basis vectors (in any
    order), i.e. the multi-armed-bandit case."""
    if arm_set.K != arm_set.d:
        return False
    order = np.argsort(arm_set.arms.argmax(axis=1), kind="stable")
    return np.array_equal(arm_set.arms[order], np.eye(arm_set.d))


@dataclass(frozen=True)
class ComplexityReport:
    min_gap: float
    h_gbai: float
    rho_star: float
    h_p1rage: float
    i0: int
    h_bob: Optional[float]


def complexity_report(arm_set, theta_bar, m=15, fw=DEFAULT_FW):
    """All complexity quantities at once; h_bob only for canonical arms.
    Warns when the configured m is below the i0 the theory asks for."""
    prof = gap_profile(arm_set, theta_bar)
    i0 = i_zero(prof.min_gap)
    if m < i0:
        logger.warning("m=%d is below i0=%d for min gap %.3g", m, i0,
                       prof.min_gap)
    return ComplexityReport(
        min_gap=prof.min_gap,
        h_gbai=h_gbai(arm_set, theta_bar),
        rho_star=rho_star(arm_set, theta_bar, fw),
        h_p1rage=h_p1rage(arm_set, theta_bar, m, fw),
        i0=i0,
        h_bob=h_bob(prof) if is_canonical(arm_set) else None,
    )
