"""Running inverse-propensity-score (IPS) estimator of the average parameter.

Each round contributes A(lam_s)^{-1} x_s r_s; the estimate after t rounds is
the running mean of these contributions.  Accumulation uses compensated
(Kahan) summation so the order of absorption does not matter numerically.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyEstimatorError


@dataclass(frozen=True)
class EstimatorState:
    """Value type: accumulated IPS sum, its Kahan compensation, and the
    number of rounds absorbed."""

    sum: np.ndarray
    comp: np.ndarray
    t: int

    @staticmethod
    def empty(d):
        return EstimatorState(np.zeros(d), np.zeros(d), 0)


def _kahan_add(total, comp, term):
    y = term - comp
    new_total = total + y
    new_comp = (new_total - total) - y
    return new_total, new_comp


def ips_update(state, design, arm_index, reward, debug=False):
    """Absorb one round: sum += A(lam)^{-1} x r, t += 1."""
    x = design.arm_set.arms[arm_index]
    solved = design.solve(x)
    if debug:
        # Cauchy-Schwarz in the A^{-1} inner product: |x' A^{-1} x_s| is
        # bounded by the product of the two Mahalanobis norms.
        xs_norm = np.sqrt(max(x @ solved, 0.0))
        for arm in design.arm_set.arms:
            lhs = abs(arm @ solved)
            rhs = np.sqrt(max(arm @ design.solve(arm), 0.0)) * xs_norm
            assert lhs <= rhs * (1.0 + 1e-9) + 1e-12
    total, comp = _kahan_add(state.sum, state.comp, solved * reward)
    return EstimatorState(total, comp, state.t + 1)


def ips_update_batch(state, design, arm_indices, rewards):
    """Absorb many rounds drawn from one design with a single solve.

    sum_s A^{-1} x_s r_s = A^{-1} (X' w) where w_k collects the rewards of
    the rounds that pulled arm k.
    """
    arm_indices = np.asarray(arm_indices)
    rewards = np.asarray(rewards, dtype=np.float64)
    if arm_indices.shape != rewards.shape:
        raise ValueError("arm_indices and rewards must have matching shapes")
    if arm_indices.size == 0:
        return state
    per_arm = np.bincount(arm_indices, weights=rewards,
                          minlength=design.arm_set.K)
    term = design.solve(design.arm_set.arms.T @ per_arm)
    total, comp = _kahan_add(state.sum, state.comp, term)
    return EstimatorState(total, comp, state.t + arm_indices.size)


def estimate(state):
    """Current estimate sum / t; error before any round was absorbed."""
    if state.t == 0:
        raise EmptyEstimatorError("no rounds absorbed yet")
    return state.sum / state.t
