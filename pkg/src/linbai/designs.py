"""Arm sets, designs over them, and Frank-Wolfe design solvers.

A design is a probability distribution lam over a finite arm set with
covariance A(lam) = sum_k lam_k x_k x_k'.  The two solvers target

* G-optimal: min_lam max_x   ||x||^2_{A(lam)^-1}   (optimum value d)
* XY-optimal: min_lam max_{x,x' active} ||x - x'||^2_{A(lam)^-1}

both run with stepsize 1/(2(i+2)) at iteration i.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from ._fw import minimax_design
from .errors import SolverError, SpanError

REG_SCALE = 1e-10
DEFAULT_ITERS = 5000
DEFAULT_TOL = 1e-7

SIMPLEX_ATOL = 1e-9


@dataclass(frozen=True, eq=False)
class ArmSet:
    """K arms in R^d, required to span the full space.

    Arm order is stable; every index used elsewhere refers to it.
    """

    arms: np.ndarray

    def __post_init__(self):
        arms = np.ascontiguousarray(self.arms, dtype=np.float64)
        if arms.ndim != 2:
            raise ValueError("arms must be a K x d matrix")
        K, d = arms.shape
        if K < 2:
            raise ValueError(f"need at least 2 arms, got {K}")
        if not np.all(np.isfinite(arms)):
            raise ValueError("arms must be finite-valued")
        if np.linalg.matrix_rank(arms) < d:
            raise SpanError(f"arms do not span R^{d} (K={K})")
        arms.setflags(write=False)
        object.__setattr__(self, "arms", arms)

    @property
    def K(self):
        return self.arms.shape[0]

    @property
    def d(self):
        return self.arms.shape[1]

    @cached_property
    def _key(self):
        return self.arms.tobytes()


@dataclass(frozen=True, eq=False)
class Design:
    """Probability weights over an ArmSet with the cached covariance."""

    arm_set: ArmSet
    weights: np.ndarray
    covariance: np.ndarray = field(default=None)
    regularizer: float = field(default=0.0)

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if w.shape != (self.arm_set.K,):
            raise ValueError(
                f"weights shape {w.shape} does not match K={self.arm_set.K}"
            )
        if w.min() < -SIMPLEX_ATOL or abs(w.sum() - 1.0) > SIMPLEX_ATOL:
            raise ValueError("weights must lie on the probability simplex")
        w = np.maximum(w, 0.0)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if self.covariance is None:
            X = self.arm_set.arms
            cov = (X.T * w) @ X
            reg = REG_SCALE * np.trace(cov) / self.arm_set.d
            cov.setflags(write=False)
            object.__setattr__(self, "covariance", cov)
            object.__setattr__(self, "regularizer", float(reg))

    @cached_property
    def _chol(self):
        d = self.arm_set.d
        try:
            return cho_factor(self.covariance + self.regularizer * np.eye(d))
        except LinAlgError as exc:
            raise SolverError(
                f"singular covariance for design with weights {self.weights}"
            ) from exc

    def solve(self, v):
        """Return A(lam)^{-1} v through the cached factorization."""
        return cho_solve(self._chol, v)

    @cached_property
    def sampling_cdf(self):
        return np.cumsum(self.weights)

    def sample(self, rng, size=None):
        """Draw arm indices i.i.d. from the design."""
        if size is None:
            return int(np.searchsorted(self.sampling_cdf, rng.random(),
                                       side="right").clip(0, self.arm_set.K - 1))
        idx = np.searchsorted(self.sampling_cdf, rng.random(size), side="right")
        return np.minimum(idx, self.arm_set.K - 1)


def mahalanobis_sq(v, design):
    """v' A(lam)^{-1} v for the design's regularized covariance."""
    v = np.asarray(v, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise ValueError("v must be finite")
    return float(max(v @ design.solve(v), 0.0))


def g_optimal(arm_set, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    """G-optimal design; returns (design, achieved worst-case norm^2)."""
    lam, value, _, _ = minimax_design(
        arm_set.arms, arm_set.arms, iters, tol, REG_SCALE
    )
    if not np.isfinite(value):
        raise SolverError("non-finite G-optimal objective")
    return Design(arm_set, _renormalize(lam)), value


def xy_optimal(arm_set, active, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    """XY-optimal design over the active pair set; weights range over the
    full simplex while the max ranges over active pairs only."""
    active = sorted(int(i) for i in active)
    if len(active) < 2:
        raise ValueError(f"need at least 2 active arms, got {len(active)}")
    X = arm_set.arms
    directions = np.array([X[i] - X[j] for i, j in combinations(active, 2)])
    lam, value, _, _ = minimax_design(X, directions, iters, tol, REG_SCALE)
    if not np.isfinite(value):
        raise SolverError("non-finite XY-optimal objective")
    return Design(arm_set, _renormalize(lam)), value


def mix(a, b, w):
    """Convex combination w*a + (1-w)*b of two designs on the same arms."""
    if a.weights.shape != b.weights.shape:
        raise ValueError("designs have mismatched weight lengths")
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"mixing weight {w} outside [0, 1]")
    return Design(a.arm_set, w * a.weights + (1.0 - w) * b.weights)


def _renormalize(lam):
    lam = np.maximum(lam, 0.0)
    return lam / lam.sum()


# Memo for solves that recur with identical inputs (the G-design of a fixed
# arm set, the full-set XY value used for epoch lengths, repeated virtual
# phases).  Keyed by arm bytes so results are shared across trials.
_memo = {}
_MEMO_CAP = 4096


def _memoized(kind, arm_set, active, iters, tol, compute):
    key = (kind, arm_set._key, active, iters, tol)
    hit = _memo.get(key)
    if hit is None:
        if len(_memo) >= _MEMO_CAP:
            _memo.clear()
        hit = compute()
        _memo[key] = hit
    return hit


def g_optimal_cached(arm_set, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    return _memoized("g", arm_set, None, iters, tol,
                     lambda: g_optimal(arm_set, iters, tol))


def xy_optimal_cached(arm_set, active, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    active = tuple(sorted(int(i) for i in active))
    return _memoized("xy", arm_set, active, iters, tol,
                     lambda: xy_optimal(arm_set, active, iters, tol))
