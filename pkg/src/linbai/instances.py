"""Benchmark arm sets, reward-parameter sequences, and noise models.

All randomness used by a parameter sequence is drawn at construction time
and stored, so ``theta_at`` is deterministic afterwards.  Rounds are
1-indexed: t runs over 1..T.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import truncnorm

from .designs import ArmSet
from .errors import InstanceError, NonUniqueBestArmError

MULTIVARIATE_MAX_ARMS = 4096
REDRAW_ATTEMPTS = 100


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean noise supported on [-1, 1]."""

    kind: str = "uniform"
    sigma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "rademacher", "truncated_gaussian"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "truncated_gaussian" and self.sigma < 0:
            raise ValueError("sigma must be nonnegative")

    def sample(self, rng, size=None):
        if self.kind == "uniform":
            return rng.uniform(-1.0, 1.0, size)
        if self.kind == "rademacher":
            if size is None:
                return 1.0 if rng.random() < 0.5 else -1.0
            return np.where(rng.random(size) < 0.5, 1.0, -1.0)
        if self.sigma == 0.0:
            return 0.0 if size is None else np.zeros(size)
        bound = 1.0 / self.sigma
        return truncnorm.rvs(-bound, bound, scale=self.sigma, size=size,
                             random_state=rng)


class ParameterSequence:
    """Deterministic map from round t in 1..T to the parameter theta_t."""

    kind = "stationary"

    def __init__(self, T, d):
        if T < 1:
            raise ValueError("horizon must be >= 1")
        self.T = int(T)
        self.d = int(d)
        self._thetas = None
        self._mean = None

    def _build(self):
        raise NotImplementedError

    def thetas(self):
        """(T, d) matrix of all parameters; built once and cached."""
        if self._thetas is None:
            M = np.ascontiguousarray(self._build(), dtype=np.float64)
            assert M.shape == (self.T, self.d)
            M.setflags(write=False)
            self._thetas = M
        return self._thetas

    def theta_at(self, t):
        if not 1 <= t <= self.T:
            raise IndexError(f"round {t} outside 1..{self.T}")
        return self.thetas()[t - 1]

    def mean_theta(self):
        if self._mean is None:
            self._mean = self.thetas().sum(axis=0) / self.T
        return self._mean


class StationarySequence(ParameterSequence):
    kind = "stationary"

    def __init__(self, theta, T):
        theta = np.asarray(theta, dtype=np.float64)
        super().__init__(T, theta.shape[0])
        self.theta = theta

    def _build(self):
        return np.tile(self.theta, (self.T, 1))


class OscillatingSequence(ParameterSequence):
    """theta_{t,i} = theta*_i + s * I_i * ||theta*||_inf * sin(2 pi t / L + phi_i)."""

    kind = "oscillating"

    def __init__(self, theta_star, scale, period, T, indicator, phase_offsets):
        theta_star = np.asarray(theta_star, dtype=np.float64)
        super().__init__(T, theta_star.shape[0])
        self.theta_star = theta_star
        self.scale = float(scale)
        self.period = int(period)
        self.indicator = np.asarray(indicator, dtype=np.float64)
        self.phase_offsets = np.asarray(phase_offsets, dtype=np.float64)

    def _build(self):
        t = np.arange(1, self.T + 1)[:, None]
        amp = self.scale * self.indicator * np.abs(self.theta_star).max()
        osc = amp * np.sin(2.0 * np.pi * t / self.period + self.phase_offsets)
        return self.theta_star + osc


class PiecewiseConstantSequence(ParameterSequence):
    """Constant segments: values[j] holds on rounds (cuts[j], cuts[j+1]]."""

    kind = "malicious"

    def __init__(self, values, cuts, T):
        values = np.asarray(values, dtype=np.float64)
        super().__init__(T, values.shape[1])
        if cuts[0] != 0 or cuts[-1] != T or list(cuts) != sorted(cuts):
            raise ValueError("cuts must increase from 0 to T")
        self.values = values
        self.cuts = list(cuts)

    def _build(self):
        M = np.empty((self.T, self.d))
        for j in range(len(self.values)):
            M[self.cuts[j]:self.cuts[j + 1]] = self.values[j]
        return M


class PeriodicSequence(ParameterSequence):
    """Cycles through the given phase vectors, each repeated L rounds."""

    kind = "periodic"

    def __init__(self, phases, repeats, T):
        phases = np.asarray(phases, dtype=np.float64)
        if phases.ndim != 2 or len(phases) == 0:
            raise ValueError("phases must be a nonempty list of vectors")
        if repeats < 1:
            raise ValueError("repeats must be >= 1")
        super().__init__(T, phases.shape[1])
        self.phases = phases
        self.repeats = int(repeats)

    def _build(self):
        t = np.arange(self.T)
        idx = (t % (self.repeats * len(self.phases))) // self.repeats
        return self.phases[idx]


def soare_instance(d, omega):
    """Canonical basis plus the near-duplicate arm cos(w) e1 + sin(w) e2."""
    if d < 2:
        raise ValueError("need d >= 2")
    if omega <= 0.0:
        raise InstanceError("omega = 0 duplicates e1: best arm not unique")
    if omega >= np.pi / 2:
        raise ValueError("omega must be in (0, pi/2)")
    arms = np.vstack([np.eye(d),
                      np.cos(omega) * np.eye(d)[0] + np.sin(omega) * np.eye(d)[1]])
    theta_star = np.zeros(d)
    theta_star[0] = 2.0
    return ArmSet(arms), theta_star


def multivariate_instance(D, alpha1, alpha2, rng, max_arms=MULTIVARIATE_MAX_ARMS):
    """One arm per layout w in {-1,1}^D with intercept, slot, and pairwise
    interaction features; theta* redrawn until the best arm is unique."""
    if D < 2:
        raise ValueError("need D >= 2")
    if 2 ** D > max_arms:
        raise InstanceError(f"2^{D} layouts exceed the cap of {max_arms}")
    layouts = np.array(list(itertools.product((-1.0, 1.0), repeat=D)))
    cols = [np.ones((len(layouts), 1)), alpha1 * layouts]
    for k in range(D - 1):
        for l in range(k + 1, D):
            cols.append(alpha2 * (layouts[:, k] * layouts[:, l])[:, None])
    arms = ArmSet(np.hstack(cols))
    d = arms.d
    for _ in range(REDRAW_ATTEMPTS):
        theta_star = rng.uniform(-0.1, 0.1, d)
        vals = np.sort(arms.arms @ theta_star)
        if vals[-1] > vals[-2]:
            return arms, theta_star
    raise InstanceError("could not draw theta* with a unique best arm")


def oscillating_sequence(theta_star, s, L, T, rng, arm_set):
    """Randomly oscillating weights; the indicator/phase draws are rejected
    until the averaged parameter keeps theta*'s best arm."""
    if L < 1 or T < 1 or s < 0:
        raise ValueError("need L >= 1, T >= 1, s >= 0")
    theta_star = np.asarray(theta_star, dtype=np.float64)
    target = int(np.argmax(arm_set.arms @ theta_star))
    for _ in range(REDRAW_ATTEMPTS):
        indicator = rng.integers(0, 2, theta_star.shape[0])
        phase_offsets = rng.uniform(0.0, 2.0 * np.pi, theta_star.shape[0])
        seq = OscillatingSequence(theta_star, s, L, T, indicator, phase_offsets)
        if int(np.argmax(arm_set.arms @ seq.mean_theta())) == target:
            return seq
    raise InstanceError(
        f"oscillation (s={s}, L={L}, T={T}) kept flipping the best arm "
        f"after {REDRAW_ATTEMPTS} redraws"
    )


def malicious_sequence(d, T):
    """Adversarial two-phase parameters over the omega=0.5 benchmark arms."""
    if d < 2:
        raise ValueError("need d >= 2")
    arms, _ = soare_instance(d, 0.5)
    first = np.ones(d)
    first[0] = 0.0
    second = np.zeros(d)
    second[0] = 2.0
    cut = T // 3
    seq = PiecewiseConstantSequence([first, second], [0, cut, T], T)
    return arms, seq


def benchmark_sequence(d, s, L, T):
    """Structured non-stationarity over the omega=0.5 benchmark arms:
    theta_t = (0.3, 0, ..., 0, 0.5 - s sin(2 pi t / L))."""
    if d < 2:
        raise ValueError("need d >= 2")
    theta_star = np.zeros(d)
    theta_star[0] = 0.3
    theta_star[-1] = 0.5
    indicator = np.zeros(d)
    indicator[-1] = 1.0
    phase_offsets = np.zeros(d)
    phase_offsets[-1] = np.pi
    # amplitude = scale * ||theta*||_inf = scale * 0.5, so scale = 2s
    return OscillatingSequence(theta_star, 2.0 * s, L, T, indicator,
                               phase_offsets)


def periodic_sequence(phases, L, T):
    return PeriodicSequence(phases, L, T)


def weekly_phases(theta_star, arm_set, rng, n_days=7, jitter=0.05):
    """Synthetic day-of-week parameters: theta* plus small uniform
    perturbations, redrawn until the phase average keeps the best arm."""
    theta_star = np.asarray(theta_star, dtype=np.float64)
    target = int(np.argmax(arm_set.arms @ theta_star))
    for _ in range(REDRAW_ATTEMPTS):
        phases = theta_star + rng.uniform(-jitter, jitter,
                                          (n_days, theta_star.shape[0]))
        if int(np.argmax(arm_set.arms @ phases.mean(axis=0))) == target:
            return phases
    raise InstanceError("weekly perturbations kept flipping the best arm")


def sample_reward(seq, noise, x, t, rng, clip=False):
    """Noisy reward x' theta_t + eps for round t (1-indexed)."""
    r = float(np.asarray(x) @ seq.theta_at(t)) + float(noise.sample(rng))
    if clip:
        r = float(np.clip(r, -1.0, 1.0))
    return r


@dataclass(frozen=True)
class GapProfile:
    """Per-arm gaps under an average parameter with a unique best arm."""

    best_index: int
    gaps: np.ndarray
    min_gap: float


def gap_profile(arm_set, theta_bar):
    values = arm_set.arms @ np.asarray(theta_bar, dtype=np.float64)
    order = np.argsort(-values, kind="stable")
    if values[order[0]] == values[order[1]]:
        raise NonUniqueBestArmError("top two arms are tied under theta_bar")
    best = int(order[0])
    gaps = values[best] - values
    gaps[best] = values[best] - values[order[1]]
    gaps.setflags(write=False)
    return GapProfile(best, gaps, float(gaps[best]))
