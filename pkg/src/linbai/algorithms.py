"""Best-arm identification procedures behind one sequential interface.

Every algorithm follows the same protocol: ``choose(t)`` once per round
t = 1..T, then ``observe(t, arm, reward)``, then a single ``recommend()``
after round T.  All of them sample i.i.d. from a design that is fixed
within an epoch, maintain the running IPS estimate, and recommend the
empirical argmax; they differ only in how the sampling design evolves.

``run_episode`` is the fast driver: because designs are constant within an
epoch, it draws each epoch's pulls and rewards in one vectorized batch,
which is distribution-identical to the round-by-round loop.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .designs import (DEFAULT_ITERS, DEFAULT_TOL, Design, g_optimal_cached,
                      mix, xy_optimal, xy_optimal_cached)
from .errors import BudgetError
from .estimation import EstimatorState, estimate, ips_update, ips_update_batch

logger = logging.getLogger(__name__)

DEFAULT_FW = (DEFAULT_ITERS, DEFAULT_TOL)

# The Frank-Wolfe rho values carry a small one-sided (upward) error, which
# would break exact-equality boundaries such as "rho(prefix) <= half" on
# symmetric arm sets; comparisons against halved targets allow this much
# relative slack.
RHO_SLACK = 0.02


@dataclass(frozen=True)
class AlgoConfig:
    """Knobs shared by the adaptive algorithms.

    ``fw_iters`` bounds the in-loop elimination solves and is lower than
    the standalone solver default: those designs only shape sampling, and
    the budget per solve matters when thousands of trials run serially.
    ``mix_weight`` is the weight put on the G-optimal component of
    Mixed-Peace's per-phase design (0 recovers the hard-elimination
    baseline, 1/2 the default even mixture).
    """

    m: int = 15
    fw_iters: int = 1000
    fw_tol: float = DEFAULT_TOL
    epoch_sync: bool = True
    mix_weight: float = 0.5

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not 0.0 <= self.mix_weight <= 1.0:
            raise ValueError("mix_weight must be in [0, 1]")
        if self.fw_iters < 1:
            raise ValueError("fw_iters must be >= 1")


def rho_value(arm_set, active=None, fw=DEFAULT_FW):
    """inf over designs of the worst pairwise difference norm^2 over the
    active arms (the rho complexity of that subset; 0 for singletons)."""
    active = tuple(range(arm_set.K)) if active is None else tuple(active)
    if len(active) < 2:
        return 0.0
    return xy_optimal_cached(arm_set, active, fw[0], fw[1])[1]


def epoch_length(arm_set, T, fw=DEFAULT_FW):
    """Epoch length R = floor(T / log2(inf rho)); falls back to 1 when the
    formula degenerates (tiny budget or rho <= 1)."""
    rho = rho_value(arm_set, fw=fw)
    denom = math.log2(rho) if rho > 0 else 0.0
    R = int(T // denom) if denom > 0 else 0
    if R <= 0:
        logger.warning(
            "degenerate epoch length (T=%d, rho=%.3g); falling back to R=1",
            T, rho)
        R = 1
    return R


def rage_elimination(arm_set, theta_hat, m, g_design, fw=DEFAULT_FW,
                     stats=None):
    """Virtual-elimination design refresh (no samples are drawn here).

    Runs up to m+1 rounds of estimated-gap thresholding at levels 2^-i,
    averages the XY-optimal designs of the surviving sets, and returns the
    half-and-half mixture of that average with the G-optimal design.
    """
    theta_hat = np.asarray(theta_hat, dtype=np.float64)
    values = arm_set.arms @ theta_hat
    gaps = values.max() - values
    active = list(range(arm_set.K))
    designs = []
    i = 0
    while len(active) > 1 and i <= m:
        if stats is not None:
            stats.setdefault("active", []).append(list(active))
        designs.append(
            xy_optimal_cached(arm_set, tuple(active), fw[0], fw[1])[0])
        if stats is not None:
            stats["designs"] = stats.get("designs", 0) + 1
        threshold = 2.0 ** (-i)
        active = [k for k in active if gaps[k] <= threshold]
        i += 1
    if not designs:
        return mix(g_design, g_design, 0.5)
    avg = Design(arm_set, np.mean([d.weights for d in designs], axis=0))
    return mix(avg, g_design, 0.5)


def peace_elimination(arm_set, theta_hat, g_design, fw=DEFAULT_FW,
                      stats=None):
    """Prefix-halving design refresh: rank arms by the estimate, repeatedly
    keep the largest prefix whose rho value is at most half the current
    set's, and average the per-phase XY-optimal designs."""
    theta_hat = np.asarray(theta_hat, dtype=np.float64)
    values = arm_set.arms @ theta_hat
    ranked = np.argsort(-values, kind="stable")
    n = arm_set.K
    designs = []
    if stats is not None:
        stats.setdefault("survivors", []).append(n)
    while n > 1:
        design, current = xy_optimal_cached(
            arm_set, tuple(ranked[:n]), fw[0], fw[1])
        designs.append(design)
        if stats is not None:
            stats["designs"] = stats.get("designs", 0) + 1
        target = 0.5 * current * (1.0 + RHO_SLACK)
        k = 1
        for cand in range(n - 1, 1, -1):
            if rho_value(arm_set, ranked[:cand], fw) <= target:
                k = cand
                break
        n = k
        if stats is not None:
            stats["survivors"].append(n)
    avg = Design(arm_set, np.mean([d.weights for d in designs], axis=0))
    return mix(avg, g_design, 0.5)


class BaiAlgorithm:
    """Shared skeleton: fixed-per-epoch sampling design + IPS estimate."""

    def __init__(self, arm_set, T, config, rng):
        if T < 1:
            raise ValueError("budget T must be >= 1")
        self.arm_set = arm_set
        self.T = int(T)
        self.config = config if config is not None else AlgoConfig()
        self.rng = rng
        self.state = EstimatorState.empty(arm_set.d)
        self.g_design, self.g_value = g_optimal_cached(arm_set)
        self._fw = (self.config.fw_iters, self.config.fw_tol)
        self._design = None

    # -- per-round protocol -------------------------------------------------
    def design_for_round(self, t):
        raise NotImplementedError

    def segment_end(self, t):
        """Last round (inclusive) whose design equals round t's."""
        raise NotImplementedError

    def choose(self, t):
        self._design = self.design_for_round(t)
        return int(self._design.sample(self.rng))

    def observe(self, t, arm_index, reward):
        self.state = ips_update(self.state, self._design, arm_index, reward)

    def recommend(self):
        theta = estimate(self.state)
        return int(np.argmax(self.arm_set.arms @ theta))

    @property
    def current_design(self):
        return self._design


class GBai(BaiAlgorithm):
    """Sample i.i.d. from the G-optimal design for all T rounds."""

    def design_for_round(self, t):
        return self.g_design

    def segment_end(self, t):
        return self.T


class UniformSampling(BaiAlgorithm):
    """Uniform design every round; the classical reference point."""

    def __init__(self, arm_set, T, config, rng):
        super().__init__(arm_set, T, config, rng)
        self._uniform = Design(arm_set, np.full(arm_set.K, 1.0 / arm_set.K))

    def design_for_round(self, t):
        return self._uniform

    def segment_end(self, t):
        return self.T


class P1Rage(BaiAlgorithm):
    """G-optimal start, then rage_elimination refreshes of the design.

    With epoch_sync (default) the refresh happens at rounds t-1 = c*R for
    the epoch length R = floor(T / log2(inf rho)); without it the design is
    refreshed every round, which is the literal per-round variant.
    """

    _eliminate = staticmethod(rage_elimination)

    def __init__(self, arm_set, T, config, rng):
        super().__init__(arm_set, T, config, rng)
        self.R = epoch_length(arm_set, T, self._fw)
        self._lam = self.g_design

    def _refresh(self, theta_hat):
        return rage_elimination(self.arm_set, theta_hat, self.config.m,
                                self.g_design, self._fw)

    def _is_refresh_round(self, t):
        if t <= 1:
            return False
        if not self.config.epoch_sync:
            return True
        return (t - 1) % self.R == 0

    def design_for_round(self, t):
        if self._is_refresh_round(t):
            self._lam = self._refresh(estimate(self.state))
        return self._lam

    def segment_end(self, t):
        if not self.config.epoch_sync:
            return t
        return min(self.T, ((t - 1) // self.R + 1) * self.R)


class P1Peace(P1Rage):
    """As P1Rage but with the prefix-halving refresh, always epoch-synced."""

    def __init__(self, arm_set, T, config, rng):
        config = config if config is not None else AlgoConfig()
        if not config.epoch_sync:
            config = AlgoConfig(m=config.m, fw_iters=config.fw_iters,
                                fw_tol=config.fw_tol, epoch_sync=True,
                                mix_weight=config.mix_weight)
        super().__init__(arm_set, T, config, rng)

    def _refresh(self, theta_hat):
        return peace_elimination(self.arm_set, theta_hat, self.g_design,
                                 self._fw)


class MixedPeace(BaiAlgorithm):
    """Phased hard elimination with an optional G-optimal mixture.

    R = ceil(log2(inf rho)) phases of N = floor(T/R) rounds; the final
    phase absorbs the T - R*N leftover rounds.  At each phase boundary the
    survivors are reranked by the estimate and cut to the largest prefix
    whose rho value is at most half the survivors'.  With mix_weight > 0
    the recommendation is the global argmax; with mix_weight = 0 (the
    hard-elimination baseline) it is the argmax among final survivors.
    """

    def __init__(self, arm_set, T, config, rng):
        super().__init__(arm_set, T, config, rng)
        rho = rho_value(arm_set, fw=self._fw)
        self.R = (max(1, math.ceil(math.log2(rho * (1.0 - RHO_SLACK))))
                  if rho > 1 else 1)
        self.N = self.T // self.R
        if self.N == 0:
            raise BudgetError(
                f"budget T={T} too small for R={self.R} phases")
        self.survivors = list(range(arm_set.K))
        self._phase = 0
        self._lam = self._phase_design()

    def _phase_design(self):
        if len(self.survivors) == 1:
            xy_weights = np.zeros(self.arm_set.K)
            xy_weights[self.survivors[0]] = 1.0
        else:
            xy, _ = xy_optimal_cached(self.arm_set, tuple(self.survivors),
                                      self._fw[0], self._fw[1])
            xy_weights = xy.weights
        w = self.config.mix_weight
        return Design(self.arm_set,
                      (1.0 - w) * xy_weights + w * self.g_design.weights)

    def _eliminate(self):
        theta = estimate(self.state)
        values = self.arm_set.arms @ theta
        surv = np.asarray(sorted(self.survivors))
        ranked = surv[np.argsort(-values[surv], kind="stable")]
        current = rho_value(self.arm_set, ranked, self._fw)
        target = 0.5 * current * (1.0 + RHO_SLACK)
        k = 1
        for cand in range(len(ranked) - 1, 1, -1):
            if rho_value(self.arm_set, ranked[:cand], self._fw) <= target:
                k = cand
                break
        self.survivors = sorted(int(i) for i in ranked[:k])

    def _phase_of(self, t):
        return min((t - 1) // self.N, self.R - 1)

    def design_for_round(self, t):
        phase = self._phase_of(t)
        if phase != self._phase:
            self._phase = phase
            if len(self.survivors) > 1:
                self._eliminate()
            self._lam = self._phase_design()
        return self._lam

    def segment_end(self, t):
        phase = self._phase_of(t)
        if phase == self.R - 1:
            return self.T
        return (phase + 1) * self.N

    def recommend(self):
        theta = estimate(self.state)
        values = self.arm_set.arms @ theta
        if self.config.mix_weight > 0.0:
            return int(np.argmax(values))
        surv = sorted(self.survivors)
        return surv[int(np.argmax(values[surv]))]


ALGORITHMS = {
    "g_bai": GBai,
    "p1_rage": P1Rage,
    "p1_peace": P1Peace,
    "mixed_peace": MixedPeace,
    "peace_baseline": MixedPeace,
    "uniform": UniformSampling,
}


def make_algorithm(name, arm_set, T, config, rng):
    if name not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {name!r}; valid: {sorted(ALGORITHMS)}")
    config = config if config is not None else AlgoConfig()
    if name == "peace_baseline" and config.mix_weight != 0.0:
        config = AlgoConfig(m=config.m, fw_iters=config.fw_iters,
                            fw_tol=config.fw_tol,
                            epoch_sync=config.epoch_sync, mix_weight=0.0)
    return ALGORITHMS[name](arm_set, T, config, rng)


def run_episode(algo, seq, noise, clip=False, batched=True):
    """Play all T rounds and return the recommendation index.

    The batched path draws each constant-design segment's pulls, noise,
    and IPS update in one shot; set ``batched=False`` for the literal
    round-by-round loop (same distribution, slower).
    """
    arms = algo.arm_set.arms
    t = 1
    while t <= algo.T:
        design = algo.design_for_round(t)
        algo._design = design
        end = algo.segment_end(t) if batched else t
        n = end - t + 1
        idx = design.sample(algo.rng, n)
        means = np.einsum("ij,ij->i", seq.thetas()[t - 1:end], arms[idx])
        rewards = means + noise.sample(algo.rng, n)
        if clip:
            rewards = np.clip(rewards, -1.0, 1.0)
        algo.state = ips_update_batch(algo.state, design, idx, rewards)
        t = end + 1
    return algo.recommend()


def _run(cls, arm_set, seq, noise, T, rng, config=None):
    algo = cls(arm_set, T, config if config is not None else AlgoConfig(),
               rng)
    return run_episode(algo, seq, noise)


def run_gbai(arm_set, seq, noise, T, rng, config=None):
    return _run(GBai, arm_set, seq, noise, T, rng, config)


def run_p1rage(arm_set, seq, noise, T, config, rng):
    return _run(P1Rage, arm_set, seq, noise, T, rng, config)


def run_p1peace(arm_set, seq, noise, T, config, rng):
    return _run(P1Peace, arm_set, seq, noise, T, rng, config)


def run_mixed_peace(arm_set, seq, noise, T, config, rng):
    return _run(MixedPeace, arm_set, seq, noise, T, rng, config)


def run_uniform(arm_set, seq, noise, T, rng, config=None):
    return _run(UniformSampling, arm_set, seq, noise, T, rng, config)
