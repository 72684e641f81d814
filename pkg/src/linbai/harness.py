"""Deterministic experiment runner: sweeps, parallel trials, CSV output.

Every trial draws its generator from the counter tuple
``(seed, sweep_index, algo_index, trial_index)``, so results are
bit-identical for any worker count and trials can run in any order.
"""

import json
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from joblib import Parallel, delayed

from .algorithms import AlgoConfig, make_algorithm, run_episode
from .complexity import complexity_report
from .errors import ConfigError, InstanceError, NonUniqueBestArmError
from .instances import (NoiseModel, PeriodicSequence, StationarySequence,
                        benchmark_sequence, gap_profile, malicious_sequence,
                        multivariate_instance, oscillating_sequence,
                        soare_instance, weekly_phases)

WILSON_Z = 1.959964
CSV_HEADER = ("instance,sweep_param,sweep_value,algorithm,trials,errors,"
              "error_rate,ci_low,ci_high,min_gap,wall_ms")

ALGO_FIELDS = ("m", "fw_iters", "fw_tol", "epoch_sync", "mix_weight")
KNOWN_ALGOS = ("g_bai", "p1_rage", "p1_peace", "mixed_peace",
               "peace_baseline", "uniform")
INSTANCE_KINDS = ("soare", "multivariate", "malicious", "benchmark", "weekly")
SWEEP_PARAMS = ("s", "L", "T", "omega", "d", "D")


@dataclass(frozen=True)
class ExperimentConfig:
    instance: dict
    algorithms: tuple
    T: int
    trials: int
    noise: dict = field(default_factory=lambda: {"kind": "uniform",
                                                 "sigma": 1.0})
    workers: int = 1
    out: Optional[str] = None
    sweep: Optional[dict] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.T < 1:
            raise ConfigError("T must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not self.algorithms:
            raise ConfigError("need at least one algorithm")
        for spec in self.algorithms:
            if spec.get("name") not in KNOWN_ALGOS:
                raise ConfigError(
                    f"unknown algorithm {spec.get('name')!r}; "
                    f"valid: {list(KNOWN_ALGOS)}")
            for key in spec:
                if key != "name" and key not in ALGO_FIELDS:
                    raise ConfigError(f"unknown algorithm field {key!r}")
        if self.instance.get("kind") not in INSTANCE_KINDS:
            raise ConfigError(
                f"unknown instance kind {self.instance.get('kind')!r}; "
                f"valid: {list(INSTANCE_KINDS)}")
        if self.sweep is not None:
            param = self.sweep.get("param")
            values = self.sweep.get("values")
            if param not in SWEEP_PARAMS:
                raise ConfigError(f"unknown sweep parameter {param!r}")
            if not values:
                raise ConfigError("sweep values must be non-empty")
            if not all(np.isfinite(v) for v in values):
                raise ConfigError("sweep values must be finite")

    def to_dict(self):
        d = {"instance": dict(self.instance),
             "algorithms": [dict(a) for a in self.algorithms],
             "T": self.T, "trials": self.trials, "noise": dict(self.noise),
             "workers": self.workers}
        if self.out is not None:
            d["out"] = self.out
        if self.sweep is not None:
            d["sweep"] = dict(self.sweep)
        return d

    @staticmethod
    def from_dict(d):
        if not isinstance(d, dict):
            raise ConfigError("config must be a mapping")
        try:
            return ExperimentConfig(
                instance=dict(d["instance"]),
                algorithms=tuple(dict(a) for a in d["algorithms"]),
                T=int(d["T"]), trials=int(d["trials"]),
                noise=dict(d.get("noise", {"kind": "uniform", "sigma": 1.0})),
                workers=int(d.get("workers", 1)),
                out=d.get("out"),
                sweep=dict(d["sweep"]) if d.get("sweep") else None)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad config: {exc}") from exc

    @staticmethod
    def from_file(path):
        try:
            with open(path, encoding="utf-8") as fh:
                return ExperimentConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc


@dataclass(frozen=True)
class ResultRow:
    instance: str
    sweep_param: str
    sweep_value: object
    algorithm: str
    trials: int
    errors: int
    error_rate: float
    ci_low: float
    ci_high: float
    min_gap: float
    wall_ms: Optional[float] = None
    failed: Optional[str] = None


def wilson_ci(errors, trials, level=0.95):
    """Wilson score interval for a binomial proportion."""
    if not 0 <= errors <= trials or trials < 1:
        raise ValueError("need 0 <= errors <= trials, trials >= 1")
    if level == 0.95:
        z = WILSON_Z
    else:
        from scipy.stats import norm
        z = float(norm.ppf(0.5 + level / 2.0))
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials
                                   + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def instance_label(spec):
    parts = [spec["kind"]]
    for key in ("d", "D", "omega", "alpha1", "alpha2", "s", "L"):
        if key in spec:
            parts.append(f"{key}={spec[key]:g}")
    # ';' separator keeps the label comma-free so CSV rows need no quoting
    return spec["kind"] if len(parts) == 1 else \
        f"{parts[0]}({';'.join(parts[1:])})"


def build_instance(spec, T, sweep_index=0):
    """Construct (arm_set, parameter sequence) for one sweep point.

    Instance-level randomness (theta*, oscillation draws) comes from
    counter-derived generators so the same instance is shared by all
    algorithms at that sweep point.
    """
    kind = spec["kind"]
    seed = int(spec.get("seed", 0))
    base_rng = np.random.default_rng([seed, 0xA5])
    sweep_rng = np.random.default_rng([seed, 0xB6, sweep_index])
    if kind == "soare":
        arms, theta_star = soare_instance(int(spec.get("d", 10)),
                                          float(spec.get("omega", 0.1)))
        if spec.get("s"):
            seq = oscillating_sequence(theta_star, float(spec["s"]),
                                       int(spec["L"]), T, sweep_rng, arms)
        else:
            seq = StationarySequence(theta_star, T)
        return arms, seq
    if kind == "multivariate":
        arms, theta_star = multivariate_instance(
            int(spec.get("D", 4)), float(spec.get("alpha1", 1.0)),
            float(spec.get("alpha2", 0.5)), base_rng)
        if spec.get("s"):
            seq = oscillating_sequence(theta_star, float(spec["s"]),
                                       int(spec["L"]), T, sweep_rng, arms)
        else:
            seq = StationarySequence(theta_star, T)
        return arms, seq
    if kind == "malicious":
        return malicious_sequence(int(spec.get("d", 10)), T)
    if kind == "benchmark":
        d = int(spec.get("d", 10))
        arms, _ = soare_instance(d, float(spec.get("omega", 0.5)))
        seq = benchmark_sequence(d, float(spec.get("s", 1.0)),
                                 int(spec.get("L", 200)), T)
        return arms, seq
    if kind == "weekly":
        arms, theta_star = multivariate_instance(
            int(spec.get("D", 4)), float(spec.get("alpha1", 1.0)),
            float(spec.get("alpha2", 0.5)), base_rng)
        if "phases" in spec and spec["phases"] is not None:
            phases = np.asarray(spec["phases"], dtype=np.float64)
        else:
            phases = weekly_phases(theta_star, arms, sweep_rng)
        L = int(spec.get("L", max(1, T // (3 * len(phases)))))
        return arms, PeriodicSequence(phases, L, T)
    raise ConfigError(f"unknown instance kind {kind!r}")


def _algo_config(spec):
    kwargs = {k: spec[k] for k in ALGO_FIELDS if k in spec}
    return AlgoConfig(**kwargs)


def _apply_sweep(config, value):
    """Return (instance spec, T) with the sweep parameter substituted."""
    spec = dict(config.instance)
    T = config.T
    if config.sweep is None:
        return spec, T
    param = config.sweep["param"]
    if param == "T":
        T = int(value)
    else:
        spec[param] = value
    return spec, T


def run_trials(config, sweep_index, algo_index, trial_indices):
    """Run a contiguous block of trials; returns per-trial 0/1 errors."""
    value = (config.sweep["values"][sweep_index]
             if config.sweep is not None else None)
    spec, T = _apply_sweep(config, value)
    seed = int(config.instance.get("seed", 0))
    arms, seq = build_instance(spec, T, sweep_index)
    best = int(np.argmax(arms.arms @ seq.mean_theta()))
    noise = NoiseModel(config.noise.get("kind", "uniform"),
                       float(config.noise.get("sigma", 1.0)))
    clip = bool(config.noise.get("clip", False))
    algo_spec = config.algorithms[algo_index]
    name = algo_spec["name"]
    cfg = _algo_config({k: v for k, v in algo_spec.items() if k != "name"})
    out = []
    for ti in trial_indices:
        rng = np.random.default_rng([seed, sweep_index, algo_index, int(ti)])
        algo = make_algorithm(name, arms, T, cfg, rng)
        rec = run_episode(algo, seq, noise, clip=clip)
        out.append(0 if rec == best else 1)
    return out


def run_experiment(config, timing=False, progress=None):
    """Run the full sweep x algorithm grid and return ResultRows in
    deterministic (sweep, algorithm) order."""
    rows = []
    values = config.sweep["values"] if config.sweep is not None else [None]
    param = config.sweep["param"] if config.sweep is not None else ""
    pool = Parallel(n_jobs=config.workers) if config.workers > 1 else None
    for si, value in enumerate(values):
        spec, T = _apply_sweep(config, value)
        label = instance_label(spec)
        try:
            arms, seq = build_instance(spec, T, si)
            min_gap = gap_profile(arms, seq.mean_theta()).min_gap
        except (InstanceError, NonUniqueBestArmError, ValueError) as exc:
            for algo_spec in config.algorithms:
                rows.append(ResultRow(label, param, value,
                                      algo_spec["name"], 0, 0,
                                      math.nan, math.nan, math.nan,
                                      math.nan, None, failed=str(exc)))
            continue
        for ai, algo_spec in enumerate(config.algorithms):
            start = time.perf_counter()
            chunks = np.array_split(np.arange(config.trials),
                                    min(config.workers, config.trials))
            chunks = [c for c in chunks if c.size]
            if pool is None:
                results = [run_trials(config, si, ai, c) for c in chunks]
            else:
                results = pool(delayed(run_trials)(config, si, ai, c)
                               for c in chunks)
            flat = [e for chunk in results for e in chunk]
            errors = int(sum(flat))
            rate = errors / config.trials
            lo, hi = wilson_ci(errors, config.trials)
            wall = (time.perf_counter() - start) * 1000.0
            rows.append(ResultRow(label, param, value, algo_spec["name"],
                                  config.trials, errors, rate, lo, hi,
                                  min_gap, wall if timing else None))
            if progress is not None:
                progress(rows[-1])
    return rows


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isnan(x):
        return ""
    return format(float(x), ".17g")


def rows_to_csv(rows):
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r.instance, r.sweep_param, _fmt(r.sweep_value), r.algorithm,
            _fmt(r.trials), _fmt(r.errors), _fmt(r.error_rate),
            _fmt(r.ci_low), _fmt(r.ci_high), _fmt(r.min_gap),
            _fmt(r.wall_ms)]))
    return "\n".join(lines) + "\n"


def write_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rows_to_csv(rows))


def complexity_rows(config):
    """ComplexityReport per sweep point, for `bai complexity`."""
    values = config.sweep["values"] if config.sweep is not None else [None]
    out = []
    for si, value in enumerate(values):
        spec, T = _apply_sweep(config, value)
        arms, seq = build_instance(spec, T, si)
        m = max((a.get("m", 15) for a in config.algorithms), default=15)
        out.append((instance_label(spec), value,
                    complexity_report(arms, seq.mean_theta(), m=m)))
    return out


# ---------------------------------------------------------------------------
# Presets: the standard experiment families at desk scale.

_DEFAULT_ALGOS = ({"name": "g_bai"}, {"name": "p1_rage"},
                  {"name": "p1_peace"}, {"name": "mixed_peace"},
                  {"name": "uniform"})


def _preset_configs():
    uniform_noise = {"kind": "uniform", "sigma": 1.0}
    return {
        "soare_stationary": ExperimentConfig(
            instance={"kind": "soare", "d": 10, "omega": 0.1, "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise,
            sweep={"param": "T", "values": [1000, 2000, 5000, 10_000]}),
        "multivariate_s_sweep": ExperimentConfig(
            instance={"kind": "multivariate", "D": 4, "alpha1": 1.0,
                      "alpha2": 0.5, "L": 900, "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise,
            sweep={"param": "s", "values": list(range(10))}),
        "multivariate_L_sweep": ExperimentConfig(
            instance={"kind": "multivariate", "D": 4, "alpha1": 1.0,
                      "alpha2": 0.5, "s": 2, "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise,
            sweep={"param": "L", "values": list(range(300, 3001, 300))}),
        "malicious": ExperimentConfig(
            instance={"kind": "malicious", "d": 10, "seed": 7},
            algorithms=({"name": "p1_rage"}, {"name": "g_bai"},
                        {"name": "peace_baseline"}),
            T=10_000, trials=500, noise=uniform_noise),
        "benchmark_s_sweep": ExperimentConfig(
            instance={"kind": "benchmark", "d": 10, "omega": 0.5, "L": 200,
                      "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise,
            sweep={"param": "s", "values": list(range(10))}),
        "benchmark_L_sweep": ExperimentConfig(
            instance={"kind": "benchmark", "d": 10, "omega": 0.5, "s": 1,
                      "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise,
            sweep={"param": "L", "values": list(range(300, 3001, 300))}),
        "weekly_periodic": ExperimentConfig(
            instance={"kind": "weekly", "D": 4, "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=21_000, trials=1000,
            noise=uniform_noise),
        "multivariate_stationary": ExperimentConfig(
            instance={"kind": "multivariate", "D": 4, "alpha1": 1.0,
                      "alpha2": 0.5, "seed": 7},
            algorithms=_DEFAULT_ALGOS, T=10_000, trials=1000,
            noise=uniform_noise),
    }


def preset_names():
    return sorted(_preset_configs())


def preset(name, trials=None, workers=None, seed=None, out=None):
    configs = _preset_configs()
    if name not in configs:
        raise ConfigError(
            f"unknown preset {name!r}; valid: {preset_names()}")
    cfg = configs[name].to_dict()
    if trials is not None:
        cfg["trials"] = trials
    if workers is not None:
        cfg["workers"] = workers
    if seed is not None:
        cfg["instance"]["seed"] = seed
    if out is not None:
        cfg["out"] = out
    return ExperimentConfig.from_dict(cfg)
