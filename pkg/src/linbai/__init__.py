"""Fixed-budget best-arm identification for linear bandits that stays
robust when the reward parameter drifts over time.

Highlights:

* Frank-Wolfe solvers for G-optimal and XY-optimal experimental designs
  (compiled kernel with a pure-numpy fallback),
* an inverse-propensity-score estimator of the time-averaged parameter,
* the G-BAI, P1-RAGE, P1-Peace, and Mixed-Peace identification
  algorithms plus uniform and hard-elimination baselines,
* problem-complexity metrics and a deterministic experiment harness with
  the ``bai`` command-line interface.
"""

from ._fw import HAVE_COMPILED_CORE
from .algorithms import (AlgoConfig, GBai, MixedPeace, P1Peace, P1Rage,
                         UniformSampling, epoch_length, make_algorithm,
                         peace_elimination, rage_elimination, rho_value,
                         run_episode, run_gbai, run_mixed_peace, run_p1peace,
                         run_p1rage, run_uniform)
from .complexity import (ComplexityReport, complexity_report, h_bob, h_gbai,
                         h_p1rage, i_zero, rho_star)
from .designs import (ArmSet, Design, g_optimal, g_optimal_cached,
                      mahalanobis_sq, mix, xy_optimal, xy_optimal_cached)
from .errors import (BudgetError, ConfigError, EmptyEstimatorError,
                     InstanceError, NonUniqueBestArmError, SolverError,
                     SpanError)
from .estimation import EstimatorState, estimate, ips_update, ips_update_batch
from .harness import (ExperimentConfig, ResultRow, build_instance, preset,
                      preset_names, run_experiment, wilson_ci, write_csv)
from .instances import (GapProfile, NoiseModel, OscillatingSequence,
                        ParameterSequence, PeriodicSequence,
                        PiecewiseConstantSequence, StationarySequence,
                        benchmark_sequence, gap_profile, malicious_sequence,
                        multivariate_instance, oscillating_sequence,
                        periodic_sequence, sample_reward, soare_instance,
                        weekly_phases)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
