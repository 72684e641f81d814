"""Exception types shared across the package."""


class SpanError(ValueError):
    """Arm set does not span the ambient space."""


class SolverError(RuntimeError):
    """A design solve failed (singular covariance or non-finite objective)."""


class InstanceError(RuntimeError):
    """An environment instance could not be constructed as requested."""


class NonUniqueBestArmError(ValueError):
    """The average parameter does not single out a unique best arm."""


class EmptyEstimatorError(RuntimeError):
    """estimate() called before any round was absorbed."""


class BudgetError(ValueError):
    """The time budget is too small for the algorithm's phase structure."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
