from .experiments import (
    Adversary,
    ExperimentConfig,
    ExperimentResult,
    LawEstimate,
    LowerBoundReport,
    RunTask,
    ScalingReport,
    balanced_adversary,
    execute,
    exp3_envelope,
    fit_loglog,
    lower_bound_experiment,
    run_many,
    scaling_experiment,
    stream_seeds,
)
from .protocol import run

__all__ = [
    "Adversary",
    "ExperimentConfig",
    "ExperimentResult",
    "LawEstimate",
    "LowerBoundReport",
    "RunTask",
    "ScalingReport",
    "balanced_adversary",
    "execute",
    "exp3_envelope",
    "fit_loglog",
    "lower_bound_experiment",
    "run",
    "run_many",
    "scaling_experiment",
    "stream_seeds",
]
