"""
Partial-Monitoring Bandits
==========================

Classify finite two-action partial-monitoring games, reduce every
non-trivial one to a two-action bandit game, and check by simulation that
its minimax regret grows like sqrt(T).

    from pm_bandits import builtin_game, classify, reduce_to_bandit

    game = builtin_game("apple")
    classify(game).tag            # GameTag.BANDIT_REDUCIBLE
    reduce_to_bandit(game).scale  # 2
"""

__version__ = "1.0.0"

from .adversary import (
    Distribution,
    IndistinguishablePair,
    SignConstant,
    balanced_interior_point,
    indistinguishable_pair,
    kernel_witness,
    sample_outcomes,
)
from .classification import GameClass, GameTag, classify
from .core import (
    Game,
    RunTrace,
    best_fixed_action,
    cumulative_regret_path,
    dominant_action,
    is_bandit_game,
    is_full_information,
    regret,
    validate_game,
)
from .io import builtin_game, builtin_games, load_game
from .learners import build_learner, wrap_reduction
from .reduction import (
    BanditReduction,
    IndicatorMatrix,
    bandit_from_linear,
    build_indicator_matrix,
    build_signal_rows,
    feedback_distribution,
    has_linear_structure,
    reduce_to_bandit,
    solve_signal_decomposition,
    verify_reduction,
)
from .simulator import (
    ExperimentConfig,
    lower_bound_experiment,
    run,
    run_many,
    scaling_experiment,
)
from .transforms import (
    FeedbackRelabel,
    TransformTranscript,
    canonicalize_feedback,
    column_shift,
    relabel_feedback,
    replay_transcript,
)

__all__ = [
    "BanditReduction",
    "Distribution",
    "ExperimentConfig",
    "FeedbackRelabel",
    "Game",
    "GameClass",
    "GameTag",
    "IndicatorMatrix",
    "IndistinguishablePair",
    "RunTrace",
    "SignConstant",
    "TransformTranscript",
    "balanced_interior_point",
    "bandit_from_linear",
    "best_fixed_action",
    "build_indicator_matrix",
    "build_learner",
    "build_signal_rows",
    "builtin_game",
    "builtin_games",
    "canonicalize_feedback",
    "classify",
    "column_shift",
    "cumulative_regret_path",
    "dominant_action",
    "feedback_distribution",
    "has_linear_structure",
    "indistinguishable_pair",
    "is_bandit_game",
    "is_full_information",
    "kernel_witness",
    "load_game",
    "lower_bound_experiment",
    "reduce_to_bandit",
    "regret",
    "relabel_feedback",
    "replay_transcript",
    "run",
    "run_many",
    "sample_outcomes",
    "scaling_experiment",
    "solve_signal_decomposition",
    "validate_game",
    "verify_reduction",
    "wrap_reduction",
]
