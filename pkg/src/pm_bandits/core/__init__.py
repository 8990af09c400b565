from .game import (
    FeedbackSymbol,
    Game,
    best_fixed_action,
    cumulative_regret_path,
    dominant_action,
    is_bandit_game,
    is_full_information,
    regret,
    validate_game,
    with_loss,
)
from .trace import RunTrace

__all__ = [
    "FeedbackSymbol",
    "Game",
    "RunTrace",
    "best_fixed_action",
    "cumulative_regret_path",
    "dominant_action",
    "is_bandit_game",
    "is_full_information",
    "regret",
    "validate_game",
    "with_loss",
]
