from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from .game import FeedbackSymbol


@dataclass(frozen=True, eq=False)
class RunTrace:
    """
    Per-round record of one simulated game.

    ``actions`` and ``outcomes`` are 1-based. ``cumulative_regret[t]`` is the
    realized regret after round t+1. When the learner exposed its action
    distribution, ``probabilities`` (T x N) and the probability-weighted
    ``expected_regret`` are filled in.
    """

    game_name: str
    learner: str
    actions: np.ndarray
    outcomes: np.ndarray
    feedback: tuple[FeedbackSymbol, ...]
    losses: np.ndarray
    cumulative_regret: np.ndarray
    seed: Optional[int] = None
    probabilities: Optional[np.ndarray] = None
    expected_regret: Optional[float] = None

    @property
    def horizon(self) -> int:
        return len(self.actions)

    @property
    def regret(self) -> float:
        return float(self.cumulative_regret[-1]) if self.horizon else 0.0

    @property
    def total_loss(self) -> float:
        return float(np.sum(self.losses))

    def action_count(self, action: int) -> int:
        return int(np.count_nonzero(self.actions == action))

    @property
    def mu(self) -> int:
        """Number of rounds action 2 was played."""
        return self.action_count(2)

    def to_frame(self) -> pd.DataFrame:
        """Long-format per-round table."""
        return pd.DataFrame(
            {
                "t": np.arange(1, self.horizon + 1),
                "action": self.actions,
                "outcome": self.outcomes,
                "feedback": list(self.feedback),
                "loss": self.losses,
                "cumulative_regret": self.cumulative_regret,
            }
        )
