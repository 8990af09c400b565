"""Feedback-ignoring baselines."""

from __future__ import annotations

from ..errors import ActionOutOfRange
from .base import BaseLearner, sample_index


class ConstantLearner(BaseLearner):
    """Always plays the same action."""

    def __init__(self, action: int):
        super().__init__()
        if action < 1:
            raise ActionOutOfRange(f"action must be >= 1, got {action}")
        self.action = int(action)
        self.name = f"constant:{self.action}"

    def _reset(self) -> None:
        if self.action > self._n_actions:
            raise ActionOutOfRange(f"action {self.action} outside 1..{self._n_actions}")
        self.last_probabilities = [float(i == self.action) for i in range(1, self._n_actions + 1)]

    def _choose(self, rng) -> int:
        return self.action

    def _update(self, action: int, feedback) -> None:
        pass


class UniformLearner(BaseLearner):
    """Plays uniformly at random; one draw per round, like every other learner."""

    name = "uniform"

    def _reset(self) -> None:
        self.last_probabilities = [1.0 / self._n_actions] * self._n_actions

    def _choose(self, rng) -> int:
        return sample_index(self.last_probabilities, rng.random())

    def _update(self, action: int, feedback) -> None:
        pass
