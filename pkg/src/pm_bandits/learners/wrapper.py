"""
Run a bandit learner on a game that reduces to a bandit game.

The wrapper plays whatever the inner learner picks. When the source game
shows feedback symbol h after action i, the inner learner is fed the loss
``feedback_to_loss[i](h)`` it would have suffered in the bandit game. Both
learners therefore pick the same actions on the same random stream, and
regret on the source is ``b`` times regret on the bandit game.
"""

from __future__ import annotations

from ..errors import PreconditionViolated, WrongArity
from ..reduction import BanditReduction, certificate_tol, verify_reduction
from .base import BaseLearner


class ReducedLearner(BaseLearner):
    def __init__(self, reduction: BanditReduction, inner: BaseLearner):
        super().__init__()
        self.reduction = reduction
        self.inner = inner
        self.name = f"reduced:{inner.name}"

    def _reset(self) -> None:
        if self._n_actions != 2:
            raise WrongArity(self._n_actions, "ReducedLearner")
        self.inner.start(2, self._horizon)

    def _choose(self, rng) -> int:
        action = self.inner.act(rng)
        self.last_probabilities = self.inner.last_probabilities
        return action

    def _update(self, action: int, feedback) -> None:
        self.inner.observe(self.reduction.surrogate_loss(action, feedback))


def wrap_reduction(reduction: BanditReduction, inner: BaseLearner, tol: float | None = None) -> ReducedLearner:
    """Source-game learner driving *inner* through the reduction's feedback maps."""
    report = verify_reduction(reduction, tol=certificate_tol(reduction, tol))
    if not report.passed:
        raise PreconditionViolated(f"reduction failed its checks: {report.failed()}")
    return ReducedLearner(reduction, inner)
