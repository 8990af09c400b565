"""
Exp3 with loss estimates.

Each round plays ``p_i = (1 - gamma) w_i / sum(w) + gamma / N`` and, after
seeing the loss of the chosen action, charges the importance-weighted
estimate ``loss / p_chosen`` to that action only. Weights are kept in log
space so long horizons never underflow.

Tuning for a known horizon T::

    eta   = sqrt(2 ln N / (T N))
    gamma = min(1, sqrt(N ln N / ((e - 1) T)))

With ``anytime=True`` (or a ``None`` horizon) the learner runs epochs of
length 1, 2, 4, ... and restarts with that epoch's tuning.
"""

from __future__ import annotations

import logging
import math
from numbers import Real
from typing import Optional

from ..errors import LossOutOfRange
from .base import BaseLearner, sample_index

logger = logging.getLogger(__name__)


def exp3_tuning(n_actions: int, horizon: int) -> tuple[float, float]:
    """(eta, gamma) for N actions and horizon T."""
    if n_actions < 2:
        return 0.0, 0.0
    if horizon < 1:
        return 0.0, 1.0
    log_n = math.log(n_actions)
    eta = math.sqrt(2 * log_n / (horizon * n_actions))
    gamma = min(1.0, math.sqrt(n_actions * log_n / ((math.e - 1) * horizon)))
    return eta, gamma


def as_unit_loss(feedback) -> float:
    """Numeric feedback in [0, 1] as a float, else LossOutOfRange."""
    if isinstance(feedback, bool) or not isinstance(feedback, Real):
        raise LossOutOfRange(f"feedback {feedback!r} is not a numeric loss")
    loss = float(feedback)
    if not 0.0 <= loss <= 1.0:
        raise LossOutOfRange(f"loss {loss} outside [0, 1]")
    return loss


def importance_weighted(action: int, loss: float, probabilities) -> list[float]:
    """Loss estimate vector: ``loss / p_action`` at the played action, 0 elsewhere."""
    estimate = [0.0] * len(probabilities)
    estimate[action - 1] = loss / probabilities[action - 1]
    return estimate


class Exp3(BaseLearner):
    name = "exp3"

    def __init__(self, eta: Optional[float] = None, gamma: Optional[float] = None, anytime: bool = False):
        super().__init__()
        if eta is not None and eta < 0:
            raise ValueError(f"eta must be >= 0, got {eta}")
        if gamma is not None and not 0 <= gamma <= 1:
            raise ValueError(f"gamma must be in [0, 1], got {gamma}")
        self._fixed_eta = eta
        self._fixed_gamma = gamma
        self.anytime = anytime
        self.eta = 0.0
        self.gamma = 0.0
        self._log_weights: list[float] = []
        self._probabilities: list[float] = []
        self._epoch_end: Optional[int] = None
        self._rounds = 0

    # --- state ---

    @property
    def weights(self) -> list[float]:
        return [math.exp(x) for x in self._log_weights]

    def set_weights(self, weights) -> None:
        """Overwrite the (positive) weights, e.g. to resume from a checkpoint."""
        self._require_started("set_weights")
        if len(weights) != self._n_actions or any(not w > 0 for w in weights):
            raise ValueError(f"need {self._n_actions} positive weights, got {list(weights)}")
        self._log_weights = [math.log(w) for w in weights]
        self._refresh()

    def probabilities(self) -> list[float]:
        self._require_started("probabilities")
        return list(self._probabilities)

    def _tune(self, horizon: Optional[int]) -> None:
        eta, gamma = exp3_tuning(self._n_actions, horizon or 1)
        self.eta = eta if self._fixed_eta is None else self._fixed_eta
        self.gamma = gamma if self._fixed_gamma is None else self._fixed_gamma

    def _reset(self) -> None:
        self._rounds = 0
        self._log_weights = [0.0] * self._n_actions
        if self.anytime or self._horizon is None:
            self._epoch_end = 1
            self._tune(1)
        else:
            self._epoch_end = None
            self._tune(self._horizon)
        self._refresh()
        logger.debug("exp3 start N=%d eta=%.5g gamma=%.5g", self._n_actions, self.eta, self.gamma)

    def _refresh(self) -> None:
        top = max(self._log_weights)
        w = [math.exp(x - top) for x in self._log_weights]
        total = sum(w)
        n = self._n_actions
        self._probabilities = [(1.0 - self.gamma) * x / total + self.gamma / n for x in w]

    # --- protocol ---

    def _choose(self, rng) -> int:
        self.last_probabilities = list(self._probabilities)
        return sample_index(self._probabilities, rng.random())

    def _update(self, action: int, feedback) -> None:
        loss = as_unit_loss(feedback)
        if loss:
            estimate = importance_weighted(action, loss, self.last_probabilities)
            self._log_weights[action - 1] -= self.eta * estimate[action - 1]
        self._rounds += 1
        if self._epoch_end is not None and self._rounds >= self._epoch_end:
            # next doubling epoch
            length = 2 * self._epoch_end
            self._rounds = 0
            self._epoch_end = length
            self._log_weights = [0.0] * self._n_actions
            self._tune(length)
        self._refresh()
