"""Exponentially weighted average forecaster for full-information games."""

from __future__ import annotations

import math
from typing import Optional

from ..core.game import Game, is_full_information
from ..errors import DimensionMismatch, NotFullInformation, UnknownFeedbackSymbol
from .base import BaseLearner, sample_index


class EWA(BaseLearner):
    """
    Plays the softmax of ``-eta x cumulative loss``.

    In a full-information game every feedback row tells the outcomes apart,
    so the outcome (and with it the whole loss column) is decoded from the
    symbol of whichever action was played. Tuned with
    ``eta = sqrt(8 ln N / T)``; a None horizon uses ``sqrt(8 ln N / t)``.
    """

    name = "ewa"

    def __init__(self, game: Game, eta: Optional[float] = None):
        super().__init__()
        if not is_full_information(game):
            raise NotFullInformation(
                f"EWA needs every feedback row of '{game.name}' to reveal the outcome"
            )
        if eta is not None and eta < 0:
            raise ValueError(f"eta must be >= 0, got {eta}")
        self.game = game
        self._fixed_eta = eta
        self._decode = tuple({h: j for j, h in enumerate(row)} for row in game.feedback)
        self._columns = [list(col) for col in game.float_loss().T]
        self._cumulative: list[float] = []
        self._rounds = 0
        self.eta = 0.0

    @property
    def cumulative_loss(self) -> list[float]:
        return list(self._cumulative)

    def _eta(self) -> float:
        if self._fixed_eta is not None:
            return self._fixed_eta
        horizon = self._horizon if self._horizon else self._rounds + 1
        return math.sqrt(8 * math.log(self._n_actions) / horizon)

    def _reset(self) -> None:
        if self._n_actions != self.game.n_actions:
            raise DimensionMismatch(
                f"EWA for '{self.game.name}' has {self.game.n_actions} actions, started with {self._n_actions}"
            )
        self._cumulative = [0.0] * self._n_actions
        self._rounds = 0
        self.eta = self._eta()

    def probabilities(self) -> list[float]:
        self._require_started("probabilities")
        self.eta = self._eta()
        scores = [-self.eta * c for c in self._cumulative]
        top = max(scores)
        w = [math.exp(s - top) for s in scores]
        total = sum(w)
        return [x / total for x in w]

    def _choose(self, rng) -> int:
        self.last_probabilities = self.probabilities()
        return sample_index(self.last_probabilities, rng.random())

    def decode_outcome(self, action: int, symbol) -> int:
        """1-based outcome revealed by *symbol* when *action* was played."""
        try:
            return self._decode[action - 1][symbol] + 1
        except KeyError:
            raise UnknownFeedbackSymbol(
                f"action {action} never shows symbol {symbol!r} in game '{self.game.name}'"
            )

    def _update(self, action: int, feedback) -> None:
        column = self._columns[self.decode_outcome(action, feedback) - 1]
        self._cumulative = [c + x for c, x in zip(self._cumulative, column)]
        self._rounds += 1
