"""Learner interface shared by every algorithm.

A learner only ever sees the number of actions, the horizon, and the
feedback symbol of the action it played. It never sees outcomes or losses
unless the game's feedback happens to reveal them.

Per round the simulator calls ``act(rng)`` once and then ``observe(feedback)``
once. All randomness comes from the injected generator, so two learners
driven by equal streams make equal draws.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..errors import ActionOutOfRange, NotStarted


def sample_index(probabilities: Sequence[float], u: float) -> int:
    """Inverse CDF: 1-based index of the first cumulative weight above u."""
    total = 0.0
    last = len(probabilities)
    for i, p in enumerate(probabilities, start=1):
        total += p
        if u < total:
            return i
    # u landed in the rounding gap at the top of the CDF
    while last > 1 and probabilities[last - 1] <= 0:
        last -= 1
    return last


class BaseLearner:
    """Common learner interface."""

    name = "learner"

    def __init__(self):
        self._n_actions: Optional[int] = None
        self._horizon: Optional[int] = None
        self._last_action: Optional[int] = None
        self.last_probabilities: Optional[list[float]] = None

    @property
    def n_actions(self) -> Optional[int]:
        return self._n_actions

    @property
    def horizon(self) -> Optional[int]:
        return self._horizon

    @property
    def started(self) -> bool:
        return self._n_actions is not None

    def start(self, n_actions: int, horizon: Optional[int] = None) -> None:
        """Reset all state for a new game with N actions (horizon None: anytime)."""
        if n_actions < 1:
            raise ActionOutOfRange(f"a learner needs at least one action, got {n_actions}")
        if horizon is not None and horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {horizon}")
        self._n_actions = int(n_actions)
        self._horizon = horizon
        self._last_action = None
        self.last_probabilities = None
        self._reset()

    def act(self, rng) -> int:
        self._require_started("act")
        action = self._choose(rng)
        self._last_action = action
        return action

    def observe(self, feedback) -> None:
        self._require_started("observe")
        if self._last_action is None:
            raise NotStarted(f"{self.name}: observe() called before act()")
        self._update(self._last_action, feedback)
        self._last_action = None

    def _require_started(self, what: str) -> None:
        if not self.started:
            raise NotStarted(f"{self.name}: {what}() called before start()")

    # --- hooks ---

    def _reset(self) -> None:  # pragma: no cover - interface
        pass

    def _choose(self, rng) -> int:  # pragma: no cover - interface
        raise NotImplementedError

    def _update(self, action: int, feedback) -> None:  # pragma: no cover - interface
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"
