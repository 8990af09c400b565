"""
The repeated game between a learner and an oblivious adversary.

Round t: the learner picks I_t, the adversary's J_t (fixed in advance) is
looked up, the learner receives ``h[I_t, J_t]`` and silently suffers
``loss[I_t, J_t]``. The learner never receives the loss or the outcome.
"""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from ..adversary import make_rng
from ..core.game import Game, best_fixed_action, cumulative_regret_path, outcome_indices
from ..core.trace import RunTrace
from ..errors import ActionOutOfRange
from ..learners.base import BaseLearner

logger = logging.getLogger(__name__)


def _expected_regret(game: Game, probabilities: np.ndarray, j_idx: np.ndarray, outcomes) -> float:
    """``sum_t p_t^T loss[:, J_t] - L_T*`` over the whole run."""
    columns = game.float_loss()[:, j_idx].T  # T x N
    _, best = best_fixed_action(game, outcomes)
    return float(np.sum(probabilities * columns) - float(best))


def run(
    game: Game,
    learner: BaseLearner,
    outcomes: Sequence[int],
    seed=None,
    record_probabilities: bool = True,
) -> RunTrace:
    """
    Play *learner* against the outcome sequence and return the trace.

    *seed* (an int, a SeedSequence or a Generator) drives the learner's
    random stream. Learner errors propagate unchanged.
    """
    j_idx = outcome_indices(game, outcomes)
    horizon = int(j_idx.size)
    rng = make_rng(seed)
    learner.start(game.n_actions, horizon)

    feedback = game.feedback
    n_actions = game.n_actions
    actions = np.empty(horizon, dtype=int)
    seen = []
    probs = [] if record_probabilities else None
    for t, j in enumerate(j_idx.tolist()):
        i = learner.act(rng)
        if not 1 <= i <= n_actions:
            raise ActionOutOfRange(f"{learner.name} played action {i} outside 1..{n_actions}")
        actions[t] = i
        if probs is not None:
            probs.append(learner.last_probabilities)
        h = feedback[i - 1][j]
        seen.append(h)
        learner.observe(h)

    outcomes = j_idx + 1
    losses = game.loss[actions - 1, j_idx] if horizon else np.zeros(0, dtype=game.loss.dtype)
    cumulative = cumulative_regret_path(game, actions, outcomes)

    probabilities = expected = None
    if probs is not None and horizon and all(p is not None for p in probs):
        probabilities = np.asarray(probs, dtype=float)
        expected = _expected_regret(game, probabilities, j_idx, outcomes)

    trace = RunTrace(
        game_name=game.name,
        learner=learner.name,
        actions=actions,
        outcomes=outcomes,
        feedback=tuple(seen),
        losses=losses,
        cumulative_regret=cumulative,
        seed=seed if isinstance(seed, (int, np.integer)) else None,
        probabilities=probabilities,
        expected_regret=expected,
    )
    logger.debug("%s on %s: T=%d regret=%s", learner.name, game.name, horizon, trace.regret)
    return trace
