"""Online learners for the partial-monitoring protocol and the token factory."""

from __future__ import annotations

from typing import Optional

from ..core.game import Game
from ..errors import UnknownLearner
from ..reduction import reduce_to_bandit
from .base import BaseLearner, sample_index
from .baselines import ConstantLearner, UniformLearner
from .ewa import EWA
from .exp3 import Exp3, exp3_tuning, importance_weighted
from .wrapper import ReducedLearner, wrap_reduction

LEARNER_TOKENS = ("exp3", "exp3:anytime", "ewa", "uniform", "constant:<i>", "reduced:<inner>")


def build_learner(
    token: str,
    game: Optional[Game] = None,
    eta: Optional[float] = None,
    gamma: Optional[float] = None,
    tol: Optional[float] = None,
    exact: Optional[bool] = None,
) -> BaseLearner:
    """Factory constructing a learner from its CLI token.

    Args:
        token: one of ``exp3``, ``exp3:anytime``, ``ewa``, ``uniform``,
            ``constant:<i>`` or ``reduced:<inner>``.
        game: the game to be played; required by ``ewa`` (outcome decoding)
            and ``reduced:`` (the reduction is computed from it).
        eta, gamma: optional hyperparameter overrides.
        tol, exact: forwarded to the reduction for ``reduced:`` tokens.
    """
    token = (token or "").strip().lower()
    if token.startswith("reduced:"):
        if game is None:
            raise UnknownLearner(f"'{token}' needs the game to reduce")
        red = reduce_to_bandit(game, tol=tol, exact=exact)
        inner = build_learner(token.split(":", 1)[1], game=red.bandit_game, eta=eta, gamma=gamma)
        return wrap_reduction(red, inner, tol=tol)
    if token == "exp3":
        return Exp3(eta=eta, gamma=gamma)
    if token == "exp3:anytime":
        return Exp3(eta=eta, gamma=gamma, anytime=True)
    if token == "ewa":
        if game is None:
            raise UnknownLearner("'ewa' needs the game to decode outcomes")
        return EWA(game, eta=eta)
    if token == "uniform":
        return UniformLearner()
    if token.startswith("constant:"):
        try:
            action = int(token.split(":", 1)[1])
        except ValueError:
            raise UnknownLearner(f"bad constant learner token '{token}'")
        return ConstantLearner(action)
    raise UnknownLearner(f"Unsupported learner '{token}'. Use one of {', '.join(LEARNER_TOKENS)}.")


__all__ = [
    "BaseLearner",
    "ConstantLearner",
    "EWA",
    "Exp3",
    "LEARNER_TOKENS",
    "ReducedLearner",
    "UniformLearner",
    "build_learner",
    "exp3_tuning",
    "importance_weighted",
    "sample_index",
    "wrap_reduction",
]
