"""
Trichotomy of finite partial-monitoring games.

Tests run in a fixed order:

1. an action that is never worse than any other -> ``TrivialZero``
   (any N; zero minimax regret by always playing it);
2. ``ell`` in the row space of the indicator matrix -> ``BanditReducible``
   with a verified :class:`~pm_bandits.reduction.BanditReduction`;
3. otherwise -> ``HardLinear`` with a kernel witness v and an
   indistinguishable pair of outcome laws forcing linear regret.

A game that is both dominated and reducible is reported as TrivialZero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .adversary import IndistinguishablePair, indistinguishable_pair
from .core.game import Game, dominant_action
from .errors import NotReducible, PreconditionViolated, SolverError, WrongArity
from .rational import as_rational_array
from .rational import rank as rational_rank
from .reduction import (
    BanditReduction,
    certificate_tol,
    reduce_to_bandit,
    signal_system,
    verify_reduction,
)
from .settings import EXPERIMENT_SETTINGS, resolve_tol

logger = logging.getLogger(__name__)


class GameTag(Enum):
    TRIVIAL_ZERO = "TrivialZero"
    BANDIT_REDUCIBLE = "BanditReducible"
    HARD_LINEAR = "HardLinear"

    @property
    def exit_code(self) -> int:
        return {"TrivialZero": 0, "BanditReducible": 1, "HardLinear": 2}[self.value]

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, eq=False)
class GameClass:
    """Result of :func:`classify`; exactly one payload is set, matching ``tag``."""

    tag: GameTag
    game: Game
    dominant_action: Optional[int] = None
    reduction: Optional[BanditReduction] = None
    pair: Optional[IndistinguishablePair] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def witness(self) -> Optional[np.ndarray]:
        return None if self.pair is None else self.pair.v

    @property
    def exit_code(self) -> int:
        return self.tag.exit_code

    def summary(self) -> str:
        if self.tag is GameTag.TRIVIAL_ZERO:
            return f"{self.tag} (action {self.dominant_action} is never worse)"
        if self.tag is GameTag.BANDIT_REDUCIBLE:
            return f"{self.tag} (bandit scale b={float(self.reduction.scale):g})"
        return (
            f"{self.tag} (v={[round(float(x), 6) for x in self.pair.v]}, "
            f"eps={float(self.pair.epsilon):g}, ell.v={float(self.pair.ell_dot_v):g})"
        )

    def to_dict(self) -> dict:
        out = {
            "game": self.game.name,
            "tag": self.tag.value,
            "diagnostics": self.diagnostics,
        }
        if self.dominant_action is not None:
            out["dominant_action"] = self.dominant_action
        if self.reduction is not None:
            out["certificate"] = self.reduction.to_dict()
        if self.pair is not None:
            out["pair"] = self.pair.to_dict()
        return out


def _ranks(indicator, ell, exact: bool) -> tuple[int, int]:
    """Ranks of A^T and of the augmented [A^T | ell]."""
    At = indicator.A.T
    augmented = np.column_stack([At.astype(object), np.asarray(ell, dtype=object)])
    if exact:
        return rational_rank(as_rational_array(At)), rational_rank(as_rational_array(augmented))
    return (
        int(np.linalg.matrix_rank(At.astype(float))),
        int(np.linalg.matrix_rank(augmented.astype(float))),
    )


def classify(
    game: Game,
    tol: float | None = None,
    exact: bool | None = None,
    epsilon_fraction: float | None = None,
) -> GameClass:
    """
    Tag *game* as TrivialZero, BanditReducible or HardLinear.

    Raises WrongArity when no action dominates and N != 2.
    """
    tol = resolve_tol(tol)
    if epsilon_fraction is None:
        epsilon_fraction = EXPERIMENT_SETTINGS["epsilon_fraction"]

    dominant = dominant_action(game)
    if dominant is not None:
        logger.debug("'%s': action %d dominates", game.name, dominant)
        return GameClass(
            tag=GameTag.TRIVIAL_ZERO,
            game=game,
            dominant_action=dominant,
            diagnostics={"dominant_action": dominant},
        )
    if game.n_actions != 2:
        raise WrongArity(game.n_actions, "classify")

    ell, indicator, use_exact = signal_system(game, exact)
    rank_a, rank_aug = _ranks(indicator, ell, use_exact)
    diagnostics = {
        "exact": use_exact,
        "tol": tol,
        "block_sizes": list(indicator.block_sizes),
        "rank_A": rank_a,
        "rank_augmented": rank_aug,
    }

    try:
        red = reduce_to_bandit(game, tol=tol, exact=use_exact)
    except NotReducible as e:
        diagnostics["residual"] = e.residual
    else:
        report = verify_reduction(red, tol=certificate_tol(red, tol))
        if not report.passed:
            raise SolverError(
                f"reduction of '{game.name}' failed its own checks: {report.failed()}"
            )
        diagnostics.update(residual=red.residual, max_check_residual=report.max_residual)
        return GameClass(
            tag=GameTag.BANDIT_REDUCIBLE, game=game, reduction=red, diagnostics=diagnostics
        )

    try:
        pair = indistinguishable_pair(
            indicator, ell, tol=tol, epsilon_fraction=epsilon_fraction, exact=use_exact
        )
    except PreconditionViolated as e:
        raise SolverError(
            f"'{game.name}' is neither reducible nor has a usable witness: {e.reason}"
        ) from e
    diagnostics.update(
        epsilon=float(pair.epsilon),
        epsilon_max=float(pair.epsilon_max),
        ell_dot_v=float(pair.ell_dot_v),
        per_round_gap=pair.gap,
    )
    logger.debug("'%s' is hard: %s", game.name, diagnostics)
    return GameClass(tag=GameTag.HARD_LINEAR, game=game, pair=pair, diagnostics=diagnostics)
