"""Built-in checks run by ``pm-bandits selftest``."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .adversary import sample_outcomes
from .classification import GameTag, classify
from .errors import WrongArity
from .io import builtin_game
from .learners import Exp3, build_learner
from .reduction import build_indicator_matrix, reduce_to_bandit, verify_reduction
from .simulator.protocol import run

logger = logging.getLogger(__name__)

FOURWAY_FEEDBACK = [[1, 2, 3, 1], [1, 2, 2, 2]]
FOURWAY_INDICATOR = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [1, 0, 0, 0],
        [0, 1, 1, 1],
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SelftestReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


def check_fourway() -> tuple[bool, str]:
    indicator = build_indicator_matrix(FOURWAY_FEEDBACK)
    A = np.ascontiguousarray(indicator.A, dtype=np.int64)
    same = A.shape == FOURWAY_INDICATOR.shape and A.tobytes() == FOURWAY_INDICATOR.tobytes()
    return same, f"A={A.tolist()} block sizes {indicator.block_sizes}"


def check_apple_reduction() -> tuple[bool, str]:
    red = reduce_to_bandit(builtin_game("apple"), exact=True)
    report = verify_reduction(red)
    expected = [
        list(red.lam) == [-1, 1, 0],
        red.H.tolist() == [[-1, 1], [0, 0]],
        red.H_prime.tolist() == [[1, -1], [0, 0]],
        red.scale == 2,
        red.bandit_game.loss.tolist() == [[1.0, 0.0], [0.5, 0.5]],
        red.feedback_to_loss == ({1: 1.0, 2: 0.0}, {1: 0.5}),
        report.passed,
    ]
    return all(expected), f"lambda={[str(x) for x in red.lam]} b={red.scale} checks={report.failed() or 'all'}"


def check_classification() -> tuple[bool, str]:
    apple = classify(builtin_game("apple"))
    hard = classify(builtin_game("hard"))
    trivial = classify(builtin_game("trivial"))
    pair = hard.pair
    ok = (
        apple.tag is GameTag.BANDIT_REDUCIBLE
        and trivial.tag is GameTag.TRIVIAL_ZERO
        and trivial.dominant_action == 1
        and hard.tag is GameTag.HARD_LINEAR
        and pair.epsilon == Fraction(1, 4)
        and list(pair.p1.p) == [Fraction(1, 4), Fraction(3, 4)]
        and list(pair.p2.p) == [Fraction(3, 4), Fraction(1, 4)]
    )
    return ok, f"apple={apple.tag} hard={hard.tag} trivial={trivial.tag}"


def check_three_actions_rejected() -> tuple[bool, str]:
    try:
        reduce_to_bandit(builtin_game("revealing"))
    except WrongArity as e:
        return True, str(e)
    return False, "three-action game was reduced"


def check_replication(horizon: int = 500, seed: int = 7) -> tuple[bool, str]:
    game = builtin_game("apple")
    red = reduce_to_bandit(game)
    outcomes = sample_outcomes([0.5, 0.5], horizon, seed)
    wrapped = run(game, build_learner("reduced:exp3", game=game), outcomes, seed=seed)
    inner = run(red.bandit_game, Exp3(), outcomes, seed=seed)
    same_actions = np.array_equal(wrapped.actions, inner.actions)
    gap = abs(wrapped.regret - float(red.scale) * inner.regret)
    return same_actions and gap <= 1e-9 * horizon, f"same actions={same_actions} regret gap={gap:.2e}"


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("indicator matrix of the four-outcome example", check_fourway),
    ("reduction of the apple game", check_apple_reduction),
    ("classification of bundled games", check_classification),
    ("three-action game rejected by the reduction", check_three_actions_rejected),
    ("wrapped learner replicates the bandit learner", check_replication),
]


def run_selftest() -> SelftestReport:
    report = SelftestReport()
    for name, fn in CHECKS:
        try:
            passed, detail = fn()
        except Exception as e:  # a crashing check is a failed check
            logger.debug("selftest %s raised", name, exc_info=True)
            passed, detail = False, f"{type(e).__name__}: {e}"
        report.checks.append(Check(name=name, passed=bool(passed), detail=detail))
    return report
