"""
Partial-monitoring games and regret accounting.

A game is a pair of N x M matrices: the loss matrix L and the feedback
matrix H. Row index = learner action, column index = outcome. Public
functions take 1-based action and outcome indices, like the protocol they
describe; arrays are 0-based internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional, Sequence, Union

import numpy as np

from ..errors import (
    ActionOutOfRange,
    DimensionMismatch,
    LengthMismatch,
    LossOutOfRange,
    NonFiniteEntry,
    OutcomeOutOfRange,
)
from ..rational import as_rational_array, is_rational_array

# Opaque feedback token. Only equality is ever used, never ordering.
FeedbackSymbol = Union[int, float, str]


@dataclass(frozen=True, eq=False)
class Game:
    """
    Immutable partial-monitoring game G = (L, H).

    ``loss`` is a read-only float array, or an object array of Fractions for
    games built in exact mode. ``derived`` marks games produced by
    transformations; those may carry losses outside [0, 1].
    """

    name: str
    loss: np.ndarray
    feedback: tuple[tuple[FeedbackSymbol, ...], ...]
    derived: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def n_actions(self) -> int:
        return self.loss.shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.loss.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_actions, self.n_outcomes

    @property
    def exact(self) -> bool:
        return is_rational_array(self.loss)

    def feedback_row(self, action: int) -> tuple[FeedbackSymbol, ...]:
        """Feedback symbols of a 1-based action."""
        return self.feedback[action - 1]

    def symbol(self, action: int, outcome: int) -> FeedbackSymbol:
        return self.feedback[action - 1][outcome - 1]

    def float_loss(self) -> np.ndarray:
        return np.asarray(self.loss, dtype=float)

    def to_dict(self) -> dict:
        from ..rational import format_rational

        if self.exact:
            loss = [[format_rational(x) for x in row] for row in self.loss]
        else:
            loss = self.loss.tolist()
        return {"name": self.name, "loss": loss, "feedback": [list(r) for r in self.feedback]}

    def __repr__(self) -> str:
        kind = "derived " if self.derived else ""
        return f"Game({self.name!r}, {kind}{self.n_actions}x{self.n_outcomes})"


def _check_rectangular(rows, what: str) -> tuple[int, int]:
    try:
        rows = list(rows)
        widths = {len(list(r)) for r in rows}
    except TypeError:
        raise DimensionMismatch(f"{what} must be a list of rows")
    if len(rows) < 1 or not widths or 0 in widths:
        raise DimensionMismatch(f"{what} needs at least one row and one column")
    if len(widths) != 1:
        raise DimensionMismatch(f"{what} rows have different lengths: {sorted(widths)}")
    return len(rows), widths.pop()


def _check_symbol(value) -> FeedbackSymbol:
    if isinstance(value, bool) or not isinstance(value, (str, Real)):
        raise NonFiniteEntry(f"feedback symbol {value!r} must be a number or text")
    if isinstance(value, Real) and not isinstance(value, Fraction):
        if not math.isfinite(float(value)):
            raise NonFiniteEntry(f"feedback symbol {value!r} is not finite")
        if isinstance(value, np.generic):
            value = value.item()
    return value


def validate_game(
    loss,
    feedback,
    name: str = "game",
    derived: bool = False,
    exact: bool = False,
) -> Game:
    """
    Build a :class:`Game` after checking the conventions of the protocol.

    Raises DimensionMismatch when the matrices disagree in shape,
    NonFiniteEntry for NaN/inf or non-numeric losses, and LossOutOfRange
    when an input (non-derived) game has a loss outside [0, 1].
    """
    n, m = _check_rectangular(loss, "loss matrix")
    n_h, m_h = _check_rectangular(feedback, "feedback matrix")
    if (n, m) != (n_h, m_h):
        raise DimensionMismatch(
            f"loss is {n}x{m} but feedback is {n_h}x{m_h} for game '{name}'"
        )

    rows = [list(r) for r in loss]
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (Real, np.number)):
                raise NonFiniteEntry(f"loss[{i + 1}][{j + 1}]={x!r} is not a real number")
            if not isinstance(x, Fraction) and not math.isfinite(float(x)):
                raise NonFiniteEntry(f"loss[{i + 1}][{j + 1}]={x!r} is not finite")
            if not derived and not (0 <= x <= 1):
                raise LossOutOfRange(
                    f"loss[{i + 1}][{j + 1}]={x} outside [0, 1] in input game '{name}'"
                )

    if exact:
        loss_arr = as_rational_array(rows)
    else:
        loss_arr = np.array([[float(x) for x in row] for row in rows], dtype=float)
    loss_arr.setflags(write=False)

    fb = tuple(tuple(_check_symbol(h) for h in row) for row in feedback)
    return Game(name=name, loss=loss_arr, feedback=fb, derived=derived)


def with_loss(game: Game, loss: np.ndarray, name: str | None = None, feedback=None) -> Game:
    """Derived copy of *game* with a new loss matrix (and optionally feedback)."""
    loss = np.array(loss, dtype=object if is_rational_array(loss) else float)
    if loss.shape != game.loss.shape:
        raise DimensionMismatch(f"new loss shape {loss.shape} != {game.loss.shape}")
    loss.setflags(write=False)
    fb = game.feedback if feedback is None else tuple(tuple(r) for r in feedback)
    return Game(name=name or game.name, loss=loss, feedback=fb, derived=True)


# --- regret accounting ---


def _indices(values: Sequence[int], upper: int, error, what: str) -> np.ndarray:
    idx = np.asarray(values, dtype=int).reshape(-1)
    if idx.size and (idx.min() < 1 or idx.max() > upper):
        bad = idx[(idx < 1) | (idx > upper)][0]
        raise error(f"{what} {bad} outside 1..{upper}")
    return idx - 1


def outcome_indices(game: Game, outcomes: Sequence[int]) -> np.ndarray:
    return _indices(outcomes, game.n_outcomes, OutcomeOutOfRange, "outcome")


def action_indices(game: Game, actions: Sequence[int]) -> np.ndarray:
    return _indices(actions, game.n_actions, ActionOutOfRange, "action")


def _prefix_totals(game: Game, outcome_idx: np.ndarray) -> np.ndarray:
    """N x T running loss of every fixed action along the outcome sequence."""
    return np.cumsum(game.loss[:, outcome_idx], axis=1)


def _first_min(values) -> int:
    return min(range(len(values)), key=lambda i: values[i])


def best_fixed_action(game: Game, outcomes: Sequence[int]) -> tuple[int, Real]:
    """
    Best action in hindsight and its total loss, ``L_T*``.

    Ties go to the smallest action index; an empty sequence gives (1, 0).
    """
    j = outcome_indices(game, outcomes)
    if j.size == 0:
        return 1, (Fraction(0) if game.exact else 0.0)
    totals = _prefix_totals(game, j)[:, -1]
    i = _first_min(totals)
    return i + 1, totals[i]


def cumulative_regret_path(
    game: Game, actions: Sequence[int], outcomes: Sequence[int]
) -> np.ndarray:
    """Regret after each round t: sum of suffered losses minus the best prefix total."""
    i_idx = action_indices(game, actions)
    j_idx = outcome_indices(game, outcomes)
    if i_idx.size != j_idx.size:
        raise LengthMismatch(f"{i_idx.size} actions but {j_idx.size} outcomes")
    if j_idx.size == 0:
        return np.zeros(0, dtype=object if game.exact else float)
    suffered = np.cumsum(game.loss[i_idx, j_idx])
    best = _prefix_totals(game, j_idx).min(axis=0)
    return suffered - best


def regret(game: Game, actions: Sequence[int], outcomes: Sequence[int]) -> Real:
    """
    Realized regret of one trace, ``L_T - L_T*``.

    Can be negative for a single realization; expected regret is estimated
    by averaging traces (see :mod:`pm_bandits.simulator`).
    """
    path = cumulative_regret_path(game, actions, outcomes)
    if path.size == 0:
        return Fraction(0) if game.exact else 0.0
    return path[-1]


def dominant_action(loss) -> Optional[int]:
    """
    Smallest action whose loss is no larger than any other action's loss for
    every outcome, or None.
    """
    matrix = loss.loss if isinstance(loss, Game) else np.asarray(loss)
    if matrix.dtype != object:
        matrix = matrix.astype(float)
    column_min = matrix.min(axis=0)
    for i in range(matrix.shape[0]):
        if all(matrix[i, j] <= column_min[j] for j in range(matrix.shape[1])):
            return i + 1
    return None


def is_full_information(game: Game) -> bool:
    """Every feedback row has M pairwise distinct symbols."""
    return all(len(set(row)) == game.n_outcomes for row in game.feedback)


def is_bandit_game(game: Game, tol: float = 1e-9) -> bool:
    """Numeric feedback equal to the loss matrix (H = L)."""
    try:
        h = np.array(game.feedback, dtype=float)
    except (TypeError, ValueError):
        return False
    return bool(np.max(np.abs(h - game.float_loss())) <= tol)
