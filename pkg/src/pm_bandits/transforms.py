"""
Admissible game transformations and their transcripts.

Two kinds of step keep the regret of every action sequence intact:

* a column shift subtracts the same number from every entry of a loss
  column, ``L - 1 v^T``;
* a feedback relabel rewrites each feedback row through a per-action map
  ``h'_ij = f_i(h_ij)``. Injective maps lose no information, so the two
  games are equivalent; other maps only make the new game easier to
  simulate from the old one.

A third step, the global affine rescale, divides losses by ``b > 0`` after
subtracting per-column offsets. It is used to bring bandit losses into
[0, 1]; regret scales by exactly ``1/b``.

A :class:`TransformTranscript` lists the steps taken from a source game to a
target game, so the same chain can be replayed on matrices and on a
learner's feedback stream.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Mapping, Sequence, Union

import numpy as np

from .core.game import FeedbackSymbol, Game, with_loss
from .errors import DimensionMismatch, NonFiniteEntry, PreconditionViolated, UnmappedSymbol
from .rational import as_rational_array, format_rational, to_rational

logger = logging.getLogger(__name__)


def _symbol_json(value):
    if isinstance(value, str):
        return value
    return format_rational(value) if isinstance(value, Fraction) else value


def _vector(game: Game, v, what: str) -> np.ndarray:
    arr = np.asarray(v, dtype=object).reshape(-1)
    if arr.size != game.n_outcomes:
        raise DimensionMismatch(f"{what} has length {arr.size}, game has M={game.n_outcomes}")
    for x in arr:
        if isinstance(x, bool) or not isinstance(x, (Real, np.number)):
            raise NonFiniteEntry(f"{what} entry {x!r} is not a real number")
        if not isinstance(x, Fraction) and not math.isfinite(float(x)):
            raise NonFiniteEntry(f"{what} entry {x!r} is not finite")
    if game.exact:
        return as_rational_array(arr)
    return arr.astype(float)


# --- feedback relabels ---


@dataclass(frozen=True)
class FeedbackRelabel:
    """Per-action symbol maps ``f_i``; ``maps[i - 1]`` is the map of action i."""

    maps: tuple[Mapping[FeedbackSymbol, FeedbackSymbol], ...]

    @property
    def injective(self) -> bool:
        return all(len(set(f.values())) == len(f) for f in self.maps)

    def injective_rows(self) -> tuple[bool, ...]:
        return tuple(len(set(f.values())) == len(f) for f in self.maps)

    def apply(self, action: int, symbol: FeedbackSymbol) -> FeedbackSymbol:
        try:
            return self.maps[action - 1][symbol]
        except KeyError:
            raise UnmappedSymbol(f"action {action} has no mapping for symbol {symbol!r}")

    def covers(self, game: Game) -> bool:
        return len(self.maps) == game.n_actions and all(
            set(row) <= set(f) for f, row in zip(self.maps, game.feedback)
        )

    @classmethod
    def identity(cls, game: Game) -> "FeedbackRelabel":
        return cls(tuple({h: h for h in row} for row in game.feedback))

    @classmethod
    def from_rows(cls, maps: Sequence[Mapping]) -> "FeedbackRelabel":
        return cls(tuple(dict(f) for f in maps))

    def to_dict(self) -> dict:
        return {
            "injective": self.injective,
            "maps": [
                [[_symbol_json(k), _symbol_json(v)] for k, v in f.items()] for f in self.maps
            ],
        }


# --- transcript steps ---


@dataclass(frozen=True)
class ColumnShift:
    """Subtract ``v_j`` from every entry of loss column j."""

    v: tuple

    def apply(self, game: Game) -> Game:
        v = _vector(game, self.v, "shift vector")
        return with_loss(game, game.loss - v[None, :], name=f"{game.name}|shift")

    def to_dict(self) -> dict:
        return {"step": "column_shift", "v": [format_rational(x) for x in self.v]}


@dataclass(frozen=True)
class Relabel:
    relabel: FeedbackRelabel
    note: str = ""

    def apply(self, game: Game) -> Game:
        if len(self.relabel.maps) != game.n_actions:
            raise DimensionMismatch(
                f"relabel has {len(self.relabel.maps)} maps for {game.n_actions} actions"
            )
        fb = tuple(
            tuple(self.relabel.apply(i + 1, h) for h in row)
            for i, row in enumerate(game.feedback)
        )
        out = with_loss(game, game.loss, name=f"{game.name}|relabel", feedback=fb)
        out.meta["relabel_injective"] = self.relabel.injective
        return out

    def to_dict(self) -> dict:
        return {"step": "relabel", "note": self.note, **self.relabel.to_dict()}


@dataclass(frozen=True)
class GlobalAffine:
    """
    ``L -> (L - 1 offsets^T) / scale``. With ``rescale_feedback`` the numeric
    feedback goes through the same map, which needs a single offset value so
    that the feedback change stays a per-action relabel.
    """

    scale: Real
    offsets: tuple
    rescale_feedback: bool = False

    def __post_init__(self):
        if not self.scale > 0:
            raise PreconditionViolated(f"affine scale must be positive, got {self.scale}")
        if self.rescale_feedback and len(set(self.offsets)) > 1:
            raise PreconditionViolated("feedback rescale needs one common offset")

    def apply(self, game: Game) -> Game:
        offsets = _vector(game, self.offsets, "affine offsets")
        scale = to_rational(self.scale) if game.exact else float(self.scale)
        loss = (game.loss - offsets[None, :]) / scale
        feedback = None
        if self.rescale_feedback:
            c = offsets[0]
            feedback = tuple(tuple((h - c) / scale for h in row) for row in game.feedback)
        return with_loss(game, loss, name=f"{game.name}|affine", feedback=feedback)

    def to_dict(self) -> dict:
        return {
            "step": "global_affine",
            "scale": format_rational(self.scale),
            "offsets": [format_rational(x) for x in self.offsets],
            "rescale_feedback": self.rescale_feedback,
        }


Step = Union[ColumnShift, Relabel, GlobalAffine]


@dataclass(frozen=True, eq=False)
class TransformTranscript:
    """Ordered, append-only record of the steps from ``source`` to ``target``."""

    source: Game
    target: Game
    steps: tuple = field(default_factory=tuple)

    @classmethod
    def start(cls, game: Game) -> "TransformTranscript":
        return cls(source=game, target=game, steps=())

    def then(self, step: Step) -> "TransformTranscript":
        """Apply *step* to the current target and return the extended transcript."""
        return TransformTranscript(self.source, step.apply(self.target), self.steps + (step,))

    @property
    def relation(self) -> str:
        """'equivalent' when every relabel is injective, otherwise 'easier'."""
        for step in self.steps:
            if isinstance(step, Relabel) and not step.relabel.injective:
                return "easier"
        return "equivalent"

    @property
    def scale(self):
        """Product of affine scales: source regret = scale x target regret."""
        b = 1
        for step in self.steps:
            if isinstance(step, GlobalAffine):
                b = b * step.scale
        return b

    def replay(self, source: Game | None = None) -> Game:
        return replay_transcript(self, source)

    def max_residual(self, source: Game | None = None) -> float:
        """Largest loss / numeric-feedback mismatch between replay and target."""
        replayed = self.replay(source)
        residual = float(np.max(np.abs(replayed.float_loss() - self.target.float_loss())))
        for row_a, row_b in zip(replayed.feedback, self.target.feedback):
            for a, b in zip(row_a, row_b):
                if isinstance(a, str) or isinstance(b, str):
                    if a != b:
                        return math.inf
                else:
                    residual = max(residual, abs(float(a) - float(b)))
        return residual

    def to_dict(self) -> dict:
        return {
            "source": self.source.name,
            "target": self.target.name,
            "relation": self.relation,
            "scale": format_rational(self.scale),
            "steps": [s.to_dict() for s in self.steps],
        }


def replay_transcript(transcript: TransformTranscript, source: Game | None = None) -> Game:
    game = transcript.source if source is None else source
    for step in transcript.steps:
        game = step.apply(game)
    return game


# --- operations ---


def column_shift(game: Game, v) -> Game:
    """``(L - 1 v^T, H)``; regret of every action sequence is unchanged."""
    return ColumnShift(tuple(_vector(game, v, "shift vector"))).apply(game)


def relabel_feedback(game: Game, relabel: FeedbackRelabel) -> Game:
    """``(L, H')`` with ``h'_ij = f_i(h_ij)``; injectivity lands in ``meta``."""
    if not relabel.covers(game):
        missing = [
            (i + 1, h)
            for i, row in enumerate(game.feedback)
            for h in row
            if i >= len(relabel.maps) or h not in relabel.maps[i]
        ]
        raise UnmappedSymbol(f"relabel does not cover (action, symbol) pairs {missing[:5]}")
    out = Relabel(relabel).apply(game)
    logger.debug("relabel of %s injective=%s", game.name, relabel.injective)
    return out


def canonical_relabel(game: Game) -> tuple[FeedbackRelabel, tuple[dict, ...], tuple[int, ...]]:
    """
    Injective maps sending row i's symbols to 1..m_i in first-occurrence
    order (columns scanned left to right), their inverse tables, and m.
    """
    maps, tables = [], []
    for row in game.feedback:
        forward: dict = {}
        for h in row:
            if h not in forward:
                forward[h] = len(forward) + 1
        maps.append(forward)
        tables.append({c: h for h, c in forward.items()})
    m = tuple(len(f) for f in maps)
    return FeedbackRelabel(tuple(maps)), tuple(tables), m


def canonicalize_feedback(game: Game) -> tuple[Game, tuple[dict, ...], tuple[int, ...]]:
    """Canonical game, per-row tables canonical symbol -> original symbol, and m."""
    relabel, tables, m = canonical_relabel(game)
    canon = Relabel(relabel, note="canonical").apply(game)
    return canon, tables, m


def is_canonical(feedback) -> bool:
    """Every row i uses exactly the integer symbols 1..m_i."""
    for row in feedback:
        if any(isinstance(h, bool) or not isinstance(h, (int, np.integer)) for h in row):
            return False
        symbols = {int(h) for h in row}
        if symbols != set(range(1, len(symbols) + 1)):
            return False
    return True
