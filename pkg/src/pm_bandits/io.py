"""
Game files and reports.

A game file is JSON::

    {"name": "apple",
     "loss": [[1, 0], [0, 1]],
     "feedback": [[1, 2], [1, 1]],
     "exact": true}

Loss entries may be numbers or fraction strings such as ``"1/2"``; feedback
symbols may be numbers or strings. ``exact`` is optional.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Union

import pandas as pd

from .core.game import Game, validate_game
from .errors import InvalidInput

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class InvalidGameFile(InvalidInput):
    pass


def _parse_number(value, where: str):
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidGameFile(f"{where}: cannot read {value!r} as a number")
    return value


def game_from_dict(data: dict, default_name: str = "game") -> Game:
    if not isinstance(data, dict) or "loss" not in data or "feedback" not in data:
        raise InvalidGameFile("a game needs 'loss' and 'feedback' matrices")
    loss = data["loss"]
    if not isinstance(loss, list) or not all(isinstance(r, list) for r in loss):
        raise InvalidGameFile("'loss' must be a list of rows")
    loss = [[_parse_number(x, f"loss[{i + 1}][{j + 1}]") for j, x in enumerate(row)] for i, row in enumerate(loss)]
    exact = bool(data.get("exact", False))
    return validate_game(loss, data["feedback"], name=str(data.get("name", default_name)), exact=exact)


def builtin_games() -> list[str]:
    """Names of the bundled example games."""
    folder = resources.files("pm_bandits") / "games"
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def builtin_game(name: str) -> Game:
    resource = resources.files("pm_bandits") / "games" / f"{Path(name).stem}.json"
    if not resource.is_file():
        raise FileNotFoundError(f"no bundled game named '{name}'; available: {builtin_games()}")
    return _load_text(resource.read_text(encoding="utf-8"), Path(name).stem)


def _load_text(text: str, default_name: str) -> Game:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidGameFile(f"game file is not valid JSON: {e}") from e
    return game_from_dict(data, default_name=default_name)


def load_game(path: PathLike) -> Game:
    """
    Load a game file. A path that does not exist but names a bundled game
    (``games/apple.json`` or just ``apple``) loads the bundled copy.
    """
    path = Path(path)
    if path.is_file():
        logger.debug("loading game from %s", path)
        return _load_text(path.read_text(encoding="utf-8"), path.stem)
    if path.stem in builtin_games():
        logger.debug("loading bundled game %s", path.stem)
        return builtin_game(path.stem)
    raise FileNotFoundError(f"game file not found: {path}")


def save_game(game: Game, path: PathLike) -> Path:
    data = game.to_dict()
    data["exact"] = game.exact
    return write_json(data, path)


def write_json(data, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, default=_json_default) + "\n", encoding="utf-8")
    return path


def _json_default(value):
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dumps(data) -> str:
    return json.dumps(data, indent=2, default=_json_default)


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.10g")
    return path


def report_paths(out: PathLike) -> tuple[Path, Path]:
    """``<out>.csv`` and ``<out>.json`` for an output prefix (a suffix is dropped)."""
    out = Path(out)
    if out.suffix in (".csv", ".json"):
        out = out.with_suffix("")
    return out.with_name(out.name + ".csv"), out.with_name(out.name + ".json")
