#!/usr/bin/env python3
"""
Tests for game files and report paths.
"""

import json
from fractions import Fraction

import pytest

from pm_bandits.core import validate_game
from pm_bandits.io import load_game, report_paths, save_game


class TestSaveGame:
    """Test that saved games load back unchanged."""

    def test_exact_game(self, tmp_path):
        game = validate_game(
            [[Fraction(1, 3), 0], [0, Fraction(2, 3)]], [[1, 2], [1, 1]], name="thirds", exact=True
        )
        path = save_game(game, tmp_path / "thirds.json")
        data = json.loads(path.read_text())
        assert data["loss"][0][0] == "1/3"
        assert data["exact"] is True
        loaded = load_game(path)
        assert loaded.exact
        assert loaded.loss.tolist() == game.loss.tolist()
        assert loaded.feedback == game.feedback
        assert loaded.name == "thirds"

    def test_float_game_with_text_feedback(self, tmp_path):
        game = validate_game([[0.25, 0.75], [1.0, 0.0]], [["a", "b"], ["x", "x"]], name="text")
        loaded = load_game(save_game(game, tmp_path / "nested" / "text.json"))
        assert not loaded.exact
        assert loaded.loss.tolist() == [[0.25, 0.75], [1.0, 0.0]]
        assert loaded.feedback == (("a", "b"), ("x", "x"))

    def test_bundled_game(self, apple, tmp_path):
        loaded = load_game(save_game(apple, tmp_path / "copy.json"))
        assert loaded.loss.tolist() == apple.loss.tolist()
        assert loaded.feedback == apple.feedback


class TestReportPaths:
    """Test the output prefix convention."""

    @pytest.mark.parametrize("out", ["runs/apple", "runs/apple.csv", "runs/apple.json"])
    def test_suffix_is_dropped(self, out):
        csv_path, json_path = report_paths(out)
        assert csv_path.name == "apple.csv"
        assert json_path.name == "apple.json"
