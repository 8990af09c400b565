#!/usr/bin/env python3
"""
Tests for the trichotomy of two-action games, including an independent
rank oracle over every small game.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from pm_bandits.classification import GameTag, classify
from pm_bandits.core import validate_game
from pm_bandits.errors import WrongArity
from pm_bandits.io import dumps
from pm_bandits.reduction import certificate_tol, feedback_distribution, signal_system, verify_reduction

LOSS_VALUES = (0, 0.5, 1)


def rank(rows):
    """Rank over the rationals by plain Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    r = 0
    for c in range(len(m[0]) if m else 0):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def indicator_rows(feedback):
    rows = []
    for row in feedback:
        for symbol in sorted(set(row)):
            rows.append([1 if h == symbol else 0 for h in row])
    return rows


def oracle(loss, feedback):
    ell = [Fraction(b) - Fraction(a) for a, b in zip(*loss)]
    if all(x >= 0 for x in ell):
        return GameTag.TRIVIAL_ZERO, 1
    if all(x <= 0 for x in ell):
        return GameTag.TRIVIAL_ZERO, 2
    A = indicator_rows(feedback)
    columns_of_at = [list(col) for col in zip(*A)]  # A^T as rows, one per outcome
    augmented = [row + [x] for row, x in zip(columns_of_at, ell)]
    if rank(columns_of_at) == rank(augmented):
        return GameTag.BANDIT_REDUCIBLE, None
    return GameTag.HARD_LINEAR, None


def canonical_patterns(M, max_symbols):
    """Feedback rows over 1..k in first-occurrence order."""
    out = []
    for row in itertools.product(range(1, max_symbols + 1), repeat=M):
        seen = 0
        ok = True
        for h in row:
            if h > seen + 1:
                ok = False
                break
            seen = max(seen, h)
        if ok:
            out.append(list(row))
    return out


def all_games(M, max_symbols):
    patterns = canonical_patterns(M, max_symbols)
    for values in itertools.product(LOSS_VALUES, repeat=2 * M):
        loss = [list(values[:M]), list(values[M:])]
        for h1 in patterns:
            for h2 in patterns:
                yield loss, [h1, h2]


def assert_sound(result):
    ell = result.game.float_loss()[1] - result.game.float_loss()[0]
    if result.tag is GameTag.BANDIT_REDUCIBLE:
        red = result.reduction
        assert verify_reduction(red, tol=certificate_tol(red)).passed
    elif result.tag is GameTag.HARD_LINEAR:
        pair = result.pair
        assert pair.feedback_gap(_indicator(result.game)) <= 1e-12
        assert float(ell @ pair.p1.as_float()) > 0
        assert float(ell @ pair.p2.as_float()) < 0
        assert pair.p0.interior


def _indicator(game):
    return signal_system(game)[1]


class TestExamples:
    """Test the bundled example games."""

    def test_apple_is_reducible(self, apple):
        result = classify(apple)
        assert result.tag is GameTag.BANDIT_REDUCIBLE
        assert result.exit_code == 1
        assert result.reduction.scale == 2
        assert result.diagnostics["rank_A"] == result.diagnostics["rank_augmented"] == 2
        assert result.witness is None

    def test_hard_is_linear(self, hard):
        result = classify(hard)
        assert result.tag is GameTag.HARD_LINEAR
        assert result.exit_code == 2
        assert list(result.witness) == [-1, 1]
        assert list(result.pair.p1.p) == [Fraction(1, 4), Fraction(3, 4)]
        assert result.diagnostics["rank_A"] == 1
        assert result.diagnostics["rank_augmented"] == 2
        assert result.diagnostics["per_round_gap"] == pytest.approx(0.5)

    def test_trivial(self, trivial):
        result = classify(trivial)
        assert result.tag is GameTag.TRIVIAL_ZERO
        assert result.dominant_action == 1
        assert result.exit_code == 0
        assert result.reduction is None and result.pair is None

    def test_dominance_wins_over_reducibility(self):
        game = validate_game([[0, 0], [1, 0]], [[1, 2], [1, 2]])
        assert classify(game).tag is GameTag.TRIVIAL_ZERO

    def test_full_information_and_fourway(self, fullinfo, fourway):
        assert classify(fullinfo).tag is GameTag.BANDIT_REDUCIBLE
        assert classify(fourway).tag is GameTag.BANDIT_REDUCIBLE

    def test_three_actions_without_dominance(self, revealing):
        with pytest.raises(WrongArity):
            classify(revealing)

    def test_three_actions_with_dominance(self):
        game = validate_game([[0, 0], [1, 0], [0, 1]], [[1, 1], [1, 1], [1, 1]])
        result = classify(game)
        assert result.tag is GameTag.TRIVIAL_ZERO
        assert result.dominant_action == 1

    def test_epsilon_fraction(self, hard):
        result = classify(hard, epsilon_fraction=1.0)
        assert result.pair.boundary
        assert result.diagnostics["epsilon"] == pytest.approx(0.5)

    def test_float_mode_agrees(self, apple, hard):
        assert classify(apple, exact=False).tag is GameTag.BANDIT_REDUCIBLE
        assert classify(hard, exact=False).tag is GameTag.HARD_LINEAR
        assert classify(hard, exact=False).diagnostics["exact"] is False

    def test_to_dict(self, apple, hard, trivial):
        assert "certificate" in classify(apple).to_dict()
        assert classify(hard).to_dict()["pair"]["p1"] == [0.25, 0.75]
        assert classify(trivial).to_dict()["dominant_action"] == 1
        for game in (apple, hard, trivial):
            assert dumps(classify(game).to_dict())

    def test_summary_and_tag_text(self, apple):
        result = classify(apple)
        assert str(result.tag) == "BanditReducible"
        assert result.summary().startswith("BanditReducible")


class TestOracle:
    """Compare against an independent rank computation on every small game."""

    def test_two_outcome_games(self):
        count = 0
        for loss, feedback in all_games(2, 2):
            game = validate_game(loss, feedback)
            result = classify(game, exact=False)
            tag, dominant = oracle(loss, feedback)
            assert result.tag is tag, (loss, feedback)
            if dominant is not None:
                assert result.dominant_action == dominant
            assert_sound(result)
            count += 1
        assert count == 81 * 4

    def test_exact_mode_matches_float_mode(self):
        for loss, feedback in all_games(2, 2):
            game = validate_game(loss, feedback)
            exact = classify(game, exact=True)
            assert exact.tag is classify(game, exact=False).tag
            assert_sound(exact)
            if exact.tag is GameTag.HARD_LINEAR:
                assert exact.pair.feedback_gap(_indicator(game)) == 0

    @pytest.mark.slow
    def test_three_outcome_games(self):
        for loss, feedback in all_games(3, 2):
            game = validate_game(loss, feedback)
            result = classify(game, exact=False)
            tag, _ = oracle(loss, feedback)
            assert result.tag is tag, (loss, feedback)
            assert_sound(result)

    def test_random_three_outcome_sample(self):
        rng = np.random.default_rng(20110)
        patterns = canonical_patterns(3, 3)
        for _ in range(150):
            loss = rng.choice(LOSS_VALUES, size=(2, 3)).tolist()
            feedback = [patterns[i] for i in rng.integers(0, len(patterns), size=2)]
            result = classify(validate_game(loss, feedback))
            assert result.tag is oracle(loss, feedback)[0], (loss, feedback)
            assert_sound(result)


class TestHardGameLaws:
    """Test that hard-game laws cannot be told apart from feedback."""

    def test_feedback_laws_agree(self):
        game = validate_game([[1, 0, 0.5], [0, 1, 0.5]], [[1, 1, 2], [1, 1, 2]])
        result = classify(game)
        assert result.tag is GameTag.HARD_LINEAR
        indicator = _indicator(game)
        for first, second in zip(
            feedback_distribution(indicator, result.pair.p1.as_float()),
            feedback_distribution(indicator, result.pair.p2.as_float()),
        ):
            assert first.tolist() == pytest.approx(second.tolist())
