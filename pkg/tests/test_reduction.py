#!/usr/bin/env python3
"""
Tests for the indicator matrix, the signal decomposition and the bandit
reduction.
"""

import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from pm_bandits.classification import GameTag, classify
from pm_bandits.core import regret, validate_game
from pm_bandits.errors import (
    DegenerateGame,
    NotCanonical,
    NotInRowSpace,
    NotReducible,
    UnknownFeedbackSymbol,
    WrongArity,
)
from pm_bandits.reduction import (
    bandit_from_linear,
    build_indicator_matrix,
    build_signal_rows,
    certificate_tol,
    feedback_distribution,
    has_linear_structure,
    reduce_to_bandit,
    signal_system,
    solve_signal_decomposition,
    verify_reduction,
)

from conftest import FOURWAY_FEEDBACK

FOURWAY_A = [
    [1, 0, 0, 1],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [1, 0, 0, 0],
    [0, 1, 1, 1],
]


class TestIndicatorMatrix:
    """Test A = [A1; A2]."""

    def test_fourway(self):
        indicator = build_indicator_matrix(FOURWAY_FEEDBACK, (3, 2))
        assert indicator.A.tolist() == FOURWAY_A
        assert indicator.block_sizes == (3, 2)
        assert indicator.m == 5
        assert np.issubdtype(indicator.A.dtype, np.integer)

    def test_blocks_sum_to_ones(self):
        indicator = build_indicator_matrix(FOURWAY_FEEDBACK)
        for action in (1, 2):
            assert indicator.block(action).sum(axis=0).tolist() == [1, 1, 1, 1]

    def test_not_canonical(self):
        with pytest.raises(NotCanonical):
            build_indicator_matrix([[1, 3, 1], [1, 1, 1]])
        with pytest.raises(NotCanonical):
            build_indicator_matrix([[1, 2], [1, 1]], (1, 1))

    def test_wrong_arity(self):
        with pytest.raises(WrongArity):
            build_indicator_matrix([[1, 2], [1, 1], [1, 1]])

    def test_feedback_distribution(self, apple):
        _, indicator, _ = signal_system(apple)
        first, second = feedback_distribution(indicator, [0.3, 0.7])
        assert first.tolist() == pytest.approx([0.3, 0.7])
        assert second.tolist() == pytest.approx([1.0])

    def test_signal_system_canonicalizes_text(self):
        game = validate_game([[1, 0, 0, 1], [0, 1, 1, 0]], [["a", "b", "c", "a"], ["x", "y", "y", "y"]])
        ell, indicator, exact = signal_system(game)
        assert indicator.A.tolist() == FOURWAY_A
        assert list(ell) == [-1, 1, 1, -1]
        assert exact


class TestSignalDecomposition:
    """Test ``ell = A^T lambda``."""

    def test_apple_lambda(self, apple):
        ell, indicator, _ = signal_system(apple)
        lam = solve_signal_decomposition(indicator, ell, exact=True)
        assert list(lam) == [-1, 1, 0]
        assert all(isinstance(x, Fraction) for x in lam)

    def test_float_matches_exact(self, fourway):
        ell, indicator, _ = signal_system(fourway)
        exact = solve_signal_decomposition(indicator, ell, exact=True)
        approx = solve_signal_decomposition(indicator, ell, exact=False)
        assert np.allclose(approx, np.asarray(exact, dtype=float), atol=1e-9)
        assert np.allclose(indicator.A.T @ approx, np.asarray(ell, dtype=float), atol=1e-9)

    def test_not_in_row_space(self, hard):
        ell, indicator, _ = signal_system(hard)
        for exact in (True, False):
            with pytest.raises(NotInRowSpace) as info:
                solve_signal_decomposition(indicator, ell, exact=exact)
            assert info.value.residual == pytest.approx(np.sqrt(2))

    def test_signal_rows(self, apple):
        ell, indicator, _ = signal_system(apple)
        lam = solve_signal_decomposition(indicator, ell, exact=True)
        h1, h2 = build_signal_rows(lam, indicator)
        assert list(h1) == [-1, 1]
        assert list(h2) == [0, 0]


class TestReduceToBandit:
    """Test the full reduction pipeline."""

    def test_apple(self, apple):
        red = reduce_to_bandit(apple)
        assert red.exact
        assert list(red.lam) == [-1, 1, 0]
        assert red.scale == 2
        assert red.offset == -1
        assert red.feedback_to_loss == ({1: 1.0, 2: 0.0}, {1: 0.5})
        assert red.bandit_game.loss.tolist() == [[1.0, 0.0], [0.5, 0.5]]
        assert red.transcript.relation == "equivalent"
        assert red.K.tolist() == [[0, 0], [1, 1]]
        assert np.asarray(red.D, dtype=float).tolist() == [[-1.0, 0.0], [0.0, 1.0]]
        assert [float(x) for x in red.k] == [1.0, 0.0]

    def test_apple_passes_verification(self, apple):
        red = reduce_to_bandit(apple)
        report = verify_reduction(red, tol=certificate_tol(red))
        assert report.passed, report.failed()
        assert report.max_residual == 0

    def test_surrogate_loss(self, apple):
        red = reduce_to_bandit(apple)
        assert red.surrogate_loss(1, 2) == 0.0
        assert red.surrogate_loss(2, 1) == 0.5
        with pytest.raises(UnknownFeedbackSymbol):
            red.surrogate_loss(2, 2)

    def test_float_mode(self, apple):
        red = reduce_to_bandit(apple, exact=False)
        assert not red.exact
        assert float(red.scale) == pytest.approx(2.0)
        assert verify_reduction(red, tol=certificate_tol(red)).passed
        assert red.bandit_game.loss.tolist() == pytest.approx([[1.0, 0.0], [0.5, 0.5]])

    def test_fourway(self, fourway):
        red = reduce_to_bandit(fourway)
        assert red.indicator.A.tolist() == FOURWAY_A
        assert verify_reduction(red, tol=certificate_tol(red)).passed

    def test_zero_loss_game(self):
        zero = validate_game([[0, 0], [0, 0]], [[1, 2], [1, 1]], name="zero")
        red = reduce_to_bandit(zero)
        assert red.scale == 1
        assert red.bandit_game.loss.tolist() == [[0.0, 0.0], [0.0, 0.0]]

    def test_hard_game_not_reducible(self, hard):
        with pytest.raises(NotReducible) as info:
            reduce_to_bandit(hard)
        assert info.value.residual > 1

    def test_three_actions(self, revealing):
        with pytest.raises(WrongArity):
            reduce_to_bandit(revealing)

    def test_perturbed_lambda_fails_verification(self, apple):
        red = reduce_to_bandit(apple)
        bad = dataclasses.replace(red, lam=red.lam + np.array([Fraction(1, 10), 0, 0], dtype=object))
        report = verify_reduction(bad)
        assert not report.passed
        assert "L=KH" in report.failed()

    def test_certificate_is_json_friendly(self, apple):
        from pm_bandits.io import dumps

        payload = reduce_to_bandit(apple).to_dict()
        assert payload["lambda"] == [-1, 1, 0]
        assert payload["scale"] == 2
        assert '"feedback_to_loss"' in dumps(payload)

    def test_regret_scales_on_random_games(self):
        rng = np.random.default_rng(2011)
        checked = 0
        for _ in range(60):
            M = int(rng.integers(2, 5))
            loss = rng.integers(0, 5, size=(2, M)) / 4
            feedback = rng.integers(1, 3, size=(2, M)).tolist()
            game = validate_game(loss.tolist(), feedback)
            try:
                red = reduce_to_bandit(game)
            except NotReducible:
                continue
            assert verify_reduction(red, tol=certificate_tol(red)).passed
            actions = rng.integers(1, 3, size=30)
            outcomes = rng.integers(1, M + 1, size=30)
            source = float(regret(game, actions, outcomes))
            bandit = float(regret(red.bandit_game, actions, outcomes))
            assert source == pytest.approx(float(red.scale) * bandit, abs=1e-9)
            checked += 1
        assert checked > 0

    def test_identities_on_random_float_games(self):
        rng = np.random.default_rng(1000)
        reduced = 0
        for _ in range(1000):
            M = int(rng.integers(2, 7))
            loss = rng.random((2, M))
            feedback = rng.integers(1, 5, size=(2, M)).tolist()
            game = validate_game(loss.tolist(), feedback)
            tag = classify(game, exact=False).tag
            try:
                red = reduce_to_bandit(game, exact=False)
            except NotReducible:
                assert tag is not GameTag.BANDIT_REDUCIBLE, (loss, feedback)
                continue
            assert tag is not GameTag.HARD_LINEAR, (loss, feedback)
            L = np.asarray(red.L, dtype=float)
            assert np.max(np.abs(L - np.asarray(red.K @ red.H, dtype=float))) <= 1e-9
            L_prime = np.asarray(red.L_prime, dtype=float)
            assert np.max(np.abs(L_prime - np.asarray(red.H_prime, dtype=float))) <= 1e-9
            reduced += 1
        assert reduced > 0


class TestBanditFromLinear:
    """Test the generic L = K H construction."""

    def test_general_k(self):
        game = validate_game([[0.5, 0.5], [0, 1]], [[1, 0], [0, 1]], name="linear")
        parts = bandit_from_linear(game, [[0.5, 0.5], [0, 1]])
        assert parts["bandit_game"].loss.tolist() == pytest.approx([[1.0, 0.0], [0.0, 1.0]])
        assert float(parts["scale"]) == pytest.approx(0.5)
        assert parts["feedback_to_loss"][0] == pytest.approx({1: 1.0, 0: 0.0})
        assert parts["transcript"].relation == "equivalent"

    def test_collapsing_k_is_easier(self):
        game = validate_game([[0, 0], [0, 0]], [[1, 0], [0, 1]], name="flat")
        parts = bandit_from_linear(game, [[0, 0], [0, 0]])
        assert parts["transcript"].relation == "easier"
        assert parts["bandit_game"].loss.tolist() == [[0.0, 0.0], [0.0, 0.0]]

    def test_loss_must_be_linear_in_feedback(self):
        game = validate_game([[1, 0], [0, 1]], [[1, 0], [0, 1]])
        with pytest.raises(DegenerateGame):
            bandit_from_linear(game, [[0, 0], [0, 0]])

    def test_has_linear_structure(self):
        game = validate_game([[1, 0], [0, 1]], [[1, 0], [0, 1]])
        assert has_linear_structure(game, [[1, 0], [0, 1]])
        assert not has_linear_structure(game, [[0, 1], [1, 0]])
        assert not has_linear_structure(validate_game([[0]], [["a"]]), [[1]])
