#!/usr/bin/env python3
"""
Tests for kernel witnesses, balanced outcome laws and indistinguishable pairs.
"""

from fractions import Fraction

import numpy as np
import pytest

from pm_bandits.adversary import (
    Distribution,
    SignConstant,
    balanced_interior_point,
    indistinguishable_pair,
    kernel_witness,
    sample_outcomes,
)
from pm_bandits.core import validate_game
from pm_bandits.errors import PreconditionViolated
from pm_bandits.reduction import feedback_distribution, signal_system

F = Fraction


def three_outcome_hard():
    return validate_game([[1, 0, 0.5], [0, 1, 0.5]], [[1, 1, 1], [1, 1, 1]], name="hard3")


class TestDistribution:
    """Test outcome law validation."""

    def test_valid(self):
        p = Distribution([0.25, 0.75])
        assert p.interior
        assert p.n_outcomes == 2

    def test_boundary_is_not_interior(self):
        assert not Distribution([0.0, 1.0]).interior

    def test_rejects_negative(self):
        with pytest.raises(PreconditionViolated):
            Distribution([-0.1, 1.1])

    def test_rejects_bad_sum(self):
        with pytest.raises(PreconditionViolated):
            Distribution([0.5, 0.6])

    def test_exact_entries(self):
        p = Distribution(np.array([F(1, 3), F(2, 3)], dtype=object))
        assert p.p.dtype == object
        assert p.as_float().tolist() == pytest.approx([1 / 3, 2 / 3])


class TestKernelWitness:
    """Test the projection of ell onto Ker A."""

    def test_hard_game_exact(self, hard):
        ell, indicator, _ = signal_system(hard)
        v = kernel_witness(indicator, ell, exact=True)
        assert list(v) == [-1, 1]

    def test_hard_game_float(self, hard):
        ell, indicator, _ = signal_system(hard)
        v = kernel_witness(indicator, np.asarray(ell, dtype=float), exact=False)
        assert v.tolist() == pytest.approx([-1.0, 1.0])

    def test_reducible_game_has_none(self, apple, fourway):
        for game in (apple, fourway):
            ell, indicator, _ = signal_system(game)
            assert kernel_witness(indicator, ell, exact=True) is None
            assert kernel_witness(indicator, np.asarray(ell, dtype=float), exact=False) is None

    def test_witness_properties(self):
        ell, indicator, _ = signal_system(three_outcome_hard())
        for exact in (True, False):
            v = kernel_witness(indicator, ell, exact=exact)
            v = np.asarray(v, dtype=float)
            assert np.max(np.abs(indicator.A @ v)) < 1e-9
            assert float(np.asarray(ell, dtype=float) @ v) > 0
            assert np.max(np.abs(v)) == pytest.approx(1.0)


class TestBalancedInteriorPoint:
    """Test the interior point where both actions cost the same."""

    def test_uniform_when_balanced(self):
        p0 = balanced_interior_point(np.array([F(-1), F(1)], dtype=object))
        assert list(p0.p) == [F(1, 2), F(1, 2)]

    def test_unbalanced(self):
        ell = np.array([F(1), F(-2), F(0)], dtype=object)
        p0 = balanced_interior_point(ell)
        assert list(p0.p) == [F(1, 2), F(1, 4), F(1, 4)]
        assert ell @ p0.p == 0
        assert p0.interior

    def test_float_unbalanced(self):
        ell = np.array([0.3, -0.1, -0.1, 0.5])
        p0 = balanced_interior_point(ell)
        assert p0.interior
        assert float(ell @ p0.p) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize(
        "ell, sign",
        [([0, 1], 1), ([-1, 0], -1), ([0, 0], 0), ([0.5, 0.25], 1)],
    )
    def test_one_signed(self, ell, sign):
        assert balanced_interior_point(np.array(ell, dtype=float)) == SignConstant(sign)


class TestIndistinguishablePair:
    """Test the pair of outcome laws the learner cannot tell apart."""

    def test_hard_game(self, hard):
        ell, indicator, _ = signal_system(hard)
        pair = indistinguishable_pair(indicator, ell)
        assert pair.epsilon == F(1, 4)
        assert pair.epsilon_max == F(1, 2)
        assert list(pair.p0.p) == [F(1, 2), F(1, 2)]
        assert list(pair.p1.p) == [F(1, 4), F(3, 4)]
        assert list(pair.p2.p) == [F(3, 4), F(1, 4)]
        assert pair.ell_dot_v == 2
        assert pair.gap == pytest.approx(0.5)
        assert pair.regret_floor(10_000) == pytest.approx(2500.0)
        assert not pair.boundary

    def test_laws_give_same_feedback(self, hard):
        ell, indicator, _ = signal_system(hard)
        pair = indistinguishable_pair(indicator, ell)
        assert pair.feedback_gap(indicator) == 0
        for first, second in zip(
            feedback_distribution(indicator, pair.p1.as_float()),
            feedback_distribution(indicator, pair.p2.as_float()),
        ):
            assert first.tolist() == pytest.approx(second.tolist())

    def test_laws_prefer_different_actions(self):
        ell, indicator, _ = signal_system(three_outcome_hard())
        pair = indistinguishable_pair(indicator, ell)
        ell_f = np.asarray(ell, dtype=float)
        assert float(ell_f @ pair.p1.as_float()) > 0
        assert float(ell_f @ pair.p2.as_float()) < 0
        assert pair.p1.as_float().tolist() == pytest.approx([1 / 6, 1 / 2, 1 / 3])

    def test_law_floor(self, hard):
        ell, indicator, _ = signal_system(hard)
        pair = indistinguishable_pair(indicator, ell)
        assert pair.law(1) is pair.p1 and pair.law(2) is pair.p2
        assert pair.law_floor(1, mu=100, horizon=1000) == pytest.approx(50.0)
        assert pair.law_floor(2, mu=100, horizon=1000) == pytest.approx(450.0)

    def test_full_step_reaches_boundary(self, hard):
        ell, indicator, _ = signal_system(hard)
        pair = indistinguishable_pair(indicator, ell, epsilon_fraction=1.0)
        assert pair.boundary
        assert list(pair.p1.p) == [0, 1]

    def test_float_mode(self, hard):
        ell, indicator, _ = signal_system(hard)
        pair = indistinguishable_pair(indicator, ell, exact=False)
        assert pair.p1.p.tolist() == pytest.approx([0.25, 0.75])
        assert pair.feedback_gap(indicator) < 1e-12

    def test_bad_epsilon_fraction(self, hard):
        ell, indicator, _ = signal_system(hard)
        for fraction in (0, 1.5):
            with pytest.raises(PreconditionViolated):
                indistinguishable_pair(indicator, ell, epsilon_fraction=fraction)

    def test_zero_witness(self, hard):
        ell, indicator, _ = signal_system(hard)
        with pytest.raises(PreconditionViolated):
            indistinguishable_pair(indicator, ell, v=[0, 0])

    def test_witness_outside_kernel(self, hard):
        ell, indicator, _ = signal_system(hard)
        with pytest.raises(PreconditionViolated):
            indistinguishable_pair(indicator, ell, v=[1, 1])

    def test_reducible_game_has_no_pair(self, apple):
        ell, indicator, _ = signal_system(apple)
        with pytest.raises(PreconditionViolated):
            indistinguishable_pair(indicator, ell)

    def test_to_dict(self, hard):
        ell, indicator, _ = signal_system(hard)
        payload = indistinguishable_pair(indicator, ell).to_dict()
        assert payload["p1"] == [0.25, 0.75]
        assert payload["boundary"] is False


class TestSampleOutcomes:
    """Test i.i.d. outcome streams."""

    def test_reproducible(self):
        a = sample_outcomes([0.25, 0.75], 500, seed=7)
        b = sample_outcomes([0.25, 0.75], 500, seed=7)
        assert a.tolist() == b.tolist()
        assert set(a.tolist()) <= {1, 2}

    def test_point_mass(self):
        assert sample_outcomes([0.0, 1.0], 50, seed=1).tolist() == [2] * 50

    def test_frequencies(self):
        outcomes = sample_outcomes(Distribution([0.25, 0.75]), 20_000, seed=3)
        assert np.mean(outcomes == 2) == pytest.approx(0.75, abs=0.02)

    def test_empty_and_negative_horizon(self):
        assert sample_outcomes([0.5, 0.5], 0, seed=1).size == 0
        with pytest.raises(PreconditionViolated):
            sample_outcomes([0.5, 0.5], -1, seed=1)
