#!/usr/bin/env python3
"""
Test configuration for partial-monitoring-bandits tests.
"""

import os
import sys

import pytest

# Add src directory to path for testing without installing
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from pm_bandits.io import builtin_game  # noqa: E402

FOURWAY_FEEDBACK = [[1, 2, 3, 1], [1, 2, 2, 2]]


class ScriptedRandom:
    """Stand-in for a numpy Generator whose ``random()`` replays fixed draws."""

    def __init__(self, values):
        self._values = list(values)
        self._i = 0

    def random(self):
        value = self._values[self._i % len(self._values)]
        self._i += 1
        return value


@pytest.fixture
def scripted_random():
    return ScriptedRandom


@pytest.fixture
def apple():
    return builtin_game("apple")


@pytest.fixture
def hard():
    return builtin_game("hard")


@pytest.fixture
def trivial():
    return builtin_game("trivial")


@pytest.fixture
def fullinfo():
    return builtin_game("fullinfo")


@pytest.fixture
def revealing():
    return builtin_game("revealing")


@pytest.fixture
def fourway():
    return builtin_game("fourway")
