"""Exception hierarchy for pm_bandits."""

from __future__ import annotations


class PMBanditsError(Exception):
    """Root of every error raised by this package."""


# --- input validation (also ValueError, like the rest of the ecosystem) ---


class InvalidInput(PMBanditsError, ValueError):
    pass


class DimensionMismatch(InvalidInput):
    pass


class NonFiniteEntry(InvalidInput):
    pass


class LossOutOfRange(InvalidInput):
    pass


class OutcomeOutOfRange(InvalidInput):
    pass


class ActionOutOfRange(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class UnmappedSymbol(InvalidInput):
    pass


class NotCanonical(InvalidInput):
    pass


class WrongArity(InvalidInput):
    """The operation needs a two-action game."""

    def __init__(self, n_actions: int, operation: str = "this operation"):
        super().__init__(f"{operation} needs N=2 learner actions, got N={n_actions}")
        self.n_actions = n_actions


# --- domain outcomes ---


class NotInRowSpace(PMBanditsError):
    """ell is not a linear combination of the rows of A."""

    def __init__(self, residual: float):
        super().__init__(f"vector is not in the row space (residual {residual:.3e})")
        self.residual = residual


class NotReducible(PMBanditsError):
    """The game has no bandit reduction: ell lies outside im A^T."""

    def __init__(self, residual: float, game_name: str = ""):
        label = f" '{game_name}'" if game_name else ""
        super().__init__(
            f"game{label} is not reducible to a bandit game "
            f"(row-space residual {residual:.3e}); it has linear minimax regret"
        )
        self.residual = residual


class SolverError(PMBanditsError):
    pass


class DegenerateGame(PMBanditsError):
    pass


class PreconditionViolated(PMBanditsError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


# --- learner protocol ---


class NotStarted(PMBanditsError):
    pass


class NotFullInformation(PMBanditsError):
    pass


class UnknownFeedbackSymbol(PMBanditsError):
    pass


class UnknownLearner(PMBanditsError, ValueError):
    pass


# --- experiments ---


class DegenerateRegret(PMBanditsError):
    """A log-log fit was asked for non-positive median regrets. Reported, not raised."""
