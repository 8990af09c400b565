"""
Constructive reduction of a two-action game to a bandit game.

Pipeline for G0 = (L0, H0) with N = 2:

1. Shift every loss column by the first row, so the first row of L is zero
   and ``ell`` (the second row) carries all the loss information.
2. Rename each feedback row to 1..m_i (first-occurrence order) and build the
   stacked 0/1 indicator matrix A.
3. Write ``ell = A^T lambda`` (minimum-norm lambda). If that is impossible
   the game has linear minimax regret and there is no reduction.
4. Relabel feedback to the signal rows h1, h2, giving G = (L, H) with
   L = K H for K = [[0, 0], [1, 1]].
5. With D = diag(k11 - k21, k22 - k12) and k = (k21, k12), relabel H to
   H' = D H and shift the loss by k^T H; the result satisfies L' = H'.
6. Rescale L' (= H') into [0, 1]; the scale b maps regret back exactly.

Every step is recorded in a :class:`~pm_bandits.transforms.TransformTranscript`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.linalg

from .core.game import FeedbackSymbol, Game
from .errors import (
    DegenerateGame,
    DimensionMismatch,
    NotCanonical,
    NotInRowSpace,
    NotReducible,
    SolverError,
    UnknownFeedbackSymbol,
    WrongArity,
)
from .rational import all_small_rationals, as_rational_array, format_rational
from .rational import solve as rational_solve
from .settings import resolve_exact, resolve_tol
from .transforms import (
    ColumnShift,
    FeedbackRelabel,
    GlobalAffine,
    Relabel,
    TransformTranscript,
    canonical_relabel,
    is_canonical,
)

logger = logging.getLogger(__name__)

# The K produced by the signal-row construction.
K_SIGNAL = np.array([[0, 0], [1, 1]])


def _max_abs(values) -> float:
    arr = np.asarray(values, dtype=object).reshape(-1)
    if arr.size == 0:
        return 0.0
    return float(max(abs(x) for x in arr))


def _json_matrix(arr) -> list:
    return [[format_rational(x) for x in row] for row in np.asarray(arr, dtype=object)]


def _json_vector(arr) -> list:
    return [format_rational(x) for x in np.asarray(arr, dtype=object).reshape(-1)]


# --- indicator matrix ---


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    """
    Stacked 0/1 matrix A = [A1; A2] with ``[A_i]_jk = 1{H0[i, k] = j}``.

    ``A @ p`` gives, per action block, the law of the observed canonical
    symbol when outcomes are drawn from p.
    """

    A: np.ndarray
    block_sizes: tuple[int, int]

    @property
    def m(self) -> int:
        return sum(self.block_sizes)

    @property
    def n_outcomes(self) -> int:
        return self.A.shape[1]

    def block(self, action: int) -> np.ndarray:
        m1 = self.block_sizes[0]
        return self.A[:m1] if action == 1 else self.A[m1:]

    def rows(self) -> list[np.ndarray]:
        return list(self.A)

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "block_sizes": list(self.block_sizes)}


def build_indicator_matrix(h_canonical, m: Optional[tuple[int, int]] = None) -> IndicatorMatrix:
    """Indicator matrix of a canonical 2 x M feedback matrix."""
    rows = [list(r) for r in h_canonical]
    if len(rows) != 2:
        raise WrongArity(len(rows), "build_indicator_matrix")
    if not is_canonical(rows):
        raise NotCanonical(f"feedback rows must use symbols 1..m_i, got {rows}")
    counts = tuple(len(set(r)) for r in rows)
    if m is not None and tuple(m) != counts:
        raise NotCanonical(f"block sizes {tuple(m)} do not match distinct symbol counts {counts}")
    n_outcomes = len(rows[0])
    blocks = []
    for row, m_i in zip(rows, counts):
        block = np.zeros((m_i, n_outcomes), dtype=int)
        for k, h in enumerate(row):
            block[int(h) - 1, k] = 1
        blocks.append(block)
    A = np.vstack(blocks)
    A.setflags(write=False)
    return IndicatorMatrix(A=A, block_sizes=counts)


def feedback_distribution(indicator: IndicatorMatrix, p) -> tuple[np.ndarray, np.ndarray]:
    """Per-action law of the canonical feedback symbol under outcome law p."""
    dist = indicator.A @ np.asarray(p)
    m1 = indicator.block_sizes[0]
    return dist[:m1], dist[m1:]


# --- signal decomposition ---


def _use_exact(values, exact: Optional[bool]) -> bool:
    exact = resolve_exact(exact)
    if exact is None:
        return all_small_rationals(np.asarray(values, dtype=object).reshape(-1))
    return exact


def signal_system(game: Game, exact: bool | None = None) -> tuple[np.ndarray, IndicatorMatrix, bool]:
    """
    ``(ell, A, exact)`` for a two-action game: the loss difference
    ``L0[2] - L0[1]`` and the indicator matrix of its canonical feedback.
    """
    if game.n_actions != 2:
        raise WrongArity(game.n_actions, "signal_system")
    use_exact = _use_exact(game.loss, exact)
    loss = as_rational_array(game.loss) if use_exact else game.float_loss()
    ell = loss[1] - loss[0]
    relabel, _, m = canonical_relabel(game)
    canonical = [[f[h] for h in row] for f, row in zip(relabel.maps, game.feedback)]
    return ell, build_indicator_matrix(canonical, m), use_exact


def _float_least_squares(indicator: IndicatorMatrix, ell) -> tuple[np.ndarray, float]:
    At = indicator.A.T.astype(float)
    target = np.asarray(ell, dtype=float)
    try:
        lam, *_ = scipy.linalg.lstsq(At, target)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"least-squares solve failed: {e}") from e
    if not np.all(np.isfinite(lam)):
        raise SolverError("least-squares solve produced non-finite coefficients")
    return lam, float(np.linalg.norm(At @ lam - target))


def solve_signal_decomposition(
    indicator: IndicatorMatrix, ell, tol: float | None = None, exact: bool | None = None
) -> np.ndarray:
    """
    Minimum-norm lambda with ``A^T lambda = ell``.

    Raises NotInRowSpace (with the residual) when ell is not a combination of
    the rows of A. In exact mode lambda is an object array of Fractions.
    """
    tol = resolve_tol(tol)
    ell = np.asarray(ell, dtype=object).reshape(-1)
    if ell.size != indicator.n_outcomes:
        raise DimensionMismatch(f"ell has length {ell.size}, A has {indicator.n_outcomes} columns")

    lam_float, residual = _float_least_squares(indicator, ell)
    if _use_exact(ell, exact):
        # The minimum-norm solution lies in im A, so lambda = A y with A^T A y = ell.
        A = as_rational_array(indicator.A)
        ell_q = as_rational_array(ell)
        y = rational_solve(A.T @ A, ell_q)
        if y is None:
            raise NotInRowSpace(residual)
        lam = A @ y
        logger.debug("exact lambda=%s", [format_rational(x) for x in lam])
        return lam

    bound = tol * (1.0 + float(np.linalg.norm(np.asarray(ell, dtype=float))))
    logger.debug("lambda residual %.3e (bound %.3e)", residual, bound)
    if residual > bound:
        raise NotInRowSpace(residual)
    return lam_float


def build_signal_rows(lam, indicator: IndicatorMatrix) -> tuple[np.ndarray, np.ndarray]:
    """h1 from the first m1 rows of A weighted by lambda, h2 from the rest."""
    lam = np.asarray(lam, dtype=object if np.asarray(lam).dtype == object else float)
    if lam.size != indicator.m:
        raise DimensionMismatch(f"lambda has length {lam.size}, A has {indicator.m} rows")
    m1 = indicator.block_sizes[0]
    A = indicator.A.astype(object) if lam.dtype == object else indicator.A.astype(float)
    return lam[:m1] @ A[:m1], lam[m1:] @ A[m1:]


# --- bandit construction ---


@dataclass(frozen=True, eq=False)
class BanditReduction:
    """
    Certificate and executable artifact of the reduction of ``source`` to
    ``bandit_game``.

    ``feedback_to_loss[i - 1]`` maps every original feedback symbol of action
    i to the surrogate loss the bandit game would charge, already rescaled
    into [0, 1]. Regret on the source equals ``scale`` times regret on the
    bandit game.
    """

    source: Game
    ell: np.ndarray
    lam: np.ndarray
    indicator: IndicatorMatrix
    h1: np.ndarray
    h2: np.ndarray
    L: np.ndarray
    H: np.ndarray
    K: np.ndarray
    D: np.ndarray
    k: np.ndarray
    L_prime: np.ndarray
    H_prime: np.ndarray
    bandit_game: Game
    feedback_to_loss: tuple[dict, ...]
    scale: float | Fraction
    offset: float | Fraction
    transcript: TransformTranscript
    exact: bool = False
    residual: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def surrogate_loss(self, action: int, symbol: FeedbackSymbol) -> float:
        try:
            return self.feedback_to_loss[action - 1][symbol]
        except (KeyError, IndexError):
            raise UnknownFeedbackSymbol(
                f"action {action} never shows symbol {symbol!r} in game '{self.source.name}'"
            )

    def to_dict(self) -> dict:
        return {
            "source": self.source.to_dict(),
            "exact": self.exact,
            "ell": _json_vector(self.ell),
            "lambda": _json_vector(self.lam),
            "indicator": self.indicator.to_dict(),
            "h1": _json_vector(self.h1),
            "h2": _json_vector(self.h2),
            "L": _json_matrix(self.L),
            "H": _json_matrix(self.H),
            "K": _json_matrix(self.K),
            "D": _json_matrix(self.D),
            "k": _json_vector(self.k),
            "L_prime": _json_matrix(self.L_prime),
            "H_prime": _json_matrix(self.H_prime),
            "bandit_game": self.bandit_game.to_dict(),
            "feedback_to_loss": [
                [[h, float(v)] for h, v in f.items()] for f in self.feedback_to_loss
            ],
            "scale": format_rational(self.scale),
            "offset": format_rational(self.offset),
            "transcript": self.transcript.to_dict(),
            "residual": self.residual,
        }


def _numeric_feedback(game: Game) -> np.ndarray:
    dtype = object if game.exact else float
    try:
        return np.array([[h for h in row] for row in game.feedback], dtype=dtype)
    except (TypeError, ValueError):
        raise DegenerateGame(f"feedback of '{game.name}' is not numeric")


def _float_game(game: Game, name: str) -> Game:
    # Built from the rescaled feedback, which is constant per symbol by
    # construction; the rescaled loss agrees with it up to rounding.
    loss = np.clip(_numeric_feedback(game).astype(float), 0.0, 1.0)
    loss.setflags(write=False)
    # bandit feedback is the loss itself, bit for bit
    fb = tuple(tuple(float(x) for x in row) for row in loss)
    return Game(name=name, loss=loss, feedback=fb, derived=True)


def bandit_from_linear(
    transcript: TransformTranscript | Game, K, tol: float | None = None, original: Game | None = None
) -> dict:
    """
    Turn the transcript's target G = (L, H) with L = K H into a bandit game.

    Works for any 2 x 2 K. A zero diagonal entry of D collapses a feedback
    row, which leaves the transcript one-directional ('easier').
    Returns the pieces of the construction as a dict; ``reduce_to_bandit``
    assembles them into a :class:`BanditReduction`.
    """
    tol = resolve_tol(tol)
    if isinstance(transcript, Game):
        transcript = TransformTranscript.start(transcript)
    game = transcript.target
    if game.n_actions != 2:
        raise WrongArity(game.n_actions, "bandit_from_linear")
    exact = game.exact
    K = as_rational_array(K) if exact else np.asarray(K, dtype=float)
    L = game.loss
    H = _numeric_feedback(game)

    lkh = _max_abs(L - K @ H)
    if lkh > tol:
        raise DegenerateGame(f"L = K H fails by {lkh:.3e} for '{game.name}'")

    d = (K[0, 0] - K[1, 0], K[1, 1] - K[0, 1])
    D = np.array([[d[0], 0], [0, d[1]]], dtype=object if exact else float)
    k = np.array([K[1, 0], K[0, 1]], dtype=object if exact else float)

    diag_maps = tuple({h: d_i * h for h in row} for d_i, row in zip(d, game.feedback))
    transcript = transcript.then(Relabel(FeedbackRelabel(diag_maps), note="diagonal"))
    H_prime = D @ H
    shift = k @ H
    transcript = transcript.then(ColumnShift(tuple(shift)))
    L_prime = transcript.target.loss

    lh = _max_abs(L_prime - H_prime)
    if lh > tol:
        raise DegenerateGame(f"L' = H' fails by {lh:.3e} for '{game.name}'")

    lo, hi = min(L_prime.reshape(-1)), max(L_prime.reshape(-1))
    scale = hi - lo
    if scale == 0:
        scale = Fraction(1) if exact else 1.0
    affine = GlobalAffine(scale=scale, offsets=(lo,) * game.n_outcomes, rescale_feedback=True)
    transcript = transcript.then(affine)
    logger.debug("bandit rescale b=%s offset=%s", scale, lo)

    source = original if original is not None else transcript.source
    bandit = _float_game(transcript.target, name=f"{source.name}:bandit")
    maps = []
    for i, row in enumerate(source.feedback):
        f: dict = {}
        for j, h in enumerate(row):
            value = bandit.loss[i, j]
            if h in f and abs(f[h] - value) > tol:
                raise DegenerateGame(
                    f"symbol {h!r} of action {i + 1} maps to both {f[h]} and {value}"
                )
            f.setdefault(h, value)
        maps.append(f)

    return {
        "K": K,
        "D": D,
        "k": k,
        "L_prime": L_prime,
        "H_prime": H_prime,
        "scale": scale,
        "offset": lo,
        "bandit_game": bandit,
        "feedback_to_loss": tuple(maps),
        "transcript": transcript,
    }


def reduce_to_bandit(
    game: Game, tol: float | None = None, exact: bool | None = None
) -> BanditReduction:
    """
    Reduce a two-action game to a 2 x M bandit game.

    Raises WrongArity for N != 2 and NotReducible when ell lies outside
    im A^T (the game then has linear minimax regret).
    """
    tol = resolve_tol(tol)
    if game.n_actions != 2:
        raise WrongArity(game.n_actions, "reduce_to_bandit")
    use_exact = _use_exact(game.loss, exact)
    work = game
    if use_exact and not game.exact:
        loss = as_rational_array(game.loss)
        loss.setflags(write=False)
        work = Game(name=game.name, loss=loss, feedback=game.feedback, derived=game.derived)

    transcript = TransformTranscript.start(work)
    transcript = transcript.then(ColumnShift(tuple(work.loss[0])))
    L = transcript.target.loss
    ell = L[1]

    relabel, _, m = canonical_relabel(transcript.target)
    transcript = transcript.then(Relabel(relabel, note="canonical"))
    indicator = build_indicator_matrix(transcript.target.feedback, m)

    try:
        lam = solve_signal_decomposition(indicator, ell, tol=tol, exact=use_exact)
    except NotInRowSpace as e:
        raise NotReducible(e.residual, game.name) from e
    _, residual = _float_least_squares(indicator, ell)

    h1, h2 = build_signal_rows(lam, indicator)
    m1 = m[0]
    signal = (
        {c: lam[c - 1] for c in range(1, m1 + 1)},
        {c: lam[m1 + c - 1] for c in range(1, m[1] + 1)},
    )
    transcript = transcript.then(Relabel(FeedbackRelabel(signal), note="signal"))
    H = np.vstack([h1, h2])

    parts = bandit_from_linear(transcript, K_SIGNAL, tol=tol, original=game)
    logger.debug(
        "reduced '%s': exact=%s residual=%.3e scale=%s", game.name, use_exact, residual, parts["scale"]
    )
    return BanditReduction(
        source=game,
        ell=ell,
        lam=lam,
        indicator=indicator,
        h1=h1,
        h2=h2,
        L=L,
        H=H,
        exact=use_exact,
        residual=residual,
        diagnostics={"relation": parts["transcript"].relation, "m": m},
        **parts,
    )


# --- verification ---


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residual: float


@dataclass(frozen=True)
class ReductionReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def max_residual(self) -> float:
        finite = [c.residual for c in self.checks.values()]
        return max(finite) if finite else 0.0

    def failed(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": {
                name: {"passed": c.passed, "residual": c.residual} for name, c in self.checks.items()
            },
        }


def verify_reduction(red: BanditReduction, tol: float | None = None) -> ReductionReport:
    """
    Recompute the identities of a reduction from its lambda and report each
    check with its largest residual. Never raises.
    """
    tol = resolve_tol(tol)
    checks: dict[str, CheckResult] = {}

    def record(name: str, fn) -> None:
        try:
            residual = fn()
        except Exception as e:  # report-valued
            logger.debug("check %s raised %s", name, e)
            residual = math.inf
        checks[name] = CheckResult(passed=residual <= tol, residual=residual)

    def signal_matrix():
        h1, h2 = build_signal_rows(red.lam, red.indicator)
        return np.vstack([h1, h2])

    record("L=KH", lambda: _max_abs(red.L - red.K @ signal_matrix()))
    record("H'=DH", lambda: _max_abs(red.H_prime - red.D @ signal_matrix()))
    record("L'=L-1(k^T H)", lambda: _max_abs(red.L_prime - (red.L - red.k @ signal_matrix())))
    record("L'=H'", lambda: _max_abs(red.L_prime - red.H_prime))

    def maps_residual():
        worst = 0.0
        lp = np.asarray(red.L_prime, dtype=object)
        for i, row in enumerate(red.source.feedback):
            for j, h in enumerate(row):
                expected = float((lp[i, j] - red.offset) / red.scale)
                worst = max(worst, abs(red.surrogate_loss(i + 1, h) - expected))
        return worst

    record("feedback_to_loss", maps_residual)

    def transcript_residual():
        replayed = red.transcript.replay(red.source)
        return max(
            red.transcript.max_residual(),
            float(np.max(np.abs(replayed.float_loss() - red.bandit_game.float_loss()))),
        )

    record("transcript", transcript_residual)

    def range_residual():
        loss = red.bandit_game.float_loss()
        return float(max(0.0, -loss.min(), loss.max() - 1.0))

    record("bandit_range", range_residual)
    return ReductionReport(checks=checks)


def certificate_tol(red: BanditReduction, tol: float | None = None) -> float:
    """Check tolerance matching the row-space test: ``tol (1 + ||ell||)``."""
    tol = resolve_tol(tol)
    return tol * (1.0 + float(np.linalg.norm(np.asarray(red.ell, dtype=float))))


def has_linear_structure(game: Game, K, tol: float | None = None) -> bool:
    """True when the feedback is numeric and L = K H within tol."""
    tol = resolve_tol(tol)
    try:
        H = _numeric_feedback(game)
    except DegenerateGame:
        return False
    K = np.asarray(K, dtype=object if game.exact else float)
    return _max_abs(game.loss - K @ H) <= tol
