"""
Oblivious adversaries for hard two-action games.

When ``ell`` is not a combination of the rows of the indicator matrix A,
some direction v in Ker A has ``ell^T v > 0``. Around a point p0 of the open
simplex where both actions have the same expected loss, the two outcome laws
``p1 = p0 + eps v`` and ``p2 = p0 - eps v`` produce identical feedback
distributions for both actions (``A p1 = A p2``), yet action 2 is the worse
action under p1 and the better one under p2. No learner can tell the laws
apart, so one of them forces regret of at least ``eps ell^T v T / 2``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, PreconditionViolated, SolverError
from .rational import as_rational_array, is_rational_array
from .rational import solve as rational_solve
from .reduction import IndicatorMatrix, _use_exact
from .settings import resolve_tol

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Distribution:
    """Outcome law p on 1..M."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=object if is_rational_array(self.p) else float)
        if p.ndim != 1 or p.size < 1:
            raise DimensionMismatch("a distribution is a non-empty vector")
        if any(x < -SIMPLEX_TOL for x in p):
            raise PreconditionViolated(f"negative probability in {list(p)}")
        if abs(float(sum(p)) - 1.0) > SIMPLEX_TOL:
            raise PreconditionViolated(f"probabilities sum to {float(sum(p))}, not 1")
        object.__setattr__(self, "p", p)

    @property
    def interior(self) -> bool:
        return all(x > 0 for x in self.p)

    @property
    def n_outcomes(self) -> int:
        return self.p.size

    def as_float(self) -> np.ndarray:
        return np.asarray(self.p, dtype=float)

    def __repr__(self) -> str:
        return f"Distribution({[round(float(x), 6) for x in self.p]})"


@dataclass(frozen=True)
class SignConstant:
    """``ell^T p`` never changes sign on the simplex: zero minimax regret."""

    sign: int  # +1: ell >= 0, -1: ell <= 0, 0: ell = 0


@dataclass(frozen=True, eq=False)
class IndistinguishablePair:
    p0: Distribution
    p1: Distribution
    p2: Distribution
    v: np.ndarray
    epsilon: float
    epsilon_max: float
    ell_dot_v: float
    boundary: bool = False

    @property
    def gap(self) -> float:
        """Per-round loss gap between the actions under either law, eps ell^T v."""
        return float(self.epsilon) * float(self.ell_dot_v)

    def regret_floor(self, horizon: int) -> float:
        """Worst-of-two-laws expected regret floor eps ell^T v T / 2."""
        return self.gap * horizon / 2

    def law_floor(self, law: int, mu: float, horizon: int) -> float:
        """Expected-regret floor under p1 (law=1) or p2 (law=2) given mu_T."""
        return self.gap * (mu if law == 1 else horizon - mu)

    def law(self, k: int) -> Distribution:
        return self.p1 if k == 1 else self.p2

    def feedback_gap(self, indicator: IndicatorMatrix) -> float:
        """``||A (p1 - p2)||_inf``."""
        diff = indicator.A @ (self.p1.p - self.p2.p)
        return float(max(abs(x) for x in diff))

    def to_dict(self) -> dict:
        return {
            "p0": [float(x) for x in self.p0.p],
            "p1": [float(x) for x in self.p1.p],
            "p2": [float(x) for x in self.p2.p],
            "v": [float(x) for x in self.v],
            "epsilon": float(self.epsilon),
            "epsilon_max": float(self.epsilon_max),
            "ell_dot_v": float(self.ell_dot_v),
            "boundary": self.boundary,
        }


def kernel_witness(
    indicator: IndicatorMatrix, ell, tol: float | None = None, exact: bool | None = None
) -> Optional[np.ndarray]:
    """
    Projection of ell onto Ker A, scaled to ``||v||_inf = 1``, or None when
    ell is in im A^T. The projection always has ``ell^T v > 0``.
    """
    tol = resolve_tol(tol)
    ell = np.asarray(ell, dtype=object).reshape(-1)
    if ell.size != indicator.n_outcomes:
        raise DimensionMismatch(f"ell has length {ell.size}, A has {indicator.n_outcomes} columns")

    if _use_exact(ell, exact):
        A = as_rational_array(indicator.A)
        ell_q = as_rational_array(ell)
        lam = rational_solve(A @ A.T, A @ ell_q)
        if lam is None:
            raise SolverError("normal equations of the projection are inconsistent")
        v = ell_q - A.T @ lam
        top = max(abs(x) for x in v)
        if top == 0:
            return None
        v = v / top
    else:
        try:
            basis = scipy.linalg.null_space(indicator.A.astype(float))
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SolverError(f"null space computation failed: {e}") from e
        if basis.shape[1] == 0:
            return None
        ell_f = ell.astype(float)
        v = basis @ (basis.T @ ell_f)
        top = float(np.max(np.abs(v)))
        if top == 0.0:
            return None
        v = v / top
        if float(np.max(np.abs(indicator.A @ v))) > max(tol, SIMPLEX_TOL):
            raise SolverError("kernel witness is not annihilated by A")

    if float(ell.astype(float) @ np.asarray(v, dtype=float)) <= tol:
        return None
    return v


def balanced_interior_point(ell) -> Union[Distribution, SignConstant]:
    """
    Interior p0 with ``ell^T p0 = 0``, or SignConstant when ell is one-signed.

    p0 is the uniform law when that already balances the actions; otherwise
    it is the point on the segment from the uniform law to the uniform law
    over the opposite-sign support where ``ell^T p`` crosses zero. The
    uniform law enters with positive weight, so p0 is interior.
    """
    ell = np.asarray(ell, dtype=object if is_rational_array(ell) else float).reshape(-1)
    exact = ell.dtype == object
    positive = [x > 0 for x in ell]
    negative = [x < 0 for x in ell]
    if not any(positive) or not any(negative):
        sign = 1 if any(positive) else (-1 if any(negative) else 0)
        return SignConstant(sign)

    M = ell.size
    one = Fraction(1) if exact else 1.0
    uniform = np.array([one / M] * M, dtype=ell.dtype)
    s = ell @ uniform
    if s == 0:
        return Distribution(uniform)
    support = negative if s > 0 else positive
    size = sum(support)
    q = np.array([one / size if flag else 0 * one for flag in support], dtype=ell.dtype)
    t = ell @ q
    alpha = -t / (s - t)
    p0 = alpha * uniform + (one - alpha) * q
    logger.debug("balanced point alpha=%s", alpha)
    return Distribution(p0)


def _pair_from_witness(p0: Distribution, v, ell, epsilon_fraction) -> IndistinguishablePair:
    if not 0 < epsilon_fraction <= 1:
        raise PreconditionViolated(f"epsilon fraction must be in (0, 1], got {epsilon_fraction}")
    v = np.asarray(v, dtype=p0.p.dtype)
    support = [k for k, x in enumerate(v) if x != 0]
    if not support:
        raise PreconditionViolated("kernel witness v is zero")
    ell_dot_v = ell @ v
    if not ell_dot_v > 0:
        raise PreconditionViolated("kernel witness must satisfy ell^T v > 0")
    eps_max = min(p0.p[k] / abs(v[k]) for k in support)
    if p0.p.dtype == object:
        fraction = Fraction(epsilon_fraction).limit_denominator(10**6)
    else:
        fraction = float(epsilon_fraction)
    eps = fraction * eps_max
    p1, p2 = p0.p + eps * v, p0.p - eps * v
    if p0.p.dtype != object:
        p1 = np.where(np.abs(p1) < SIMPLEX_TOL, 0.0, p1)
        p2 = np.where(np.abs(p2) < SIMPLEX_TOL, 0.0, p2)
    boundary = any(x == 0 for x in p1) or any(x == 0 for x in p2)
    return IndistinguishablePair(
        p0=p0,
        p1=Distribution(p1),
        p2=Distribution(p2),
        v=v,
        epsilon=eps,
        epsilon_max=eps_max,
        ell_dot_v=ell_dot_v,
        boundary=boundary,
    )


def indistinguishable_pair(
    indicator: IndicatorMatrix,
    ell,
    tol: float | None = None,
    epsilon_fraction: float = 0.5,
    v=None,
    exact: bool | None = None,
) -> IndistinguishablePair:
    """
    Outcome laws ``p0 +/- eps v`` with ``A p1 = A p2``.

    ``eps = epsilon_fraction * eps_max`` where ``eps_max`` is the largest step
    that keeps both points in the simplex. Raises PreconditionViolated when
    there is no kernel witness or ell never changes sign.
    """
    tol = resolve_tol(tol)
    use_exact = _use_exact(ell, exact)
    ell = np.asarray(ell, dtype=object).reshape(-1)
    ell = as_rational_array(ell) if use_exact else ell.astype(float)

    if v is None:
        v = kernel_witness(indicator, ell, tol=tol, exact=use_exact)
        if v is None:
            raise PreconditionViolated("ell lies in the row space of A: no kernel witness")
    else:
        v = as_rational_array(v) if use_exact else np.asarray(v, dtype=float)
        if v.size and float(max(abs(x) for x in indicator.A @ v)) > tol:
            raise PreconditionViolated("given v is not in the kernel of A")

    p0 = balanced_interior_point(ell)
    if isinstance(p0, SignConstant):
        raise PreconditionViolated("ell is one-signed: the game has zero minimax regret")
    pair = _pair_from_witness(p0, v, ell, epsilon_fraction)
    logger.debug("pair eps=%s eps_max=%s ell.v=%s", pair.epsilon, pair.epsilon_max, pair.ell_dot_v)
    return pair


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from an int, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_outcomes(p, horizon: int, seed=None) -> np.ndarray:
    """
    ``horizon`` i.i.d. outcomes (1-based) drawn from p by inverse CDF on a
    PCG64 stream; identical (p, horizon, seed) give identical sequences.
    """
    if horizon < 0:
        raise PreconditionViolated(f"horizon must be >= 0, got {horizon}")
    probs = p.as_float() if isinstance(p, Distribution) else Distribution(np.asarray(p)).as_float()
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = make_rng(seed).random(horizon)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, probs.size - 1) + 1
