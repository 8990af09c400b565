"""
Multi-seed experiments on top of :func:`~pm_bandits.simulator.protocol.run`.

Every run gets two independent random streams, both derived from
``(seed_base, seed, role)``: one for the adversary's outcome draws and one
for the learner. Changing the learner never perturbs the outcomes and vice
versa. Runs are independent, so they may execute in worker processes;
results are always folded in (T, seed) order, which keeps CSV output
byte-identical for identical configurations.

Regret reported here is the regret against the configured adversary. It is
a lower estimate of the worst case over all outcome sequences.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
import scipy.stats

from ..adversary import (
    Distribution,
    IndistinguishablePair,
    SignConstant,
    balanced_interior_point,
    sample_outcomes,
)
from ..core.game import Game
from ..errors import DegenerateRegret, LengthMismatch, PreconditionViolated
from ..learners import build_learner
from ..reduction import reduce_to_bandit
from ..settings import EXPERIMENT_SETTINGS, LEARNER_SETTINGS
from .protocol import run

logger = logging.getLogger(__name__)

ROLE_ADVERSARY = 0
ROLE_LEARNER = 1

CSV_COLUMNS = ["game", "learner", "T", "seed", "regret", "mu_T", "expected_regret"]


def stream_seeds(seed_base: int, seed: int, law: int = 0) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    """(adversary, learner) seed sequences of one run. The learner stream ignores *law*."""
    adversary = np.random.SeedSequence([seed_base, seed, ROLE_ADVERSARY, law])
    learner = np.random.SeedSequence([seed_base, seed, ROLE_LEARNER])
    return adversary, learner


# --- adversaries ---


@dataclass(frozen=True)
class Adversary:
    """
    Oblivious outcome source: a fixed pattern (repeated cyclically up to the
    horizon) or i.i.d. draws from a law p.
    """

    kind: str
    pattern: tuple[int, ...] = ()
    p: tuple[float, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("fixed", "iid"):
            raise PreconditionViolated(f"unknown adversary kind '{self.kind}'")
        if self.kind == "fixed" and not self.pattern:
            raise LengthMismatch("a fixed adversary needs at least one outcome")
        if self.kind == "iid":
            Distribution(np.asarray(self.p, dtype=float))

    @classmethod
    def fixed(cls, outcomes: Sequence[int], label: str = "fixed") -> "Adversary":
        return cls(kind="fixed", pattern=tuple(int(j) for j in outcomes), label=label)

    @classmethod
    def iid(cls, p, label: str = "iid") -> "Adversary":
        probs = p.as_float() if isinstance(p, Distribution) else np.asarray(p, dtype=float)
        return cls(kind="iid", p=tuple(float(x) for x in probs), label=label)

    @classmethod
    def alternating(cls, n_outcomes: int = 2) -> "Adversary":
        return cls.fixed(range(1, n_outcomes + 1), label="alternating")

    def outcomes(self, horizon: int, seed=None) -> np.ndarray:
        if self.kind == "fixed":
            return np.resize(np.asarray(self.pattern, dtype=int), horizon)
        return sample_outcomes(self.p, horizon, seed)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        if self.kind == "fixed":
            out["pattern"] = list(self.pattern)
        else:
            out["p"] = list(self.p)
        return out


def balanced_adversary(game: Game) -> Adversary:
    """
    i.i.d. law under which both actions of a two-action game have the same
    expected loss; uniform when no such interior law exists.
    """
    if game.n_actions == 2:
        loss = game.float_loss()
        p0 = balanced_interior_point(loss[1] - loss[0])
        if not isinstance(p0, SignConstant):
            return Adversary.iid(p0, label="balanced")
    return Adversary.iid(np.full(game.n_outcomes, 1.0 / game.n_outcomes), label="uniform")


# --- configuration ---


def _default_seeds() -> tuple[int, ...]:
    return tuple(range(EXPERIMENT_SETTINGS["seeds"]))


@dataclass(frozen=True)
class ExperimentConfig:
    game: Game
    learner: str = field(default_factory=lambda: LEARNER_SETTINGS["default"])
    horizons: tuple[int, ...] = field(default_factory=lambda: tuple(EXPERIMENT_SETTINGS["horizons"]))
    seeds: tuple[int, ...] = field(default_factory=_default_seeds)
    adversary: Optional[Adversary] = None
    seed_base: int = field(default_factory=lambda: EXPERIMENT_SETTINGS["seed_base"])
    adversary_seed: Optional[int] = None  # one outcome stream shared by every seed
    eta: Optional[float] = field(default_factory=lambda: LEARNER_SETTINGS["eta"])
    gamma: Optional[float] = field(default_factory=lambda: LEARNER_SETTINGS["gamma"])
    tol: Optional[float] = None
    exact: Optional[bool] = None
    workers: int = field(default_factory=lambda: EXPERIMENT_SETTINGS["workers"])

    def __post_init__(self):
        horizons = tuple(int(t) for t in self.horizons)
        seeds = tuple(int(s) for s in self.seeds)
        if not horizons:
            raise PreconditionViolated("at least one horizon is required")
        if any(t < 0 for t in horizons):
            raise PreconditionViolated(f"horizons must be >= 0, got {horizons}")
        if any(b <= a for a, b in zip(horizons, horizons[1:])):
            raise PreconditionViolated(f"horizons must be strictly increasing, got {horizons}")
        if not seeds:
            raise PreconditionViolated("at least one seed is required")
        if any(s < 0 for s in seeds) or self.seed_base < 0:
            raise PreconditionViolated("seeds must be non-negative")
        if self.workers < 1:
            raise PreconditionViolated(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "horizons", horizons)
        object.__setattr__(self, "seeds", seeds)

    def to_dict(self) -> dict:
        return {
            "game": self.game.name,
            "learner": self.learner,
            "horizons": list(self.horizons),
            "seeds": list(self.seeds),
            "adversary": None if self.adversary is None else self.adversary.to_dict(),
            "seed_base": self.seed_base,
            "adversary_seed": self.adversary_seed,
            "eta": self.eta,
            "gamma": self.gamma,
        }


# --- run execution ---


@dataclass(frozen=True)
class RunTask:
    game: Game
    learner: str
    adversary: Adversary
    horizon: int
    seed: int
    seed_base: int
    law: int = 0
    adversary_seed: Optional[int] = None
    eta: Optional[float] = None
    gamma: Optional[float] = None
    tol: Optional[float] = None
    exact: Optional[bool] = None


def execute(task: RunTask) -> dict:
    """One run; module-level so worker processes can unpickle it."""
    adversary_stream, learner_stream = stream_seeds(task.seed_base, task.seed, task.law)
    if task.adversary_seed is not None:
        adversary_stream = np.random.SeedSequence([task.adversary_seed, ROLE_ADVERSARY, task.law])
    outcomes = task.adversary.outcomes(task.horizon, adversary_stream)
    learner = build_learner(
        task.learner, game=task.game, eta=task.eta, gamma=task.gamma, tol=task.tol, exact=task.exact
    )
    trace = run(task.game, learner, outcomes, seed=np.random.default_rng(learner_stream))
    return {
        "game": task.game.name,
        "learner": task.learner,
        "T": task.horizon,
        "seed": task.seed,
        "law": task.law,
        "regret": trace.regret,
        "mu_T": trace.mu,
        "expected_regret": np.nan if trace.expected_regret is None else trace.expected_regret,
    }


def execute_all(tasks: list[RunTask], workers: int = 1) -> pd.DataFrame:
    """Run every task and fold the records in (T, seed, law) order."""
    if workers > 1 and len(tasks) > 1:
        chunk = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(execute, tasks, chunksize=chunk))
    else:
        records = [execute(t) for t in tasks]
    records.sort(key=lambda r: (r["T"], r["seed"], r["law"]))
    return pd.DataFrame.from_records(records, columns=CSV_COLUMNS[:4] + ["law"] + CSV_COLUMNS[4:])


def _check_learner(config: ExperimentConfig) -> None:
    # fail in the parent (UnknownLearner, NotReducible, ...) before any run starts
    build_learner(
        config.learner,
        game=config.game,
        eta=config.eta,
        gamma=config.gamma,
        tol=config.tol,
        exact=config.exact,
    )


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: ExperimentConfig
    frame: pd.DataFrame

    def regrets(self, horizon: int) -> np.ndarray:
        return self.frame.loc[self.frame["T"] == horizon, "regret"].to_numpy()

    def summary(self) -> pd.DataFrame:
        """Per-T mean, median, spread and quantiles of the regret over seeds."""
        grouped = self.frame.groupby("T")["regret"]
        table = grouped.agg(["count", "mean", "median", "std", "sem", "min", "max"])
        table["q25"] = grouped.quantile(0.25)
        table["q75"] = grouped.quantile(0.75)
        return table.fillna(0.0).reset_index()

    def to_frame(self) -> pd.DataFrame:
        return self.frame[CSV_COLUMNS].copy()

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "summary": self.summary().to_dict(orient="records"),
        }


def run_many(config: ExperimentConfig) -> ExperimentResult:
    """Every (horizon, seed) pair of *config*, with per-seed regrets."""
    _check_learner(config)
    adversary = config.adversary or balanced_adversary(config.game)
    config = replace(config, adversary=adversary)
    tasks = [
        RunTask(
            game=config.game,
            learner=config.learner,
            adversary=adversary,
            horizon=horizon,
            seed=seed,
            seed_base=config.seed_base,
            adversary_seed=config.adversary_seed,
            eta=config.eta,
            gamma=config.gamma,
            tol=config.tol,
            exact=config.exact,
        )
        for horizon in config.horizons
        for seed in config.seeds
    ]
    logger.info(
        "running %d runs of %s on %s (%s adversary)",
        len(tasks),
        config.learner,
        config.game.name,
        adversary.label or adversary.kind,
    )
    frame = execute_all(tasks, config.workers)
    return ExperimentResult(config=config, frame=frame)


# --- sqrt(T) scaling ---


def fit_loglog(horizons, values) -> tuple[float, float, float]:
    """Least-squares line of log(values) on log(horizons): (slope, intercept, stderr)."""
    fit = scipy.stats.linregress(np.log(np.asarray(horizons, float)), np.log(np.asarray(values, float)))
    return float(fit.slope), float(fit.intercept), float(fit.stderr)


def exp3_envelope(horizon: int, n_actions: int, scale: float = 1.0) -> float:
    """``2 sqrt(T N ln N) b``: the Exp3 regret envelope mapped back through a reduction."""
    return 2.0 * math.sqrt(horizon * n_actions * math.log(n_actions)) * scale


@dataclass(frozen=True, eq=False)
class ScalingReport:
    game: str
    learner: str
    table: pd.DataFrame
    slope: Optional[float] = None
    intercept: Optional[float] = None
    slope_stderr: Optional[float] = None
    band: Optional[tuple[float, float]] = None
    scale: Optional[float] = None
    degenerate: Optional[DegenerateRegret] = None
    result: Optional[ExperimentResult] = None

    @property
    def ok(self) -> bool:
        return self.degenerate is None

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "learner": self.learner,
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "slope_band": None if self.band is None else list(self.band),
            "bandit_scale": self.scale,
            "status": "ok" if self.ok else type(self.degenerate).__name__,
            "reason": None if self.ok else str(self.degenerate),
            "per_T": self.table.to_dict(orient="records"),
        }


def scaling_experiment(config: ExperimentConfig) -> ScalingReport:
    """
    Median regret per horizon and the slope of log(median) against log(T).

    The default adversary is the balanced i.i.d. law. Non-positive medians
    make the slope undefined; the report then carries a DegenerateRegret.
    """
    horizons = config.horizons
    if len(horizons) > 1 and horizons[0] > 0 and math.log10(horizons[-1] / horizons[0]) < 2:
        logger.warning("horizons %s span less than two decades; the slope is loosely determined", horizons)

    result = run_many(config)
    table = result.summary()

    scale = None
    if config.learner.startswith("reduced:"):
        red = reduce_to_bandit(config.game, tol=config.tol, exact=config.exact)
        scale = float(red.scale)
        table["envelope"] = [exp3_envelope(t, 2, scale) for t in table["T"]]

    base = dict(game=config.game.name, learner=config.learner, table=table, scale=scale, result=result)
    medians = table["median"].to_numpy()
    if len(horizons) < 2:
        return ScalingReport(**base, degenerate=DegenerateRegret("need at least two horizons to fit a slope"))
    if np.any(medians <= 0) or np.any(table["T"].to_numpy() <= 0):
        worst = int(np.argmin(medians))
        return ScalingReport(
            **base,
            degenerate=DegenerateRegret(
                f"median regret {medians[worst]:g} at T={int(table['T'][worst])}; slope undefined"
            ),
        )

    slope, intercept, stderr = fit_loglog(table["T"], medians)
    band = None
    if np.all(table["q25"] > 0):
        band = (fit_loglog(table["T"], table["q25"])[0], fit_loglog(table["T"], table["q75"])[0])
    logger.info("%s on %s: slope %.3f +/- %.3f", config.learner, config.game.name, slope, stderr)
    return ScalingReport(**base, slope=slope, intercept=intercept, slope_stderr=stderr, band=band)


# --- indistinguishable-pair lower bound ---


@dataclass(frozen=True)
class LawEstimate:
    law: int
    mean_regret: float
    regret_sem: float
    mean_mu: float
    mu_sem: float
    mean_expected_regret: float
    pseudo_floor: float  # eps ell^T v mu (law 1) or eps ell^T v (T - mu) (law 2)


def _sem(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(scipy.stats.sem(values))


@dataclass(frozen=True, eq=False)
class LowerBoundReport:
    game: str
    learner: str
    horizon: int
    pair: IndistinguishablePair
    laws: dict
    frame: pd.DataFrame

    @property
    def floor(self) -> float:
        return self.pair.regret_floor(self.horizon)

    @property
    def worst_law(self) -> LawEstimate:
        return max(self.laws.values(), key=lambda e: e.mean_regret)

    @property
    def max_regret(self) -> float:
        return self.worst_law.mean_regret

    @property
    def passes_floor(self) -> bool:
        """Worst-law mean regret reaches the floor within three standard errors."""
        return self.max_regret >= self.floor - 3.0 * self.worst_law.regret_sem

    @property
    def mu_gap(self) -> float:
        return abs(self.laws[1].mean_mu - self.laws[2].mean_mu)

    @property
    def mu_consistent(self) -> bool:
        spread = math.hypot(self.laws[1].mu_sem, self.laws[2].mu_sem)
        return self.mu_gap <= 3.0 * spread

    def to_frame(self) -> pd.DataFrame:
        return self.frame[CSV_COLUMNS[:4] + ["law"] + CSV_COLUMNS[4:]].copy()

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            "learner": self.learner,
            "T": self.horizon,
            "pair": self.pair.to_dict(),
            "floor": self.floor,
            "max_regret": self.max_regret,
            "passes_floor": self.passes_floor,
            "mu_gap": self.mu_gap,
            "mu_consistent": self.mu_consistent,
            "laws": {
                str(k): {
                    "mean_regret": e.mean_regret,
                    "regret_sem": e.regret_sem,
                    "mean_mu": e.mean_mu,
                    "mu_sem": e.mu_sem,
                    "mean_expected_regret": e.mean_expected_regret,
                    "pseudo_floor": e.pseudo_floor,
                }
                for k, e in self.laws.items()
            },
            "note": "regret against the two constructed laws; a lower estimate of the worst case",
        }


def lower_bound_experiment(
    game: Game,
    pair: IndistinguishablePair,
    learner: str,
    horizon: int | None = None,
    seeds: Sequence[int] | None = None,
    seed_base: int | None = None,
    eta: float | None = None,
    gamma: float | None = None,
    workers: int | None = None,
) -> LowerBoundReport:
    """
    Play *learner* against i.i.d. outcomes from p1 and from p2 with the same
    learner streams, and compare the worse law's regret to ``eps ell^T v T / 2``.
    """
    horizon = EXPERIMENT_SETTINGS["lower_bound_horizon"] if horizon is None else int(horizon)
    seeds = _default_seeds() if seeds is None else tuple(int(s) for s in seeds)
    seed_base = EXPERIMENT_SETTINGS["seed_base"] if seed_base is None else seed_base
    workers = EXPERIMENT_SETTINGS["workers"] if workers is None else workers
    if not seeds:
        raise PreconditionViolated("at least one seed is required")

    build_learner(learner, game=game, eta=eta, gamma=gamma)
    tasks = [
        RunTask(
            game=game,
            learner=learner,
            adversary=Adversary.iid(pair.law(law), label=f"p{law}"),
            horizon=horizon,
            seed=seed,
            seed_base=seed_base,
            law=law,
            eta=eta,
            gamma=gamma,
        )
        for law in (1, 2)
        for seed in seeds
    ]
    frame = execute_all(tasks, workers)

    laws = {}
    for law in (1, 2):
        rows = frame[frame["law"] == law]
        regrets = rows["regret"].to_numpy(dtype=float)
        mus = rows["mu_T"].to_numpy(dtype=float)
        mean_mu = float(mus.mean())
        laws[law] = LawEstimate(
            law=law,
            mean_regret=float(regrets.mean()),
            regret_sem=_sem(regrets),
            mean_mu=mean_mu,
            mu_sem=_sem(mus),
            mean_expected_regret=float(rows["expected_regret"].mean()),
            pseudo_floor=pair.law_floor(law, mean_mu, horizon),
        )
    report = LowerBoundReport(
        game=game.name, learner=learner, horizon=horizon, pair=pair, laws=laws, frame=frame
    )
    logger.info(
        "%s on %s: max-law regret %.1f vs floor %.1f", learner, game.name, report.max_regret, report.floor
    )
    return report
