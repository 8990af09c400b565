"""
Command-line entry point: ``pm-bandits <command> [flags]``.

Commands::

    classify GAME      print the game's class; exit 0 / 1 / 2 for
                       TrivialZero / BanditReducible / HardLinear
    reduce GAME        build and verify the bandit reduction, write the certificate
    simulate GAME      multi-seed runs at one horizon
    scaling GAME       median regret over several horizons and the log-log slope
    lowerbound GAME    play a hard game against its two indistinguishable laws
    selftest           built-in checks on the bundled example games

GAME is a JSON game file or the name of a bundled game (apple, hard,
trivial, fullinfo, fourway, revealing). Other exit codes: 10 domain error
(e.g. not reducible), 64 bad usage, 65 invalid game data, 66 missing file.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import __version__
from .classification import GameTag, classify
from .errors import InvalidInput, PMBanditsError, UnknownLearner, WrongArity
from .io import builtin_games, dumps, load_game, report_paths, write_csv, write_json
from .reduction import certificate_tol, reduce_to_bandit, verify_reduction
from .selftest import run_selftest
from .settings import EXPERIMENT_SETTINGS, LEARNER_SETTINGS
from .simulator import (
    Adversary,
    ExperimentConfig,
    lower_bound_experiment,
    run_many,
    scaling_experiment,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DOMAIN = 10
EXIT_USAGE = 64
EXIT_DATAERR = 65
EXIT_NOINPUT = 66


class UsageError(PMBanditsError):
    """Flag values that parse but make no sense."""


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"❌ {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _horizon(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, power = text.split("^", 1)
        return int(base) ** int(power)
    return int(text)


def _horizon_list(text: str) -> list[int]:
    try:
        return [_horizon(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated horizons like 1024,2^11, got '{text}'")


def _adversary(text: str, game) -> Optional[Adversary]:
    kind, _, rest = text.partition(":")
    if kind == "balanced":
        return None
    if kind == "alternating":
        return Adversary.alternating(game.n_outcomes)
    if kind == "uniform":
        return Adversary.iid([1.0 / game.n_outcomes] * game.n_outcomes, label="uniform")
    try:
        values = [float(x) for x in rest.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot read adversary '{text}'")
    if kind == "fixed":
        return Adversary.fixed([int(x) for x in values])
    if kind == "iid":
        return Adversary.iid(values)
    raise UsageError(
        f"Unsupported adversary '{text}'. Use balanced, alternating, uniform, fixed:<j,...> or iid:<p,...>."
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="row-space tolerance (default 1e-9 or PM_BANDITS_TOL)")
    common.add_argument(
        "--exact", action="store_const", const=True, default=None, help="force exact rational arithmetic"
    )
    common.add_argument(
        "--no-exact", dest="exact", action="store_const", const=False, help="force floating point arithmetic"
    )
    common.add_argument("--out", default=None, help="output path (reports: prefix for .csv and .json)")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--learner", default=None, help="exp3 | exp3:anytime | ewa | uniform | constant:<i> | reduced:<inner>")
    sim.add_argument("--eta", type=float, default=LEARNER_SETTINGS["eta"], help="learning rate override")
    sim.add_argument("--gamma", type=float, default=LEARNER_SETTINGS["gamma"], help="Exp3 exploration override")
    sim.add_argument("--seeds", type=int, default=EXPERIMENT_SETTINGS["seeds"], help="number of seeds")
    sim.add_argument("--seed-base", type=int, default=EXPERIMENT_SETTINGS["seed_base"], help="base of every random stream")
    sim.add_argument("--workers", type=int, default=EXPERIMENT_SETTINGS["workers"], help="worker processes")

    parser = _Parser(prog="pm-bandits", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    commands.required = True

    p = commands.add_parser("classify", parents=[common], help="TrivialZero / BanditReducible / HardLinear")
    p.add_argument("game")
    p.add_argument("--epsilon-fraction", type=float, default=EXPERIMENT_SETTINGS["epsilon_fraction"])

    p = commands.add_parser("reduce", parents=[common], help="bandit reduction certificate")
    p.add_argument("game")
    p.add_argument("--emit-certificate", default=None, metavar="PATH", help="write the certificate JSON here")

    p = commands.add_parser("simulate", parents=[common, sim], help="multi-seed runs at one horizon")
    p.add_argument("game")
    p.add_argument("--T", "--horizon", dest="T", type=_horizon, default=1000, help="horizon")
    p.add_argument("--adversary", default="balanced", help="balanced | alternating | uniform | fixed:<j,..> | iid:<p,..>")

    p = commands.add_parser("scaling", parents=[common, sim], help="log-log regret slope over horizons")
    p.add_argument("game")
    p.add_argument("--Ts", type=_horizon_list, default=list(EXPERIMENT_SETTINGS["horizons"]), help="e.g. 2^10,2^11,2^12")
    p.add_argument("--adversary", default="balanced")

    p = commands.add_parser("lowerbound", parents=[common, sim], help="indistinguishable-pair experiment")
    p.add_argument("game")
    p.add_argument("--T", "--horizon", dest="T", type=_horizon, default=EXPERIMENT_SETTINGS["lower_bound_horizon"])
    p.add_argument("--epsilon-fraction", type=float, default=EXPERIMENT_SETTINGS["epsilon_fraction"])

    commands.add_parser("selftest", parents=[common], help="built-in checks")
    return parser


# --- commands ---


def cmd_classify(args) -> int:
    game = load_game(args.game)
    result = classify(game, tol=args.tol, exact=args.exact, epsilon_fraction=args.epsilon_fraction)
    icon = {GameTag.TRIVIAL_ZERO: "✅", GameTag.BANDIT_REDUCIBLE: "🔁", GameTag.HARD_LINEAR: "⚠️"}[result.tag]
    print(f"{icon} {game.name}: {result.summary()}")
    for key, value in result.diagnostics.items():
        print(f"   {key}: {value}")
    if args.out:
        path = write_json(result.to_dict(), args.out)
        print(f"💾 Classification written to {path}")
    return result.exit_code


def cmd_reduce(args) -> int:
    game = load_game(args.game)
    red = reduce_to_bandit(game, tol=args.tol, exact=args.exact)
    report = verify_reduction(red, tol=certificate_tol(red, args.tol))
    print(f"🔁 {game.name} reduces to a 2x{game.n_outcomes} bandit game (b={red.scale}, {red.transcript.relation})")
    for i, mapping in enumerate(red.feedback_to_loss, start=1):
        pairs = ", ".join(f"{h!r}->{float(v):g}" for h, v in mapping.items())
        print(f"   action {i}: {pairs}")
    print(f"{'✅' if report.passed else '❌'} verification: {report.failed() or 'all checks passed'}")
    certificate = red.to_dict()
    certificate["verification"] = report.to_dict()
    target = args.emit_certificate or args.out
    if target:
        path = write_json(certificate, target)
        print(f"💾 Certificate written to {path}")
    else:
        print(dumps(certificate))
    return EXIT_OK if report.passed else EXIT_FAILURE


def _seeds(args) -> tuple[int, ...]:
    if args.seeds < 1:
        raise UsageError(f"--seeds must be >= 1, got {args.seeds}")
    return tuple(range(args.seeds))


def _write_reports(frame, data, out) -> None:
    csv_path, json_path = report_paths(out)
    write_csv(frame, csv_path)
    write_json(data, json_path)
    print(f"💾 Wrote {csv_path} and {json_path}")


def cmd_simulate(args) -> int:
    game = load_game(args.game)
    config = ExperimentConfig(
        game=game,
        learner=args.learner or LEARNER_SETTINGS["default"],
        horizons=(args.T,),
        seeds=_seeds(args),
        adversary=_adversary(args.adversary, game),
        seed_base=args.seed_base,
        eta=args.eta,
        gamma=args.gamma,
        tol=args.tol,
        exact=args.exact,
        workers=args.workers,
    )
    print(f"📈 {config.learner} on {game.name}: T={args.T}, {len(config.seeds)} seeds")
    result = run_many(config)
    print(result.summary().to_string(index=False))
    if args.out:
        _write_reports(result.to_frame(), result.to_dict(), args.out)
    return EXIT_OK


def cmd_scaling(args) -> int:
    game = load_game(args.game)
    config = ExperimentConfig(
        game=game,
        learner=args.learner or LEARNER_SETTINGS["default"],
        horizons=tuple(args.Ts),
        seeds=_seeds(args),
        adversary=_adversary(args.adversary, game),
        seed_base=args.seed_base,
        eta=args.eta,
        gamma=args.gamma,
        tol=args.tol,
        exact=args.exact,
        workers=args.workers,
    )
    print(f"📈 {config.learner} on {game.name}: T in {list(config.horizons)}, {len(config.seeds)} seeds")
    report = scaling_experiment(config)
    print(report.table.to_string(index=False))
    if report.ok:
        print(f"✅ log-log slope {report.slope:.3f} (stderr {report.slope_stderr:.3f})")
    else:
        print(f"⚠️ {type(report.degenerate).__name__}: {report.degenerate}")
    if args.out:
        _write_reports(report.result.to_frame(), report.to_dict(), args.out)
    return EXIT_OK


def cmd_lowerbound(args) -> int:
    game = load_game(args.game)
    result = classify(game, tol=args.tol, exact=args.exact, epsilon_fraction=args.epsilon_fraction)
    if result.tag is not GameTag.HARD_LINEAR:
        print(f"❌ {game.name} is {result.tag}; the lower-bound experiment needs a HardLinear game")
        return EXIT_DOMAIN
    pair = result.pair
    learner = args.learner or "exp3"
    print(f"⚠️ {game.name}: p1={[float(x) for x in pair.p1.p]} p2={[float(x) for x in pair.p2.p]}")
    print(f"   eps={float(pair.epsilon):g} ell.v={float(pair.ell_dot_v):g} boundary={pair.boundary}")
    report = lower_bound_experiment(
        game,
        pair,
        learner,
        horizon=args.T,
        seeds=_seeds(args),
        seed_base=args.seed_base,
        eta=args.eta,
        gamma=args.gamma,
        workers=args.workers,
    )
    for law, estimate in report.laws.items():
        print(
            f"📈 law p{law}: regret {estimate.mean_regret:.1f} +/- {estimate.regret_sem:.1f}, "
            f"mu_T {estimate.mean_mu:.1f} +/- {estimate.mu_sem:.1f}"
        )
    icon = "✅" if report.passes_floor else "❌"
    print(f"{icon} max-law regret {report.max_regret:.1f} vs floor {report.floor:.1f}")
    if args.out:
        _write_reports(report.to_frame(), report.to_dict(), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    print("🧪 Running self test")
    report = run_selftest()
    for check in report.checks:
        print(f"{'✅' if check.passed else '❌'} {check.name}: {check.detail}")
    if args.out:
        write_json(report.to_dict(), args.out)
    print("✅ All checks passed" if report.passed else "❌ Self test failed")
    return EXIT_OK if report.passed else EXIT_FAILURE


COMMANDS = {
    "classify": cmd_classify,
    "reduce": cmd_reduce,
    "simulate": cmd_simulate,
    "scaling": cmd_scaling,
    "lowerbound": cmd_lowerbound,
    "selftest": cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except FileNotFoundError as e:
        print(f"❌ {e}", file=sys.stderr)
        print(f"   bundled games: {', '.join(builtin_games())}", file=sys.stderr)
        return EXIT_NOINPUT
    except (UnknownLearner, UsageError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except WrongArity as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except InvalidInput as e:
        print(f"❌ invalid game data: {e}", file=sys.stderr)
        return EXIT_DATAERR
    except PMBanditsError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_NOINPUT


if __name__ == "__main__":
    sys.exit(main())
