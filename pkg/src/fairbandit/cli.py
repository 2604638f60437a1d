"""Command line front end.

Subcommands: sim (run a seeded experiment and export curves), fuzz
(fairness-floor fuzzing), oracle-check (episode runner vs. brute-force
oracle), schedules (count and enumerate block schedules), serve (the HTTP
allocation service). Exit codes: 0 success, 1 invariant or check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import build_schedule, count_schedules, enumerate_schedules, make_config
from .envs import EnvSpec, Fixed
from .errors import FairBanditError
from .sim import (
    ExperimentConfig,
    aggregate,
    brute_force_oracle,
    export,
    fairness_fuzz,
    run_episode,
    run_experiment,
)

_POLICY_FLAG_TO_NAME = {"strict": "strict", "stochastic": "stochastic", "ucb": "unconstrained"}
_ENUMERATION_LIMIT = 1000


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairbandit",
        description="Minimum-pull-rate constrained UCB: simulation, checks, and service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("sim", help="run a seeded experiment and export curves")
    sim.add_argument("--policy", required=True, choices=sorted(_POLICY_FLAG_TO_NAME))
    sim.add_argument("--arms", required=True, help="environment JSON file")
    sim.add_argument("--rate", required=True, help="minimum pull rate, e.g. 1/4 or 0")
    sim.add_argument("--horizon", required=True, type=int)
    sim.add_argument("--runs", required=True, type=int)
    sim.add_argument("--seed", type=int, default=None,
                     help="master seed (default: the environment file's seed)")
    sim.add_argument("--slots", default=None, help="comma list of reserved block offsets")
    sim.add_argument("--assign", default=None,
                     help="comma list of arms, one per slot in --slots order")
    sim.add_argument("--out", required=True)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")

    fuzz = sub.add_parser("fuzz", help="fuzz the anytime fairness floor")
    fuzz.add_argument("--trials", type=int, default=100)
    fuzz.add_argument("--seed", type=int, default=0)

    oracle = sub.add_parser("oracle-check",
                            help="compare the episode runner against the brute-force oracle")
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--instances", type=int, default=50)

    schedules = sub.add_parser("schedules", help="count and enumerate block schedules")
    schedules.add_argument("--arms", required=True, type=int)
    schedules.add_argument("--rate", required=True)

    serve = sub.add_parser("serve", help="run the HTTP allocation service")
    serve.add_argument("--host", default=os.environ.get("FAIRBANDIT_HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int,
                       default=int(os.environ.get("FAIRBANDIT_PORT", "8000")))
    serve.add_argument("--default-m", type=float,
                       default=float(os.environ.get("FAIRBANDIT_DEFAULT_M", "300")))
    serve.add_argument("--snapshot-dir",
                       default=os.environ.get("FAIRBANDIT_SNAPSHOT_DIR"))
    return parser


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise FairBanditError(f"{flag} expects a comma list of integers, got {text!r}") from exc


def _cmd_sim(args: argparse.Namespace) -> int:
    with open(args.arms) as fh:
        env = EnvSpec.from_json_dict(json.load(fh))
    config = make_config(env.num_arms, args.rate, args.horizon)

    schedule = None
    if args.slots is not None or args.assign is not None:
        if args.slots is None or args.assign is None:
            raise FairBanditError("--slots and --assign must be given together")
        slots = _parse_int_list(args.slots, "--slots")
        arms = _parse_int_list(args.assign, "--assign")
        if len(slots) != len(arms):
            raise FairBanditError("--slots and --assign must have the same length")
        schedule = build_schedule(config, set(slots), dict(zip(slots, arms)))

    experiment = ExperimentConfig(
        policy=_POLICY_FLAG_TO_NAME[args.policy],
        fairness=config,
        env=env,
        runs=args.runs,
        master_seed=args.seed,
        schedule=schedule,
    )
    traces = run_experiment(experiment)
    stats = aggregate(traces, env)
    export(stats, args.format, args.out)
    print(
        f"wrote {args.out}: {args.runs} runs, horizon {args.horizon}, "
        f"final mean regret {stats.mean_regret[-1]:.6g}"
    )
    return 0


def _cmd_fuzz(args: argparse.Namespace) -> int:
    report = fairness_fuzz(args.trials, args.seed)
    print(report.summary())
    return 0 if report.passed else 1


def _random_oracle_instance(rng: np.random.Generator) -> ExperimentConfig:
    num_arms = int(rng.integers(2, 4))
    block = int(rng.integers(num_arms, 7))
    horizon = int(rng.integers(num_arms, 13))
    values = [float(v) for v in rng.random(num_arms)]
    env = EnvSpec(tuple(Fixed(v) for v in values), seed=int(rng.integers(0, 2**63)))
    config = make_config(num_arms, f"1/{block}", horizon)
    return ExperimentConfig("strict", config, env, runs=1, master_seed=env.seed)


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    for index in range(args.instances):
        experiment = _random_oracle_instance(rng)
        expected = brute_force_oracle(experiment)
        trace = run_episode(experiment, 0)
        actual = [int(a) for a in trace.arms]
        if actual != expected:
            print(
                f"mismatch on instance {index}: oracle {expected} vs episode {actual}\n"
                f"config: {experiment.fairness}, env: {experiment.env.to_json_dict()}"
            )
            return 1
    print(f"oracle and episode runner agree on all {args.instances} instances")
    return 0


def _cmd_schedules(args: argparse.Namespace) -> int:
    # horizon is irrelevant to schedule counting; 1 is the smallest valid value
    config = make_config(args.arms, args.rate, 1)
    total = count_schedules(config)
    print(f"{total} schedules for {args.arms} arms at rate {config.min_rate}")
    if total <= _ENUMERATION_LIMIT:
        for schedule in enumerate_schedules(config):
            assignment = " ".join(
                f"g({slot})={arm}" for slot, arm in sorted(schedule.assignment.items())
            )
            slots = ",".join(str(s) for s in sorted(schedule.slots))
            print(f"S={{{slots}}} {assignment}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(default_m=args.default_m, snapshot_dir=args.snapshot_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sim": _cmd_sim,
        "fuzz": _cmd_fuzz,
        "oracle-check": _cmd_oracle_check,
        "schedules": _cmd_schedules,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (FairBanditError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
