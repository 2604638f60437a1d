"""Monte-Carlo experiment harness: seeded episodes, regret accounting, fuzzing, export.

Episodes draw from two independent streams derived from
(master_seed, episode_index), one for environment rewards and one for
policy randomness, so the same seed replays bit-identically and policies
that consume no randomness leave the reward stream untouched.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .core import (
    BanditState,
    Decision,
    FairnessConfig,
    Schedule,
    build_schedule,
    select_stochastic,
    select_strict,
    select_unconstrained,
    update,
    validate_config,
)
from .envs import EnvSpec, Fixed, gap_vector, mean_vector, sample_reward
from .errors import (
    ConfigError,
    EmptyInput,
    HorizonTooLarge,
    WrongPolicy,
)
from .policies import POLICY_NAMES

_CODE_INIT = 0
_CODE_PRESCHEDULED = 1
_CODE_UCB_ARGMAX = 2
_CODE_UNIFORM_DRAW = 3

PROV_TO_CODE = {
    "init": _CODE_INIT,
    "prescheduled": _CODE_PRESCHEDULED,
    "ucb-argmax": _CODE_UCB_ARGMAX,
    "uniform-draw": _CODE_UNIFORM_DRAW,
}
CODE_TO_PROV = {code: name for name, code in PROV_TO_CODE.items()}


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: a policy, its fairness config, an environment, and seeds.

    master_seed defaults to the environment's seed when omitted.
    """

    policy: str
    fairness: FairnessConfig
    env: EnvSpec
    runs: int = 1
    master_seed: int | None = None
    schedule: Schedule | None = None

    def resolved_seed(self) -> int:
        return self.env.seed if self.master_seed is None else self.master_seed


def validate_experiment(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.policy not in POLICY_NAMES:
        raise ConfigError(
            f"unknown policy {cfg.policy!r}; expected one of {POLICY_NAMES}"
        )
    fairness = validate_config(cfg.fairness)
    if cfg.env.num_arms != fairness.num_arms:
        raise ConfigError(
            f"environment has {cfg.env.num_arms} arms but the config expects "
            f"{fairness.num_arms}"
        )
    if cfg.runs < 1:
        raise ConfigError(f"runs must be positive, got {cfg.runs}")
    schedule = cfg.schedule
    if schedule is not None:
        if cfg.policy != "strict":
            raise ConfigError("a schedule override only applies to the strict policy")
        # revalidates slot bounds and bijectivity against the fairness config
        schedule = build_schedule(fairness, schedule.slots, schedule.assignment)
    return ExperimentConfig(
        cfg.policy, fairness, cfg.env, cfg.runs, cfg.master_seed, schedule
    )


@dataclass
class RunTrace:
    """Full record of one simulated episode, stored as parallel per-step arrays.

    Step t (1-based) lives at array index t-1. provenance holds the codes
    in PROV_TO_CODE; ucb_argmax holds 0 for init steps where the index is
    undefined.
    """

    policy: str
    config: FairnessConfig
    schedule: Schedule | None
    arms: np.ndarray
    rewards: np.ndarray
    provenance: np.ndarray
    ucb_argmax: np.ndarray
    final_pull_count: list[int]
    final_nonprescheduled_pull_count: list[int]

    @property
    def horizon(self) -> int:
        return len(self.arms)

    def decision(self, step: int) -> Decision:
        i = step - 1
        argmax = int(self.ucb_argmax[i])
        return Decision(
            arm=int(self.arms[i]),
            provenance=CODE_TO_PROV[int(self.provenance[i])],
            ucb_argmax_arm=argmax if argmax > 0 else None,
        )

    def decisions(self) -> Iterator[Decision]:
        for step in range(1, self.horizon + 1):
            yield self.decision(step)

    def slot_class(self, step: int) -> str:
        code = int(self.provenance[step - 1])
        if code == _CODE_INIT:
            return "init"
        if code == _CODE_PRESCHEDULED:
            return "prescheduled"
        return "free"


def episode_streams(
    master_seed: int, episode_index: int
) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (environment, policy) generators for one episode."""
    root = np.random.SeedSequence((int(master_seed), int(episode_index)))
    env_ss, policy_ss = root.spawn(2)
    return np.random.default_rng(env_ss), np.random.default_rng(policy_ss)


def run_episode(cfg: ExperimentConfig, episode_index: int) -> RunTrace:
    """Simulate one full horizon, logging every step."""
    cfg = validate_experiment(cfg)
    fairness = cfg.fairness
    env = cfg.env
    env_rng, pol_rng = episode_streams(cfg.resolved_seed(), episode_index)

    schedule = cfg.schedule
    if cfg.policy == "strict" and fairness.min_rate > 0 and schedule is None:
        schedule = build_schedule(fairness)
    if cfg.policy != "strict":
        schedule = None

    state = BanditState.fresh(fairness.num_arms)
    horizon = fairness.horizon
    arms = np.empty(horizon, dtype=np.int32)
    rewards = np.empty(horizon, dtype=np.float64)
    provenance = np.empty(horizon, dtype=np.int8)
    argmax_arms = np.zeros(horizon, dtype=np.int32)

    if cfg.policy == "strict":
        def pick() -> Decision:
            return select_strict(state, schedule, fairness)
    elif cfg.policy == "stochastic":
        def pick() -> Decision:
            return select_stochastic(state, fairness, pol_rng)
    else:
        def pick() -> Decision:
            return select_unconstrained(state, fairness)

    prov_codes = PROV_TO_CODE
    for i in range(horizon):
        decision = pick()
        reward = sample_reward(env, decision.arm, env_rng)
        update(state, decision, reward)
        arms[i] = decision.arm
        rewards[i] = reward
        provenance[i] = prov_codes[decision.provenance]
        if decision.ucb_argmax_arm is not None:
            argmax_arms[i] = decision.ucb_argmax_arm

    return RunTrace(
        policy=cfg.policy,
        config=fairness,
        schedule=schedule,
        arms=arms,
        rewards=rewards,
        provenance=provenance,
        ucb_argmax=argmax_arms,
        final_pull_count=list(state.pull_count),
        final_nonprescheduled_pull_count=list(state.nonprescheduled_pull_count),
    )


def run_experiment(cfg: ExperimentConfig) -> list[RunTrace]:
    """Run all episodes sequentially; episode i uses the (seed, i) derived streams."""
    cfg = validate_experiment(cfg)
    return [run_episode(cfg, i) for i in range(cfg.runs)]


def _free_mask(trace: RunTrace) -> np.ndarray:
    return trace.provenance >= _CODE_UCB_ARGMAX


def strict_regret_curve(trace: RunTrace, env: EnvSpec) -> np.ndarray:
    """Cumulative pseudo-regret over free slots: sum of true gaps of the pulled arms.

    Init and prescheduled steps contribute zero. Valid for strict and
    unconstrained traces; raises WrongPolicy for stochastic ones.
    """
    if trace.policy == "stochastic":
        raise WrongPolicy("strict regret accounting needs a strict or unconstrained trace")
    gaps = np.asarray(gap_vector(env))
    increments = np.where(_free_mask(trace), gaps[trace.arms - 1], 0.0)
    return np.cumsum(increments)


def strict_regret(trace: RunTrace, env: EnvSpec) -> float:
    return float(strict_regret_curve(trace, env)[-1])


def stochastic_regret_curve(
    trace: RunTrace, env: EnvSpec, cfg: FairnessConfig | None = None
) -> np.ndarray:
    """Cumulative distributional pseudo-regret of a stochastic trace.

    Each post-init step contributes (1 - K*v) times the true gap of the
    recorded index argmax, the exact difference between the benchmark
    mixture (argmax slot replaced by the true best arm) and the played one.
    """
    if trace.policy != "stochastic":
        raise WrongPolicy("stochastic regret accounting needs a stochastic trace")
    if cfg is None:
        cfg = trace.config
    coefficient = float(1 - cfg.num_arms * cfg.min_rate)
    gaps = np.asarray(gap_vector(env))
    post_init = trace.provenance != _CODE_INIT
    argmax_index = np.maximum(trace.ucb_argmax, 1) - 1
    increments = np.where(post_init, coefficient * gaps[argmax_index], 0.0)
    return np.cumsum(increments)


def stochastic_regret(
    trace: RunTrace, env: EnvSpec, cfg: FairnessConfig | None = None
) -> float:
    return float(stochastic_regret_curve(trace, env, cfg)[-1])


def realized_strict_regret_curve(trace: RunTrace, env: EnvSpec) -> np.ndarray:
    """Cumulative best-mean-minus-observed-reward over free slots."""
    if trace.policy == "stochastic":
        raise WrongPolicy("strict regret accounting needs a strict or unconstrained trace")
    best = max(mean_vector(env))
    increments = np.where(_free_mask(trace), best - trace.rewards, 0.0)
    return np.cumsum(increments)


def realized_stochastic_regret_curve(
    trace: RunTrace, env: EnvSpec, cfg: FairnessConfig | None = None
) -> np.ndarray:
    """Cumulative benchmark-mixture mean minus observed reward over post-init steps."""
    if trace.policy != "stochastic":
        raise WrongPolicy("stochastic regret accounting needs a stochastic trace")
    if cfg is None:
        cfg = trace.config
    means = mean_vector(env)
    rate = float(cfg.min_rate)
    benchmark = float(1 - cfg.num_arms * cfg.min_rate) * max(means) + rate * sum(means)
    post_init = trace.provenance != _CODE_INIT
    increments = np.where(post_init, benchmark - trace.rewards, 0.0)
    return np.cumsum(increments)


def pseudo_regret_curve(trace: RunTrace, env: EnvSpec) -> np.ndarray:
    """Policy-appropriate cumulative pseudo-regret curve."""
    if trace.policy == "stochastic":
        return stochastic_regret_curve(trace, env)
    return strict_regret_curve(trace, env)


@dataclass(frozen=True)
class RegretReport:
    """Both regret accountings for one trace; fields for the other policy stay None."""

    policy: str
    strict_pseudo_regret: float | None
    strict_realized_regret: float | None
    stochastic_pseudo_regret: float | None
    stochastic_realized_regret: float | None
    cumulative_pseudo: np.ndarray
    cumulative_realized: np.ndarray


def regret_report(trace: RunTrace, env: EnvSpec) -> RegretReport:
    if trace.policy == "stochastic":
        pseudo = stochastic_regret_curve(trace, env)
        realized = realized_stochastic_regret_curve(trace, env)
        return RegretReport(
            policy=trace.policy,
            strict_pseudo_regret=None,
            strict_realized_regret=None,
            stochastic_pseudo_regret=float(pseudo[-1]),
            stochastic_realized_regret=float(realized[-1]),
            cumulative_pseudo=pseudo,
            cumulative_realized=realized,
        )
    pseudo = strict_regret_curve(trace, env)
    realized = realized_strict_regret_curve(trace, env)
    return RegretReport(
        policy=trace.policy,
        strict_pseudo_regret=float(pseudo[-1]),
        strict_realized_regret=float(realized[-1]),
        stochastic_pseudo_regret=None,
        stochastic_realized_regret=None,
        cumulative_pseudo=pseudo,
        cumulative_realized=realized,
    )


@dataclass
class AggregateStats:
    """Across-run summary curves, indexed by step t = 1..horizon."""

    horizon: int
    num_arms: int
    runs: int
    mean_regret: np.ndarray
    stderr: np.ndarray
    pull_fraction: np.ndarray  # (horizon, num_arms), mean over runs
    min_pull_count: np.ndarray  # (horizon, num_arms), min over runs


def aggregate(traces: Sequence[RunTrace], env: EnvSpec) -> AggregateStats:
    """Mean/stderr cumulative pseudo-regret, mean pull fractions, min pull counts.

    Raises EmptyInput for an empty trace list and ConfigError when the
    traces do not share one policy, horizon, and arm count.
    """
    if len(traces) == 0:
        raise EmptyInput("aggregate needs at least one trace")
    first = traces[0]
    horizon, num_arms = first.horizon, first.config.num_arms
    for trace in traces:
        if (
            trace.policy != first.policy
            or trace.horizon != horizon
            or trace.config.num_arms != num_arms
        ):
            raise ConfigError("aggregate needs traces from one homogeneous config")

    curves = np.stack([pseudo_regret_curve(trace, env) for trace in traces])
    runs = len(traces)
    mean_regret = curves.mean(axis=0)
    if runs > 1:
        stderr = curves.std(axis=0, ddof=1) / math.sqrt(runs)
    else:
        stderr = np.zeros(horizon)

    steps = np.arange(1, horizon + 1, dtype=np.float64)[:, None]
    arm_ids = np.arange(1, num_arms + 1, dtype=np.int32)[None, :]
    fraction_sum = np.zeros((horizon, num_arms))
    min_counts = np.full((horizon, num_arms), np.iinfo(np.int64).max, dtype=np.int64)
    for trace in traces:
        cum_counts = np.cumsum(trace.arms[:, None] == arm_ids, axis=0)
        fraction_sum += cum_counts / steps
        np.minimum(min_counts, cum_counts, out=min_counts)

    return AggregateStats(
        horizon=horizon,
        num_arms=num_arms,
        runs=runs,
        mean_regret=mean_regret,
        stderr=stderr,
        pull_fraction=fraction_sum / runs,
        min_pull_count=min_counts,
    )


def _format_float(x: float) -> str:
    return repr(float(x))


def export(stats: AggregateStats, format: str, path: str) -> None:
    """Write the aggregate curves to CSV or JSON.

    Columns are t, mean_regret, stderr, pull_fraction_1..K; floats are
    written with full repr precision so a re-parse reproduces them exactly.
    IO errors propagate as OSError.
    """
    if format == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["t", "mean_regret", "stderr"] + [
                f"pull_fraction_{arm}" for arm in range(1, stats.num_arms + 1)
            ]
            writer.writerow(header)
            for i in range(stats.horizon):
                row = [str(i + 1), _format_float(stats.mean_regret[i]),
                       _format_float(stats.stderr[i])]
                row += [_format_float(stats.pull_fraction[i, a])
                        for a in range(stats.num_arms)]
                writer.writerow(row)
    elif format == "json":
        payload: dict = {
            "t": list(range(1, stats.horizon + 1)),
            "mean_regret": [float(x) for x in stats.mean_regret],
            "stderr": [float(x) for x in stats.stderr],
        }
        for arm in range(1, stats.num_arms + 1):
            payload[f"pull_fraction_{arm}"] = [
                float(x) for x in stats.pull_fraction[:, arm - 1]
            ]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown export format {format!r}; expected csv or json")


def load_exported(path: str, format: str | None = None) -> dict[str, list[float]]:
    """Re-parse an exported file into column lists (for round-trip checks)."""
    if format is None:
        format = "json" if str(path).endswith(".json") else "csv"
    if format == "json":
        with open(path) as fh:
            return json.load(fh)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        columns: dict[str, list[float]] = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                columns[name].append(int(cell) if name == "t" else float(cell))
    return columns


@dataclass(frozen=True)
class FloorViolation:
    """First step at which an arm fell below the guaranteed pull floor."""

    trial: int
    num_arms: int
    min_rate: str
    horizon: int
    master_seed: int
    step: int
    arm: int
    pull_count: int
    required: int

    def __str__(self) -> str:
        return (
            f"trial {self.trial}: K={self.num_arms} v={self.min_rate} "
            f"T={self.horizon} seed={self.master_seed}: arm {self.arm} had "
            f"{self.pull_count} pulls at t={self.step}, floor requires {self.required}"
        )


@dataclass
class FuzzReport:
    """Outcome of a fairness-floor fuzz run; failures are contents, not errors."""

    trials: int
    violations: list[FloorViolation]

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        if self.passed:
            return f"fairness floor held in all {self.trials} trials"
        lines = [
            f"fairness floor violated in {len(self.violations)} of {self.trials} trials"
        ]
        lines += [str(v) for v in self.violations[:10]]
        return "\n".join(lines)


def check_fairness_floor(
    trace: RunTrace, trial: int = 0, master_seed: int = 0
) -> FloorViolation | None:
    """First (t, arm) where the trace's pull counts fall below the guaranteed floor."""
    cfg = trace.config
    if cfg.min_rate <= 0:
        raise ConfigError("the pull floor requires a positive min_rate")
    horizon, num_arms = trace.horizon, cfg.num_arms
    block = cfg.min_rate.denominator
    steps = np.arange(1, horizon + 1)
    bound = np.where(steps >= num_arms, (steps - num_arms) // block + 1, 0)
    arm_ids = np.arange(1, num_arms + 1, dtype=np.int32)[None, :]
    cum_counts = np.cumsum(trace.arms[:, None] == arm_ids, axis=0)
    short = cum_counts < bound[:, None]
    if not short.any():
        return None
    t_index, arm_index = np.argwhere(short)[0]
    return FloorViolation(
        trial=trial,
        num_arms=num_arms,
        min_rate=str(cfg.min_rate),
        horizon=horizon,
        master_seed=master_seed,
        step=int(t_index) + 1,
        arm=int(arm_index) + 1,
        pull_count=int(cum_counts[t_index, arm_index]),
        required=int(bound[t_index]),
    )


def fairness_fuzz(trials: int, seed: int) -> FuzzReport:
    """Run the strict policy on random valid configs and check the anytime floor.

    Samples K in [2,5], block length in [K,12], horizon in [K,5000], and
    Bernoulli means uniform in [0,1].
    """
    from .envs import Bernoulli  # local import keeps module load light

    rng = np.random.default_rng(seed)
    violations: list[FloorViolation] = []
    for trial in range(trials):
        num_arms = int(rng.integers(2, 6))
        block = int(rng.integers(num_arms, 13))
        horizon = int(rng.integers(num_arms, 5001))
        means = rng.random(num_arms)
        master_seed = int(rng.integers(0, 2**63))
        fairness = FairnessConfig(num_arms, Fraction(1, block), horizon)
        env = EnvSpec(tuple(Bernoulli(float(p)) for p in means), seed=master_seed)
        cfg = ExperimentConfig("strict", fairness, env, runs=1, master_seed=master_seed)
        trace = run_episode(cfg, 0)
        violation = check_fairness_floor(trace, trial=trial, master_seed=master_seed)
        if violation is not None:
            violations.append(violation)
    return FuzzReport(trials=trials, violations=violations)


ORACLE_MAX_HORIZON = 12


def brute_force_oracle(cfg: ExperimentConfig) -> list[int]:
    """Strict-policy decision sequence by naive re-evaluation, for cross-checks.

    Rebuilds the reserved-step table block by block and recomputes every
    index from the raw reward history at every step, with no incremental
    state. Only fixed-value rewards and horizons up to 12 are supported.
    """
    cfg = validate_experiment(cfg)
    if cfg.policy == "stochastic":
        raise WrongPolicy("the oracle replays the deterministic rule only")
    fairness = cfg.fairness
    horizon = fairness.horizon
    if horizon > ORACLE_MAX_HORIZON:
        raise HorizonTooLarge(
            f"oracle horizon limit is {ORACLE_MAX_HORIZON}, got {horizon}"
        )
    if not all(isinstance(arm, Fixed) for arm in cfg.env.arms):
        raise ConfigError("the oracle needs fixed-value reward distributions")

    num_arms = fairness.num_arms
    reserved: dict[int, int] = {}
    if cfg.policy == "strict" and fairness.min_rate > 0:
        schedule = cfg.schedule or build_schedule(fairness)
        block_index = 1
        while True:
            block_start = num_arms + 1 + (block_index - 1) * schedule.block_length
            if block_start > horizon:
                break
            for offset, arm in schedule.assignment.items():
                step = block_start + offset - 1
                if step <= horizon:
                    reserved[step] = arm
            block_index += 1

    rewards = [arm.expected_value() for arm in cfg.env.arms]  # Fixed: the clamped value
    history: list[tuple[int, float]] = []
    sequence: list[int] = []
    log_horizon = math.log(horizon)
    for step in range(1, horizon + 1):
        if step <= num_arms:
            arm = step
        elif step in reserved:
            arm = reserved[step]
        else:
            best_arm = 0
            best_value = -math.inf
            for candidate in range(1, num_arms + 1):
                observed = [r for (a, r) in history if a == candidate]
                value = sum(observed) / len(observed) + 2.0 * math.sqrt(
                    log_horizon / len(observed)
                )
                if value > best_value:
                    best_value = value
                    best_arm = candidate
            arm = best_arm
        history.append((arm, rewards[arm - 1]))
        sequence.append(arm)
    return sequence
