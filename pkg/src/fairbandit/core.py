"""Bandit state, preschedule blocks, and the rate-constrained selection rules.

Both constrained policies share one optimistic index: the arm's empirical
mean plus an exploration bonus of 2*sqrt(ln(horizon) / pulls). The strict
policy guarantees each arm a minimum pull rate by reserving fixed slots
inside consecutive blocks of length 1/min_rate; the stochastic policy
guarantees the rate in expectation by mixing the index argmax with a
uniform draw. A zero min_rate disables the constraint machinery entirely
and both policies reduce to the plain index argmax after the init phase.

Arms are 1-indexed everywhere in the public API, including serialized
JSON shapes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Mapping

import numpy as np

from .errors import (
    ArmNeverPulled,
    ConfigError,
    HorizonExceeded,
    InvalidSlots,
    NonIntegralBlock,
    NotBijective,
    RateTooHigh,
    RewardOutOfRange,
    ZeroArms,
)

Provenance = Literal["init", "prescheduled", "ucb-argmax", "uniform-draw"]

RateLike = Fraction | int | float | str


def parse_rate(value: RateLike) -> Fraction:
    """Coerce a rate given as a Fraction, int, float, or text like "1/4" to an exact Fraction.

    Floats are converted exactly (0.25 -> 1/4); a float that is not an
    exact dyadic representation of 1/d will fail validation later rather
    than being silently rounded.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cannot parse rate {value!r}") from exc
    raise ConfigError(f"cannot parse rate of type {type(value).__name__}")


@dataclass(frozen=True)
class FairnessConfig:
    """Arm count, minimum per-arm pull rate, and horizon for one allocation task.

    min_rate is an exact fraction 1/d (or zero, meaning unconstrained).
    Use validate_config / make_config to enforce the invariants.
    """

    num_arms: int
    min_rate: Fraction
    horizon: int

    @property
    def block_length(self) -> int | None:
        """Length 1/min_rate of one preschedule block, or None when unconstrained."""
        if self.min_rate == 0:
            return None
        return self.min_rate.denominator

    def to_json_dict(self) -> dict:
        return {
            "num_arms": self.num_arms,
            "min_rate": str(self.min_rate),
            "horizon": self.horizon,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FairnessConfig":
        return validate_config(
            cls(int(data["num_arms"]), parse_rate(data["min_rate"]), int(data["horizon"]))
        )


def validate_config(cfg: FairnessConfig) -> FairnessConfig:
    """Check the config invariants and normalize min_rate to lowest terms.

    Raises:
        ZeroArms: num_arms is not a positive integer.
        RateTooHigh: num_arms * min_rate > 1.
        NonIntegralBlock: positive min_rate whose reciprocal is not an integer.
        ConfigError: negative min_rate or nonpositive horizon.
    """
    if not isinstance(cfg.num_arms, int) or cfg.num_arms < 1:
        raise ZeroArms(f"num_arms must be a positive integer, got {cfg.num_arms!r}")
    if not isinstance(cfg.horizon, int) or cfg.horizon < 1:
        raise ConfigError(f"horizon must be a positive integer, got {cfg.horizon!r}")
    rate = Fraction(cfg.min_rate)
    if rate < 0:
        raise ConfigError(f"min_rate must be nonnegative, got {rate}")
    if rate > 0:
        if cfg.num_arms * rate > 1:
            raise RateTooHigh(
                f"num_arms * min_rate = {cfg.num_arms * rate} exceeds 1 "
                f"(num_arms={cfg.num_arms}, min_rate={rate})"
            )
        if rate.numerator != 1:
            raise NonIntegralBlock(
                f"1/min_rate must be an integer block length, got min_rate={rate}"
            )
    return FairnessConfig(cfg.num_arms, rate, cfg.horizon)


def make_config(num_arms: int, min_rate: RateLike, horizon: int) -> FairnessConfig:
    """Build and validate a FairnessConfig, accepting any rate-like min_rate."""
    return validate_config(FairnessConfig(num_arms, parse_rate(min_rate), horizon))


@dataclass(frozen=True)
class Schedule:
    """Reserved slot offsets inside each block, and the arm each one is pinned to.

    Blocks of block_length steps start at first_block_start (always
    num_arms + 1) and repeat back to back. Offsets are 1-based positions
    within a block; assignment maps each reserved offset to its arm and is
    a bijection onto 1..num_arms.
    """

    block_length: int
    slots: frozenset[int]
    assignment: Mapping[int, int]
    first_block_start: int

    @property
    def num_arms(self) -> int:
        return len(self.slots)

    def block_start(self, block_index: int) -> int:
        """1-based step at which block j >= 1 begins."""
        return self.first_block_start + (block_index - 1) * self.block_length

    def pinned_arm(self, step: int) -> int | None:
        """Arm reserved at a 1-based step, or None when the step is free or pre-block."""
        if step < self.first_block_start:
            return None
        offset = (step - self.first_block_start) % self.block_length + 1
        return self.assignment.get(offset)

    def to_json_dict(self) -> dict:
        return {
            "block_length": self.block_length,
            "slots": sorted(self.slots),
            "assignment": {str(slot): arm for slot, arm in sorted(self.assignment.items())},
            "first_block_start": self.first_block_start,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Schedule":
        assignment = {int(k): int(v) for k, v in data["assignment"].items()}
        return cls(
            block_length=int(data["block_length"]),
            slots=frozenset(int(s) for s in data["slots"]),
            assignment=assignment,
            first_block_start=int(data["first_block_start"]),
        )


def build_schedule(
    cfg: FairnessConfig,
    slots: set[int] | frozenset[int] | None = None,
    assignment: Mapping[int, int] | None = None,
) -> Schedule:
    """Build a preschedule for a validated config with positive min_rate.

    When slots and assignment are omitted, reserves evenly spaced offsets
    {1 + m * floor(block_length / num_arms)} and assigns them to arms
    1..num_arms in ascending offset order. For num_arms=2, min_rate=1/4
    this yields offsets {1, 3} pinned to arms 1 and 2.

    Raises:
        ConfigError: min_rate is zero (no blocks exist).
        InvalidSlots: wrong slot count or out-of-range offsets.
        NotBijective: assignment is not a bijection from slots onto the arms.
    """
    cfg = validate_config(cfg)
    block_length = cfg.block_length
    if block_length is None:
        raise ConfigError("cannot build a schedule for min_rate = 0")
    num_arms = cfg.num_arms

    if slots is None and assignment is not None:
        slots = set(assignment.keys())
    if slots is None:
        spacing = block_length // num_arms
        slots = {1 + m * spacing for m in range(num_arms)}
    slot_set = frozenset(int(s) for s in slots)
    if len(slot_set) != num_arms:
        raise InvalidSlots(
            f"need exactly {num_arms} distinct slots, got {sorted(slot_set)}"
        )
    if any(s < 1 or s > block_length for s in slot_set):
        raise InvalidSlots(
            f"slots must lie in [1, {block_length}], got {sorted(slot_set)}"
        )

    if assignment is None:
        mapping = {slot: arm for arm, slot in enumerate(sorted(slot_set), start=1)}
    else:
        mapping = {int(k): int(v) for k, v in assignment.items()}
    if set(mapping.keys()) != set(slot_set) or sorted(mapping.values()) != list(
        range(1, num_arms + 1)
    ):
        raise NotBijective(
            f"assignment must map the slots one-to-one onto arms 1..{num_arms}, got {mapping}"
        )
    return Schedule(
        block_length=block_length,
        slots=slot_set,
        assignment=mapping,
        first_block_start=num_arms + 1,
    )


def count_schedules(cfg: FairnessConfig) -> int:
    """Number of distinct (slots, assignment) choices: d!/(d-K)! with d = 1/min_rate.

    Python integers are arbitrary precision, so the count cannot overflow.
    """
    cfg = validate_config(cfg)
    if cfg.block_length is None:
        raise ConfigError("schedule counting requires a positive min_rate")
    return math.perm(cfg.block_length, cfg.num_arms)


def enumerate_schedules(cfg: FairnessConfig) -> Iterator[Schedule]:
    """Yield every valid Schedule, ordered by the slot tuple assigned to arms 1..K."""
    cfg = validate_config(cfg)
    block_length = cfg.block_length
    if block_length is None:
        raise ConfigError("schedule enumeration requires a positive min_rate")
    for ordered_slots in itertools.permutations(range(1, block_length + 1), cfg.num_arms):
        mapping = {slot: arm for arm, slot in enumerate(ordered_slots, start=1)}
        yield Schedule(
            block_length=block_length,
            slots=frozenset(ordered_slots),
            assignment=mapping,
            first_block_start=cfg.num_arms + 1,
        )


@dataclass(frozen=True)
class Decision:
    """One selection: the pulled arm, why it was pulled, and the index argmax at that step.

    ucb_argmax_arm is recorded for every post-init step even when a
    different arm was pulled; it is None during the init phase, where the
    index is undefined.
    """

    arm: int
    provenance: Provenance
    ucb_argmax_arm: int | None = None

    def to_json_dict(self) -> dict:
        return {
            "arm": self.arm,
            "provenance": self.provenance,
            "ucb_argmax_arm": self.ucb_argmax_arm,
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Decision":
        argmax = data.get("ucb_argmax_arm")
        return cls(
            arm=int(data["arm"]),
            provenance=str(data["provenance"]),
            ucb_argmax_arm=None if argmax is None else int(argmax),
        )


@dataclass
class BanditState:
    """Per-arm pull counts and reward sums plus the global step clock.

    Arms are 1-indexed in every public signature; internally the lists are
    positional (arm i lives at index i-1). nonprescheduled_pull_count
    tracks pulls whose provenance was the index argmax, the quantity the
    strict regret definition sums over.
    """

    num_arms: int
    clock: int
    pull_count: list[int]
    reward_sum: list[float]
    nonprescheduled_pull_count: list[int]

    @classmethod
    def fresh(cls, num_arms: int) -> "BanditState":
        return cls(
            num_arms=num_arms,
            clock=0,
            pull_count=[0] * num_arms,
            reward_sum=[0.0] * num_arms,
            nonprescheduled_pull_count=[0] * num_arms,
        )

    def pulls(self, arm: int) -> int:
        return self.pull_count[arm - 1]

    def empirical_mean(self, arm: int) -> float:
        n = self.pull_count[arm - 1]
        if n == 0:
            raise ArmNeverPulled(f"arm {arm} has no pulls yet")
        return self.reward_sum[arm - 1] / n

    def copy(self) -> "BanditState":
        return BanditState(
            self.num_arms,
            self.clock,
            list(self.pull_count),
            list(self.reward_sum),
            list(self.nonprescheduled_pull_count),
        )

    def to_json_dict(self) -> dict:
        return {
            "clock": self.clock,
            "arms": [
                {
                    "arm": i + 1,
                    "pull_count": self.pull_count[i],
                    "reward_sum": self.reward_sum[i],
                    "nonprescheduled_pull_count": self.nonprescheduled_pull_count[i],
                }
                for i in range(self.num_arms)
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "BanditState":
        arms = sorted(data["arms"], key=lambda entry: int(entry["arm"]))
        state = cls(
            num_arms=len(arms),
            clock=int(data["clock"]),
            pull_count=[int(a["pull_count"]) for a in arms],
            reward_sum=[float(a["reward_sum"]) for a in arms],
            nonprescheduled_pull_count=[
                int(a["nonprescheduled_pull_count"]) for a in arms
            ],
        )
        if sum(state.pull_count) != state.clock:
            raise ConfigError("pull counts do not sum to the clock")
        return state


@dataclass(frozen=True)
class MixtureDistribution:
    """Per-arm pull probabilities for one step of the stochastic policy."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(p < 0 for p in self.probs):
            raise ConfigError(f"mixture has a negative entry: {self.probs}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > 1e-12:
            raise ConfigError(f"mixture sums to {total!r}, not 1")

    def prob(self, arm: int) -> float:
        return self.probs[arm - 1]


def ucb_index(state: BanditState, arm: int, horizon: int) -> float:
    """Optimistic index: empirical mean plus 2*sqrt(ln(horizon) / pulls).

    Raises ArmNeverPulled when the arm has zero pulls.
    """
    n = state.pull_count[arm - 1]
    if n == 0:
        raise ArmNeverPulled(f"arm {arm} has no pulls yet")
    return state.reward_sum[arm - 1] / n + 2.0 * math.sqrt(math.log(horizon) / n)


def argmax_lowest_index(values) -> int:
    """1-based position of the largest value; ties break to the lowest position."""
    best_pos = 0
    best_value = -math.inf
    for pos, value in enumerate(values, start=1):
        if value > best_value:
            best_value = value
            best_pos = pos
    return best_pos


def ucb_argmax(state: BanditState, horizon: int) -> int:
    """Arm with the largest index; ties break to the lowest arm id."""
    log_horizon = math.log(horizon)
    best_arm = 0
    best_value = -math.inf
    pull_count = state.pull_count
    reward_sum = state.reward_sum
    for i in range(state.num_arms):
        n = pull_count[i]
        if n == 0:
            raise ArmNeverPulled(f"arm {i + 1} has no pulls yet")
        value = reward_sum[i] / n + 2.0 * math.sqrt(log_horizon / n)
        if value > best_value:
            best_value = value
            best_arm = i + 1
    return best_arm


def _init_decision(state: BanditState, cfg: FairnessConfig) -> Decision | None:
    if state.clock >= cfg.horizon:
        raise HorizonExceeded(
            f"clock {state.clock} already reached horizon {cfg.horizon}"
        )
    step = state.clock + 1
    if step <= cfg.num_arms:
        return Decision(arm=step, provenance="init", ucb_argmax_arm=None)
    return None


def select_unconstrained(state: BanditState, cfg: FairnessConfig) -> Decision:
    """Baseline rule: pull each arm once, then always pull the index argmax."""
    decision = _init_decision(state, cfg)
    if decision is not None:
        return decision
    best = ucb_argmax(state, cfg.horizon)
    return Decision(arm=best, provenance="ucb-argmax", ucb_argmax_arm=best)


def select_strict(
    state: BanditState, schedule: Schedule | None, cfg: FairnessConfig
) -> Decision:
    """Deterministic rate-constrained rule.

    After the init phase, steps walk through consecutive blocks of
    schedule.block_length steps; reserved offsets pull their pinned arm,
    every other step pulls the index argmax (lowest arm id on ties). With
    min_rate = 0 (schedule None) this is exactly the unconstrained rule.

    Raises HorizonExceeded once the clock has reached the horizon.
    """
    if schedule is None:
        if cfg.min_rate != 0:
            raise ConfigError("a schedule is required when min_rate > 0")
        return select_unconstrained(state, cfg)
    if schedule.block_length != cfg.block_length:
        raise ConfigError(
            f"schedule block length {schedule.block_length} does not match "
            f"1/min_rate = {cfg.block_length}"
        )
    decision = _init_decision(state, cfg)
    if decision is not None:
        return decision
    step = state.clock + 1
    offset = (step - schedule.first_block_start) % schedule.block_length + 1
    best = ucb_argmax(state, cfg.horizon)
    pinned = schedule.assignment.get(offset)
    if pinned is not None:
        return Decision(arm=pinned, provenance="prescheduled", ucb_argmax_arm=best)
    return Decision(arm=best, provenance="ucb-argmax", ucb_argmax_arm=best)


def select_stochastic(
    state: BanditState, cfg: FairnessConfig, rng: np.random.Generator
) -> Decision:
    """Randomized rate-constrained rule.

    After the init phase, pulls the index argmax with probability
    1 - num_arms*min_rate and otherwise an arm drawn uniformly from all
    arms, which gives every arm at least min_rate probability each step.
    Deterministic given the rng state.
    """
    decision = _init_decision(state, cfg)
    if decision is not None:
        return decision
    best = ucb_argmax(state, cfg.horizon)
    exploit_prob = float(1 - cfg.num_arms * cfg.min_rate)
    if rng.random() < exploit_prob:
        return Decision(arm=best, provenance="ucb-argmax", ucb_argmax_arm=best)
    arm = int(rng.integers(1, cfg.num_arms + 1))
    return Decision(arm=arm, provenance="uniform-draw", ucb_argmax_arm=best)


def mixture_of(state: BanditState, cfg: FairnessConfig) -> MixtureDistribution:
    """Per-step arm distribution induced by the stochastic rule at this state.

    The index argmax carries mass (1 - K*v) + v and every other arm mass v,
    so each arm always has mass at least v. Requires every arm pulled once.
    """
    best = ucb_argmax(state, cfg.horizon)
    rate = cfg.min_rate
    argmax_mass = float(1 - (cfg.num_arms - 1) * rate)
    probs = [float(rate)] * cfg.num_arms
    probs[best - 1] = argmax_mass
    return MixtureDistribution(tuple(probs))


def update(state: BanditState, decision: Decision, reward: float) -> BanditState:
    """Record one observed reward: advances the clock and the pulled arm's counters.

    Pulls with ucb-argmax provenance also advance the arm's
    nonprescheduled count. Mutates state in place and returns it.

    Raises RewardOutOfRange unless 0 <= reward <= 1.
    """
    if not 0.0 <= reward <= 1.0:
        raise RewardOutOfRange(f"reward {reward!r} outside [0, 1]")
    i = decision.arm - 1
    state.clock += 1
    state.pull_count[i] += 1
    state.reward_sum[i] += reward
    if decision.provenance == "ucb-argmax":
        state.nonprescheduled_pull_count[i] += 1
    return state


def min_pull_lower_bound(t: int, cfg: FairnessConfig) -> int:
    """Guaranteed per-arm pull count after t steps of the strict policy.

    Zero before the init phase completes; afterwards each completed block
    adds one reserved pull per arm on top of the init pull, giving
    floor((t - K) * min_rate) + 1.
    """
    if cfg.min_rate <= 0:
        raise ConfigError("the pull floor requires a positive min_rate")
    if t < cfg.num_arms:
        return 0
    return (t - cfg.num_arms) // cfg.min_rate.denominator + 1
