"""Stateful policy objects bundling config, schedule, state, and randomness.

These wrap the pure selection functions in core for callers that drive a
single episode (the service, the harness, interactive use). Constructor
arguments are stored verbatim and exposed via get_params(), estimator
style, so a policy can be rebuilt from its parameters.
"""

from __future__ import annotations

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
from .errors import ConfigError

POLICY_NAMES = ("strict", "stochastic", "unconstrained")


def policy_rng(seed: int | None) -> np.random.Generator:
    """The documented generator construction shared by the service and direct drives."""
    return np.random.default_rng(seed)


class UnconstrainedUCB:
    """Plain optimistic-index policy: init round then always the argmax."""

    name = "unconstrained"

    def __init__(self, config: FairnessConfig):
        self.config = validate_config(config)
        self.state = BanditState.fresh(self.config.num_arms)

    def get_params(self) -> dict:
        return {"config": self.config}

    def reset(self) -> None:
        self.state = BanditState.fresh(self.config.num_arms)

    def select(self) -> Decision:
        return select_unconstrained(self.state, self.config)

    def update(self, decision: Decision, reward: float) -> None:
        update(self.state, decision, reward)


class StrictRateUCB:
    """Deterministic rate-constrained policy over a fixed block schedule.

    With a zero min_rate no schedule exists and the policy is the
    unconstrained rule.
    """

    name = "strict"

    def __init__(self, config: FairnessConfig, schedule: Schedule | None = None):
        self.config = validate_config(config)
        if schedule is None and self.config.min_rate > 0:
            schedule = build_schedule(self.config)
        if schedule is not None and self.config.min_rate == 0:
            raise ConfigError("a schedule is meaningless when min_rate = 0")
        self.schedule = schedule
        self.state = BanditState.fresh(self.config.num_arms)

    def get_params(self) -> dict:
        return {"config": self.config, "schedule": self.schedule}

    def reset(self) -> None:
        self.state = BanditState.fresh(self.config.num_arms)

    def select(self) -> Decision:
        return select_strict(self.state, self.schedule, self.config)

    def update(self, decision: Decision, reward: float) -> None:
        update(self.state, decision, reward)


class StochasticRateUCB:
    """Randomized rate-constrained policy; decisions are a function of the seed."""

    name = "stochastic"

    def __init__(
        self,
        config: FairnessConfig,
        seed: int | None = None,
        rng: np.random.Generator | None = None,
    ):
        self.config = validate_config(config)
        self.seed = seed
        self.rng = rng if rng is not None else policy_rng(seed)
        self.state = BanditState.fresh(self.config.num_arms)

    def get_params(self) -> dict:
        return {"config": self.config, "seed": self.seed}

    def reset(self) -> None:
        # Reseeding is only meaningful when the policy owns its generator.
        self.rng = policy_rng(self.seed)
        self.state = BanditState.fresh(self.config.num_arms)

    def select(self) -> Decision:
        return select_stochastic(self.state, self.config, self.rng)

    def update(self, decision: Decision, reward: float) -> None:
        update(self.state, decision, reward)


Policy = UnconstrainedUCB | StrictRateUCB | StochasticRateUCB


def make_policy(
    name: str,
    config: FairnessConfig,
    schedule: Schedule | None = None,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> Policy:
    """Build a policy by name: strict, stochastic, or unconstrained."""
    if name == "strict":
        return StrictRateUCB(config, schedule=schedule)
    if name == "stochastic":
        return StochasticRateUCB(config, seed=seed, rng=rng)
    if name == "unconstrained":
        return UnconstrainedUCB(config)
    raise ConfigError(f"unknown policy {name!r}; expected one of {POLICY_NAMES}")
