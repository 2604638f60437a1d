"""Seedable reward environments with known means, plus the teammate score transform.

Every sample lies in [0, 1]. Each distribution advances the generator by
exactly one draw per sample so episode streams stay aligned regardless of
the arm mix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import ArmOutOfRange, ConfigError, ZeroTurns

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / _SQRT2))


def _norm_pdf(z: float) -> float:
    return math.exp(-0.5 * z * z) * _INV_SQRT_2PI


@dataclass(frozen=True)
class Bernoulli:
    """Reward 1 with probability p, else 0."""

    p: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"bernoulli p must lie in [0, 1], got {self.p!r}")

    def sample(self, rng: np.random.Generator) -> float:
        return 1.0 if rng.random() < self.p else 0.0

    def expected_value(self) -> float:
        return self.p

    def to_json_dict(self) -> dict:
        return {"kind": "bernoulli", "p": self.p}


@dataclass(frozen=True)
class ClippedGaussian:
    """Normal(mean, stddev) draw clamped to [0, 1].

    expected_value is the analytic mean of the clamped variable: the
    probability mass below 0 lands on 0, the mass above 1 on 1, and the
    middle contributes the truncated-normal integral.
    """

    mean: float
    stddev: float

    def __post_init__(self) -> None:
        if self.stddev < 0:
            raise ConfigError(f"stddev must be nonnegative, got {self.stddev!r}")

    def sample(self, rng: np.random.Generator) -> float:
        value = rng.normal(self.mean, self.stddev)
        return min(1.0, max(0.0, value))

    def expected_value(self) -> float:
        if self.stddev == 0:
            return min(1.0, max(0.0, self.mean))
        lo = (0.0 - self.mean) / self.stddev
        hi = (1.0 - self.mean) / self.stddev
        return (
            (1.0 - _norm_cdf(hi))
            + self.mean * (_norm_cdf(hi) - _norm_cdf(lo))
            + self.stddev * (_norm_pdf(lo) - _norm_pdf(hi))
        )

    def to_json_dict(self) -> dict:
        return {"kind": "clipped-gaussian", "mean": self.mean, "stddev": self.stddev}


@dataclass(frozen=True)
class Fixed:
    """Always the same reward (clamped to [0, 1])."""

    value: float

    def sample(self, rng: np.random.Generator) -> float:
        rng.random()  # burn one draw to keep streams aligned across kinds
        return min(1.0, max(0.0, self.value))

    def expected_value(self) -> float:
        return min(1.0, max(0.0, self.value))

    def to_json_dict(self) -> dict:
        return {"kind": "fixed", "value": self.value}


ArmDistribution = Union[Bernoulli, ClippedGaussian, Fixed]


def parse_distribution(data: Mapping) -> ArmDistribution:
    """Build an arm distribution from its JSON dict form."""
    kind = data.get("kind")
    if kind == "bernoulli":
        return Bernoulli(float(data["p"]))
    if kind == "clipped-gaussian":
        return ClippedGaussian(float(data["mean"]), float(data["stddev"]))
    if kind == "fixed":
        return Fixed(float(data["value"]))
    raise ConfigError(f"unknown distribution kind {kind!r}")


@dataclass(frozen=True)
class EnvSpec:
    """Ordered arm distributions plus the default seed for reward streams."""

    arms: tuple[ArmDistribution, ...]
    seed: int

    @property
    def num_arms(self) -> int:
        return len(self.arms)

    def to_json_dict(self) -> dict:
        return {"arms": [arm.to_json_dict() for arm in self.arms], "seed": self.seed}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "EnvSpec":
        arms = tuple(parse_distribution(entry) for entry in data["arms"])
        if not arms:
            raise ConfigError("an environment needs at least one arm")
        return cls(arms=arms, seed=int(data.get("seed", 0)))

    @classmethod
    def from_json(cls, text: str) -> "EnvSpec":
        return cls.from_json_dict(json.loads(text))


def sample_reward(env: EnvSpec, arm: int, rng: np.random.Generator) -> float:
    """Draw one reward for a 1-indexed arm, advancing the generator once.

    Raises ArmOutOfRange for an arm id outside 1..num_arms.
    """
    if not 1 <= arm <= env.num_arms:
        raise ArmOutOfRange(f"arm {arm} outside 1..{env.num_arms}")
    return env.arms[arm - 1].sample(rng)


def mean_vector(env: EnvSpec) -> list[float]:
    """True expected reward per arm, in arm order."""
    return [arm.expected_value() for arm in env.arms]


def gap_vector(env: EnvSpec) -> list[float]:
    """Suboptimality gap per arm: best mean minus the arm's mean (0 for the best arm)."""
    means = mean_vector(env)
    best = max(means)
    return [best - m for m in means]


@dataclass(frozen=True)
class TeammateScore:
    """Cumulative game points, turns taken, and the normalizing maximum per turn."""

    cumulative_score: float
    turns: int
    normalizer: float = 300.0


def teammate_reward(score: TeammateScore) -> float:
    """Normalized per-turn performance: min(1, score / (normalizer * turns)).

    Raises ZeroTurns when no turns were taken; the normalizer must be
    positive and the cumulative score nonnegative.
    """
    if score.turns <= 0:
        raise ZeroTurns(f"turns must be positive, got {score.turns!r}")
    if score.normalizer <= 0:
        raise ConfigError(f"normalizer must be positive, got {score.normalizer!r}")
    if score.cumulative_score < 0:
        raise ConfigError(
            f"cumulative score must be nonnegative, got {score.cumulative_score!r}"
        )
    return min(1.0, score.cumulative_score / (score.normalizer * score.turns))
