"""Minimum-pull-rate constrained UCB bandits: policies, environments, harness, service."""

from .core import (
    BanditState,
    Decision,
    FairnessConfig,
    MixtureDistribution,
    Schedule,
    argmax_lowest_index,
    build_schedule,
    count_schedules,
    enumerate_schedules,
    make_config,
    min_pull_lower_bound,
    mixture_of,
    parse_rate,
    select_stochastic,
    select_strict,
    select_unconstrained,
    ucb_argmax,
    ucb_index,
    update,
    validate_config,
)
from .envs import (
    ArmDistribution,
    Bernoulli,
    ClippedGaussian,
    EnvSpec,
    Fixed,
    TeammateScore,
    gap_vector,
    mean_vector,
    parse_distribution,
    sample_reward,
    teammate_reward,
)
from .policies import (
    POLICY_NAMES,
    StochasticRateUCB,
    StrictRateUCB,
    UnconstrainedUCB,
    make_policy,
    policy_rng,
)
from .sim import (
    AggregateStats,
    ExperimentConfig,
    FuzzReport,
    RegretReport,
    RunTrace,
    aggregate,
    brute_force_oracle,
    check_fairness_floor,
    episode_streams,
    export,
    fairness_fuzz,
    load_exported,
    pseudo_regret_curve,
    regret_report,
    run_episode,
    run_experiment,
    stochastic_regret,
    stochastic_regret_curve,
    strict_regret,
    strict_regret_curve,
    validate_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateStats",
    "ArmDistribution",
    "BanditState",
    "Bernoulli",
    "ClippedGaussian",
    "Decision",
    "EnvSpec",
    "ExperimentConfig",
    "FairnessConfig",
    "Fixed",
    "FuzzReport",
    "MixtureDistribution",
    "POLICY_NAMES",
    "RegretReport",
    "RunTrace",
    "Schedule",
    "StochasticRateUCB",
    "StrictRateUCB",
    "TeammateScore",
    "UnconstrainedUCB",
    "aggregate",
    "argmax_lowest_index",
    "brute_force_oracle",
    "build_schedule",
    "check_fairness_floor",
    "count_schedules",
    "enumerate_schedules",
    "episode_streams",
    "export",
    "fairness_fuzz",
    "gap_vector",
    "load_exported",
    "make_config",
    "make_policy",
    "mean_vector",
    "min_pull_lower_bound",
    "mixture_of",
    "parse_distribution",
    "parse_rate",
    "policy_rng",
    "pseudo_regret_curve",
    "regret_report",
    "run_episode",
    "run_experiment",
    "sample_reward",
    "select_stochastic",
    "select_strict",
    "select_unconstrained",
    "stochastic_regret",
    "stochastic_regret_curve",
    "strict_regret",
    "strict_regret_curve",
    "teammate_reward",
    "ucb_argmax",
    "ucb_index",
    "update",
    "validate_config",
    "validate_experiment",
]
