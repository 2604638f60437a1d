"""Selection rules: init phase, preschedule, argmax behavior, stochastic mixing."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairbandit import (
    BanditState,
    StochasticRateUCB,
    StrictRateUCB,
    UnconstrainedUCB,
    argmax_lowest_index,
    build_schedule,
    make_config,
    make_policy,
    select_stochastic,
    select_strict,
    select_unconstrained,
    ucb_argmax,
    ucb_index,
    update,
)
from fairbandit.errors import ConfigError, HorizonExceeded


def play(policy, rewards_by_arm, steps):
    """Drive a policy with deterministic per-arm rewards; returns the decisions."""
    decisions = []
    for _ in range(steps):
        decision = policy.select()
        policy.update(decision, rewards_by_arm[decision.arm - 1])
        decisions.append(decision)
    return decisions


def test_init_phase_pulls_arms_in_order():
    cfg = make_config(3, "1/6", 30)
    policy = StrictRateUCB(cfg)
    decisions = play(policy, [0.5, 0.5, 0.5], 3)
    assert [(d.arm, d.provenance) for d in decisions] == [
        (1, "init"),
        (2, "init"),
        (3, "init"),
    ]
    assert all(d.ucb_argmax_arm is None for d in decisions)


def test_prescheduled_slot_pulls_pinned_arm():
    cfg = make_config(2, "1/4", 30)
    policy = StrictRateUCB(cfg)
    decisions = play(policy, [1.0, 0.0], 3)
    # step 3 is block 1 offset 1, reserved for arm 1
    assert decisions[2].arm == 1
    assert decisions[2].provenance == "prescheduled"
    assert decisions[2].ucb_argmax_arm is not None


def test_free_slot_takes_argmax_ucb():
    cfg = make_config(2, "1/4", 30)
    schedule = build_schedule(cfg)
    # state at step 12 (offset 2, free): arm 1 clearly dominant
    state = BanditState.fresh(2)
    state.pull_count = [6, 5]
    state.reward_sum = [6.0, 0.5]
    state.clock = 11
    idx = [ucb_index(state, a, 30) for a in (1, 2)]
    assert idx[0] > idx[1]
    decision = select_strict(state, schedule, cfg)
    assert decision.arm == 1
    assert decision.provenance == "ucb-argmax"
    assert decision.ucb_argmax_arm == 1


def test_argmax_ties_break_to_lowest_arm():
    state = BanditState.fresh(3)
    state.pull_count = [2, 2, 2]
    state.reward_sum = [1.0, 1.0, 1.0]
    state.clock = 6
    assert ucb_argmax(state, 50) == 1


def test_horizon_exceeded():
    cfg = make_config(2, "1/2", 4)
    policy = StrictRateUCB(cfg)
    play(policy, [0.5, 0.5], 4)
    with pytest.raises(HorizonExceeded):
        policy.select()


def test_strict_requires_schedule_when_constrained():
    cfg = make_config(2, "1/4", 10)
    state = BanditState.fresh(2)
    with pytest.raises(ConfigError):
        select_strict(state, None, cfg)


def test_strict_zero_rate_equals_unconstrained():
    cfg = make_config(2, 0, 50)
    strict = StrictRateUCB(cfg)
    plain = UnconstrainedUCB(cfg)
    rewards = [0.8, 0.3]
    strict_arms = [d.arm for d in play(strict, rewards, 50)]
    plain_arms = [d.arm for d in play(plain, rewards, 50)]
    assert strict_arms == plain_arms


def test_stochastic_full_rate_always_uniform():
    cfg = make_config(2, "1/2", 40)
    policy = StochasticRateUCB(cfg, seed=3)
    decisions = play(policy, [0.9, 0.1], 40)
    assert all(d.provenance == "uniform-draw" for d in decisions[2:])


def test_stochastic_zero_rate_always_argmax():
    cfg = make_config(3, 0, 40)
    policy = StochasticRateUCB(cfg, seed=3)
    decisions = play(policy, [0.9, 0.1, 0.5], 40)
    assert all(d.provenance == "ucb-argmax" for d in decisions[3:])


def test_stochastic_records_argmax_even_on_uniform_draws():
    cfg = make_config(2, "1/2", 40)
    policy = StochasticRateUCB(cfg, seed=3)
    decisions = play(policy, [1.0, 0.0], 40)
    assert all(d.ucb_argmax_arm in (1, 2) for d in decisions[2:])


def test_stochastic_mixture_frequencies():
    # K=2, v=1/4: the argmax arm should be pulled with frequency near 0.75
    cfg = make_config(2, "1/4", 100_000)
    rng = np.random.default_rng(12345)
    state = BanditState.fresh(2)
    state.pull_count = [500, 500]
    state.reward_sum = [500.0, 0.0]  # arm 1 is a locked-in argmax
    state.clock = 1000
    draws = 20000
    hits = 0
    for _ in range(draws):
        decision = select_stochastic(state, cfg, rng)
        assert decision.ucb_argmax_arm == 1
        if decision.arm == 1:
            hits += 1
    # 3 sigma for a binomial at p=0.75 over 20k draws is ~0.009
    assert hits / draws == pytest.approx(0.75, abs=0.012)


def test_stochastic_deterministic_given_seed():
    cfg = make_config(3, "1/6", 60)
    first = play(StochasticRateUCB(cfg, seed=77), [0.9, 0.5, 0.1], 60)
    second = play(StochasticRateUCB(cfg, seed=77), [0.9, 0.5, 0.1], 60)
    assert [d.arm for d in first] == [d.arm for d in second]
    assert [d.provenance for d in first] == [d.provenance for d in second]


def test_policy_reset_replays_identically():
    cfg = make_config(2, "1/4", 30)
    policy = StochasticRateUCB(cfg, seed=9)
    first = [d.arm for d in play(policy, [0.7, 0.2], 30)]
    policy.reset()
    second = [d.arm for d in play(policy, [0.7, 0.2], 30)]
    assert first == second


def test_make_policy_names_and_params():
    cfg = make_config(2, "1/4", 30)
    strict = make_policy("strict", cfg)
    assert isinstance(strict, StrictRateUCB)
    assert strict.get_params()["config"] == cfg
    assert isinstance(make_policy("stochastic", cfg, seed=1), StochasticRateUCB)
    assert isinstance(make_policy("unconstrained", cfg), UnconstrainedUCB)
    with pytest.raises(ConfigError):
        make_policy("greedy", cfg)


def test_ucb_argmax_consistent_with_per_arm_indices():
    rng = np.random.default_rng(4)
    for _ in range(200):
        num_arms = int(rng.integers(2, 6))
        state = BanditState.fresh(num_arms)
        state.pull_count = [int(rng.integers(1, 50)) for _ in range(num_arms)]
        state.reward_sum = [
            float(rng.random() * n) for n in state.pull_count
        ]
        state.clock = sum(state.pull_count)
        horizon = int(rng.integers(2, 10000))
        indices = [ucb_index(state, a, horizon) for a in range(1, num_arms + 1)]
        assert ucb_argmax(state, horizon) == argmax_lowest_index(indices)


# exact dyadic lattice: adding c is exact in float64, so the property is testable
_LATTICE = st.integers(-512, 512).map(lambda k: k / 64.0)


@given(values=st.lists(_LATTICE, min_size=1, max_size=6), shift=_LATTICE)
def test_argmax_invariant_under_constant_shift(values, shift):
    shifted = [v + shift for v in values]
    assert argmax_lowest_index(values) == argmax_lowest_index(shifted)
