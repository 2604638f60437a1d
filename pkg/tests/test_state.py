"""Bandit state accounting, the optimistic index, mixtures, and the pull floor."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairbandit import (
    BanditState,
    Decision,
    make_config,
    min_pull_lower_bound,
    mixture_of,
    ucb_index,
    update,
)
from fairbandit.errors import ArmNeverPulled, ConfigError, RewardOutOfRange


def state_with(pulls, sums):
    state = BanditState.fresh(len(pulls))
    state.pull_count = list(pulls)
    state.reward_sum = list(sums)
    state.clock = sum(pulls)
    return state


def test_ucb_index_unit_exploration_term():
    # horizon chosen so ln(horizon) = 1
    state = state_with([1], [0.5])
    assert ucb_index(state, 1, math.e) == pytest.approx(2.5)


def test_ucb_index_hand_evaluated():
    state = state_with([4], [2.0])
    assert ucb_index(state, 1, math.exp(4)) == pytest.approx(2.5)


def test_ucb_index_scalar_calculator_value():
    # frozen from an independent evaluation of 0.9 + 2*sqrt(ln(100)/100)
    state = state_with([100], [90.0])
    assert ucb_index(state, 1, 100) == pytest.approx(1.3291932052578694, rel=1e-12)


def test_ucb_index_never_pulled():
    state = BanditState.fresh(2)
    with pytest.raises(ArmNeverPulled):
        ucb_index(state, 1, 100)


def test_update_single():
    state = BanditState.fresh(2)
    update(state, Decision(1, "init"), 0.7)
    assert state.pull_count == [1, 0]
    assert state.reward_sum == [0.7, 0.0]
    assert state.clock == 1
    assert state.nonprescheduled_pull_count == [0, 0]


def test_update_rejects_out_of_range_reward():
    state = BanditState.fresh(2)
    with pytest.raises(RewardOutOfRange):
        update(state, Decision(1, "init"), 1.5)
    with pytest.raises(RewardOutOfRange):
        update(state, Decision(1, "init"), -0.1)


def test_update_empirical_mean():
    state = BanditState.fresh(2)
    update(state, Decision(2, "ucb-argmax", 2), 0.2)
    update(state, Decision(2, "ucb-argmax", 2), 0.4)
    assert state.empirical_mean(2) == pytest.approx(0.3)
    assert state.nonprescheduled_pull_count == [0, 2]


def test_only_argmax_provenance_counts_as_nonprescheduled():
    state = BanditState.fresh(2)
    update(state, Decision(1, "init"), 0.5)
    update(state, Decision(1, "prescheduled", 1), 0.5)
    update(state, Decision(1, "ucb-argmax", 1), 0.5)
    update(state, Decision(1, "uniform-draw", 2), 0.5)
    assert state.pull_count[0] == 4
    assert state.nonprescheduled_pull_count[0] == 1


def test_mixture_paper_values():
    cfg = make_config(2, "1/4", 30)
    state = state_with([3, 3], [3.0, 0.0])  # arm 1 is the argmax
    mix = mixture_of(state, cfg)
    assert mix.probs == pytest.approx((0.75, 0.25))


def test_mixture_degenerates_to_uniform_at_full_rate():
    cfg = make_config(4, "1/4", 30)
    state = state_with([1, 1, 1, 1], [0.0, 1.0, 0.5, 0.2])
    mix = mixture_of(state, cfg)
    assert mix.probs == pytest.approx((0.25, 0.25, 0.25, 0.25))


def test_mixture_three_arm_derived():
    cfg = make_config(3, "1/6", 30)
    state = state_with([2, 2, 2], [0.0, 2.0, 0.0])  # arm 2 is the argmax
    mix = mixture_of(state, cfg)
    assert mix.probs == pytest.approx((1 / 6, 2 / 3, 1 / 6))


def test_mixture_mass_floor_is_exact():
    # every arm keeps mass >= min_rate, as exact float comparisons
    for num_arms, block in [(2, 4), (3, 6), (5, 12), (4, 4)]:
        cfg = make_config(num_arms, f"1/{block}", 30)
        state = state_with([1] * num_arms, [0.5] * num_arms)
        mix = mixture_of(state, cfg)
        rate = float(cfg.min_rate)
        assert all(p >= rate for p in mix.probs)
        assert math.fsum(mix.probs) == pytest.approx(1.0, abs=1e-12)


def test_mixture_requires_all_arms_pulled():
    cfg = make_config(2, "1/4", 30)
    state = state_with([1, 0], [0.5, 0.0])
    with pytest.raises(ArmNeverPulled):
        mixture_of(state, cfg)


def test_min_pull_lower_bound_examples():
    assert min_pull_lower_bound(2, make_config(2, "1/4", 30)) == 1
    assert min_pull_lower_bound(10, make_config(2, "1/4", 30)) == 3
    assert min_pull_lower_bound(30, make_config(2, "1/3", 30)) == 10
    assert min_pull_lower_bound(1, make_config(2, "1/4", 30)) == 0


def test_min_pull_lower_bound_needs_positive_rate():
    with pytest.raises(ConfigError):
        min_pull_lower_bound(10, make_config(2, 0, 30))


def test_state_json_round_trip():
    state = state_with([2, 3], [1.5, 0.25])
    state.nonprescheduled_pull_count = [1, 2]
    restored = BanditState.from_json_dict(state.to_json_dict())
    assert restored == state


@given(
    rewards=st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=60),
    arms=st.data(),
)
def test_state_accounting_invariants(rewards, arms):
    num_arms = 3
    state = BanditState.fresh(num_arms)
    argmax_pulls = 0
    for i, reward in enumerate(rewards):
        arm = arms.draw(st.integers(1, num_arms))
        provenance = arms.draw(
            st.sampled_from(["init", "prescheduled", "ucb-argmax", "uniform-draw"])
        )
        if provenance == "ucb-argmax":
            argmax_pulls += 1
        update(state, Decision(arm, provenance, arm), reward)
        assert sum(state.pull_count) == state.clock == i + 1
        assert sum(state.nonprescheduled_pull_count) == argmax_pulls
        for a in range(num_arms):
            assert 0 <= state.reward_sum[a] <= state.pull_count[a] + 1e-9
            assert state.nonprescheduled_pull_count[a] <= state.pull_count[a]
