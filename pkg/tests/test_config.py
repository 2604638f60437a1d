"""Fairness config validation and rate parsing."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairbandit import FairnessConfig, make_config, parse_rate, validate_config
from fairbandit.errors import (
    ConfigError,
    NonIntegralBlock,
    RateTooHigh,
    ZeroArms,
)


def test_paper_setting_is_valid():
    cfg = make_config(2, "1/4", 30)
    assert cfg == FairnessConfig(2, Fraction(1, 4), 30)
    assert cfg.block_length == 4


def test_zero_rate_is_valid_unconstrained():
    cfg = make_config(2, 0, 100)
    assert cfg.min_rate == 0
    assert cfg.block_length is None


def test_rate_too_high():
    with pytest.raises(RateTooHigh):
        make_config(3, "1/2", 100)


def test_zero_arms():
    with pytest.raises(ZeroArms):
        make_config(0, "1/4", 10)


def test_non_integral_block():
    with pytest.raises(NonIntegralBlock):
        make_config(2, "2/7", 10)
    with pytest.raises(NonIntegralBlock):
        make_config(2, 0.3, 10)  # float 0.3 is not exactly 1/d for any integer d


def test_rate_normalized_to_lowest_terms():
    assert make_config(2, "2/8", 10).min_rate == Fraction(1, 4)
    assert make_config(2, 0.25, 10).min_rate == Fraction(1, 4)


def test_negative_rate_and_bad_horizon_rejected():
    with pytest.raises(ConfigError):
        make_config(2, "-1/4", 10)
    with pytest.raises(ConfigError):
        make_config(2, "1/4", 0)


def test_parse_rate_forms():
    assert parse_rate("1/3") == Fraction(1, 3)
    assert parse_rate("0") == 0
    assert parse_rate(Fraction(1, 5)) == Fraction(1, 5)
    with pytest.raises(ConfigError):
        parse_rate("one quarter")


def test_json_round_trip():
    cfg = make_config(3, "1/6", 50)
    assert FairnessConfig.from_json_dict(cfg.to_json_dict()) == cfg


@given(num_arms=st.integers(1, 8), block=st.integers(1, 40), horizon=st.integers(1, 500))
def test_reciprocal_rates_validate_iff_block_covers_arms(num_arms, block, horizon):
    cfg = FairnessConfig(num_arms, Fraction(1, block), horizon)
    if block >= num_arms:
        validated = validate_config(cfg)
        assert validated.min_rate.numerator == 1
        assert validated.num_arms * validated.min_rate <= 1
    else:
        with pytest.raises(RateTooHigh):
            validate_config(cfg)
