import math

import pytest
from hypothesis import given, strategies as st

from seedbank.model import (BlockState, EventKind, ModelParams, ParameterError, Variant,
                            check_state, total_rate, transition_rates)


def test_rates_standard():
    rates = dict(transition_rates(BlockState(3, 2), ModelParams(0.5, 2.0)))
    assert rates == {EventKind.COALESCENCE: 3.0, EventKind.DEACTIVATION: 1.5,
                     EventKind.ACTIVATION: 4.0}


def test_rates_at_absorbing_state_keep_deactivation():
    rates = dict(transition_rates(BlockState(1, 0), ModelParams(1.0, 1.0)))
    assert rates == {EventKind.DEACTIVATION: 1.0}


def test_zero_rates_are_omitted():
    assert transition_rates(BlockState(0, 0), ModelParams()) == []
    assert [k for k, _ in transition_rates(BlockState(0, 3), ModelParams())] == [EventKind.ACTIVATION]


def test_bounded_full_bank_folds_deactivation_into_coalescence():
    params = ModelParams(1.5, 1.0)
    rates = dict(transition_rates(BlockState(4, 2), params, Variant.bounded(2)))
    assert rates[EventKind.COALESCENCE] == 6 + 1.5 * 4
    assert EventKind.DEACTIVATION not in rates
    below = dict(transition_rates(BlockState(4, 1), params, Variant.bounded(2)))
    assert below[EventKind.DEACTIVATION] == 6.0


@pytest.mark.parametrize("kw", [dict(c1=0), dict(c1=-1), dict(c2=0), dict(c1=math.nan),
                                dict(c2=math.inf), dict(mu_active=-0.1),
                                dict(mu_inactive=-1)])
def test_invalid_params(kw):
    with pytest.raises(ParameterError):
        ModelParams(**kw)


def test_invalid_states_and_variants():
    with pytest.raises(ParameterError):
        check_state(BlockState(-1, 0))
    with pytest.raises(ParameterError):
        check_state(BlockState(2, 3), Variant.bounded(2))
    with pytest.raises(ParameterError):
        Variant.bounded(0)


@given(st.integers(0, 60), st.integers(0, 60),
       st.floats(0.01, 10), st.floats(0.01, 10))
def test_total_rate_closed_form(i, j, c1, c2):
    params = ModelParams(c1, c2)
    expect = i * (i - 1) / 2 + c1 * i + c2 * j
    assert total_rate(BlockState(i, j), params) == pytest.approx(expect, rel=1e-12)


@given(st.integers(1, 40), st.integers(0, 40), st.sampled_from(list(EventKind)))
def test_apply_moves(i, j, kind):
    s = BlockState(i, j).apply(kind)
    if kind == EventKind.COALESCENCE:
        assert s.total == i + j - 1
    else:
        assert s.total == i + j
