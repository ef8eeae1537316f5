import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seedbank.exact import (Functional, balance_residual, balance_residuals,
                            beta_cdf_distance, cdf_N_gamma_displayed, dense_expectations,
                            exact_summary, expectations, gamma_law_moments, pmf_N_gamma)
from seedbank.model import ModelParams, ParameterError


def test_n2_hand_solution():
    # from (2,0): h20 = (r + h10 + 2 h01)/3, h01 = (r01 + h10)/1, h10 = 0
    p = ModelParams(1.0, 1.0)
    for f in Functional:
        assert expectations(2, p, f).start == pytest.approx(4.0, abs=1e-12)
    table = expectations(2, p, Functional.SEED_TIME)
    assert table[0, 1] == pytest.approx(1.0) and table[1, 0] == 0.0


@pytest.mark.parametrize("c1,c2", [(1.0, 1.0), (0.5, 2.0), (2.0, 0.5), (0.3, 1.7)])
def test_tridiagonal_equals_dense(c1, c2):
    p = ModelParams(c1, c2)
    for n in range(1, 7):
        for f in Functional:
            table = expectations(n, p, f)
            for state, value in dense_expectations(n, p, f).items():
                assert table[state] == pytest.approx(value, rel=1e-12, abs=1e-12)


@given(st.floats(0.2, 4), st.floats(0.2, 4))
@settings(max_examples=25, deadline=None)
def test_balance_identity(c1, c2):
    assert balance_residuals(60, ModelParams(c1, c2)).max() <= 1e-10


def test_balance_detects_perturbed_activation():
    p = ModelParams(1.0, 1.0)
    assert balance_residual(100, p) <= 1e-12
    assert balance_residual(100, p, ModelParams(1.0, 1.01)) == pytest.approx(0.01 / 1.01, rel=1e-9)


def test_pmf_N_gamma_small_case():
    # n=2, c1=1: deactivate first with prob 2/3 -> N=1; else coalesce then N=0
    pmf = pmf_N_gamma(2, 1.0).as_dict()
    assert pmf == pytest.approx({0: 1 / 3, 1: 2 / 3})


@pytest.mark.parametrize("n", [1, 2, 10, 1000, 100_000])
@pytest.mark.parametrize("c1", [0.5, 1.0, 2.0])
def test_pmf_N_gamma_normalised(n, c1):
    pmf = pmf_N_gamma(n, c1)
    assert abs(pmf.probabilities.sum() - 1) <= 1e-12
    assert np.all(pmf.probabilities >= 0)


def test_displayed_product_is_shifted_by_one():
    n, c1 = 200, 1.0
    cdf = pmf_N_gamma(n, c1).cdf()
    for z in (0.1, 0.5, 0.9):
        m = int(math.floor(z * n))
        assert cdf_N_gamma_displayed(n, c1, z) == pytest.approx(cdf[m - 1], rel=1e-12)


def test_beta_distance_decreases():
    d = [beta_cdf_distance(n, 1.0) for n in (100, 1000, 10_000, 100_000)]
    assert all(b < a for a, b in zip(d, d[1:]))
    assert d[-1] < 1e-3


def test_gamma_moments():
    assert gamma_law_moments(2.0) == pytest.approx((2 / 3, 8 / 9))
    assert gamma_law_moments(0.5) == (None, None)
    mean, var = gamma_law_moments(0.75)
    assert mean == pytest.approx(4.0) and var is None
    with pytest.raises(ParameterError):
        gamma_law_moments(0.0)


def test_exact_summary_json_and_ratios():
    s = exact_summary(100, ModelParams(0.5, 2.0))
    assert s.balance_residual <= 1e-10
    assert s.E_L == pytest.approx(s.E_A + s.E_I)
    assert set(s.ratios()) == {"A", "I", "L"}
    assert '"E_sigma"' in s.to_json()


def test_table_rejects_bad_states():
    t = expectations(4, ModelParams(), Functional.PLANT_TIME)
    with pytest.raises(KeyError):
        t[3, 2]
    with pytest.raises(ParameterError):
        expectations(0, ModelParams())
