import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seedbank.model import ModelParams, ParameterError
from seedbank.rng import RngSpec
from seedbank.sampling import (Configuration, conditioned_spectrum_law, empirical_law,
                               enumerate_A, enumerate_Abar, expected_old, expected_recent,
                               formula_law, hoppe_urn_sample, log_gen_binom,
                               log_rising_binom, marginal_old_probability, normalise, pgf_Z,
                               spectrum_probability, total_variation)
from seedbank.simulate import StopCondition, simulate_partition
from seedbank.stats import Convention, spectrum_at_first_activation


def test_two_leaf_law():
    law = formula_law(1, 2, 1.0)
    one_each = Configuration((1, 0), (1, 0))
    pair_old = Configuration((0, 1), (0, 0))
    assert law == pytest.approx({one_each: 2 / 3, pair_old: 1 / 3})


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("c1", [0.5, 1.0, 2.0])
def test_normalisation(n, c1):
    for k in range(1, n + 1):
        assert abs(sum(formula_law(k, n, c1).values()) - 1) <= 1e-10


def test_enumeration_counts():
    # A(1, 3): old {1}, recent {1,1} or {2}; old {2}, recent {1}; old {3}
    assert len(enumerate_A(1, 3)) == 4
    assert len(enumerate_Abar(2, 4)) == 4
    with pytest.raises(ParameterError):
        enumerate_A(0, 3)


def _urn_law_exact(k, n, theta):
    """Exact law of the urn by recursion over all draw outcomes."""
    law = {(tuple([1] * k), ()): Fraction(1)}
    for balls in range(k, n):
        nxt = {}
        for (old, new), p in law.items():
            denom = balls + theta
            key = (old, tuple(sorted(new + (1,))))
            nxt[key] = nxt.get(key, 0) + p * theta / denom
            for idx, size in enumerate(old):
                o = list(old)
                o[idx] += 1
                key = (tuple(sorted(o)), new)
                nxt[key] = nxt.get(key, 0) + p * Fraction(size) / denom
            for idx, size in enumerate(new):
                r = list(new)
                r[idx] += 1
                key = (old, tuple(sorted(r)))
                nxt[key] = nxt.get(key, 0) + p * Fraction(size) / denom
        law = nxt
    out = {}
    for (old, new), p in law.items():
        a = [0] * n
        b = [0] * n
        for s in old:
            a[s - 1] += 1
        for s in new:
            b[s - 1] += 1
        cfg = Configuration(tuple(a), tuple(b))
        out[cfg] = out.get(cfg, 0) + p
    return out


@pytest.mark.parametrize("k,n", [(1, 4), (2, 5), (3, 6), (1, 6)])
def test_formula_is_urn_law(k, n):
    exact = _urn_law_exact(k, n, Fraction(2))
    for cfg, p in exact.items():
        assert spectrum_probability(cfg, k, n, 1.0) == pytest.approx(float(p), rel=1e-12)
    assert len(exact) == len(enumerate_A(k, n))


@pytest.mark.parametrize("n", [3, 5, 8])
@pytest.mark.parametrize("c1", [0.5, 1.3])
def test_closed_forms_match_enumeration(n, c1):
    for k in range(1, n + 1):
        law = formula_law(k, n, c1)
        marg, zlaw = {}, {}
        for cfg, p in law.items():
            marg[cfg.a] = marg.get(cfg.a, 0) + p
            zlaw[cfg.old_leaves] = zlaw.get(cfg.old_leaves, 0) + p
        for a in enumerate_Abar(k, n):
            assert marginal_old_probability(a, k, n, c1) == pytest.approx(marg[a], abs=1e-10)
        assert pgf_Z(k, n, c1) == pytest.approx(zlaw, abs=1e-10)
        for j in range(1, n + 1):
            eo = sum(p * cfg.a[j - 1] for cfg, p in law.items())
            er = sum(p * cfg.b[j - 1] for cfg, p in law.items())
            assert expected_old(j, k, n, c1) == pytest.approx(eo, abs=1e-10)
            assert expected_recent(j, k, n, c1) == pytest.approx(er, abs=1e-10)


@given(st.floats(0.05, 20), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_generalised_binomial_identity(alpha, t):
    # C(alpha + t - 1, t) written two ways
    assert log_gen_binom(alpha + t - 1, t) == pytest.approx(log_rising_binom(alpha, t),
                                                            rel=1e-9, abs=1e-9)


def test_urn_sampler_matches_formula():
    k, n, c1 = 2, 6, 1.0
    draws = [hoppe_urn_sample(k, n, c1, RngSpec(8, r)) for r in range(20_000)]
    assert all(d.in_A(k, n) for d in draws)
    assert total_variation(empirical_law(draws), formula_law(k, n, c1)) < 0.03


def test_exact_chain_law_against_partition_simulation():
    n, p = 5, ModelParams(1.0, 1.0)
    exact = conditioned_spectrum_law(n, p)
    assert sum(sum(v.values()) for v in exact.values()) == pytest.approx(1.0, abs=1e-12)
    reps = 20_000
    emp = {}
    for r in range(reps):
        run = simulate_partition(n, p, stop=StopCondition.first_activation(), rng=RngSpec(12, r))
        s = spectrum_at_first_activation(run.before_stop, Convention.PRE_ACTIVATION)
        key = Configuration(s.old, s.recent)
        emp[key] = emp.get(key, 0) + 1 / reps
    flat = {cfg: q for v in exact.values() for cfg, q in v.items()}
    assert total_variation(emp, flat) < 0.03


def test_exact_chain_law_differs_from_formula():
    # the spectrum at the first activation is tilted towards few plants
    law = conditioned_spectrum_law(6, ModelParams(1.0, 1.0))
    tv = total_variation(normalise(law[1]), formula_law(1, 6, 1.0))
    assert tv > 0.05


def test_rejects_bad_input():
    with pytest.raises(ParameterError):
        spectrum_probability(Configuration((1, 0), (0, 0)), 1, 2, 1.0)
    with pytest.raises(ParameterError):
        marginal_old_probability((0, 2), 1, 2, 1.0)
    with pytest.raises(ParameterError):
        hoppe_urn_sample(0, 3, 1.0)
    assert math.isclose(sum(pgf_Z(3, 7, 0.4).values()), 1.0, rel_tol=1e-12)
