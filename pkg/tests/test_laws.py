import math

import numpy as np
import pytest
from scipy import integrate, stats

from seedbank.exact import gamma_law_moments
from seedbank.laws import Beta2c1, Exponential, Frechet, GammaLaw, ks_distance
from seedbank.rng import RngSpec

LAWS = [Beta2c1(0.5), Beta2c1(2.0), GammaLaw(0.75), GammaLaw(2.0),
        Frechet(1.0, 1.0), Frechet(0.5, 3.0), Exponential(1.0, 1.0), Exponential(2.0, 0.3)]


def test_reference_values():
    assert float(Frechet(1, 1).cdf(4.0)) == pytest.approx(math.exp(-1))
    assert float(GammaLaw(1.7).cdf(0.0)) == 0.0
    assert float(GammaLaw(1.7).pdf(0.0)) == pytest.approx(1.7)
    assert float(Beta2c1(0.5).cdf(0.25)) == pytest.approx(0.25)


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_quantile_inverts_cdf(law):
    q = law.quantile(np.linspace(0.001, 0.999, 200))
    assert np.max(np.abs(law.quantile(law.cdf(q)) - q)) <= 1e-10 * max(1.0, np.max(q))


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_cdf_clamps_outside_support(law):
    vals = law.cdf(np.array([-1e9, -1.0, 0.0, 1e12]))
    assert np.all((vals >= 0) & (vals <= 1))
    assert vals[0] == 0.0 and vals[-1] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_pdf_integrates_to_cdf(law):
    a, b = law.quantile(0.1), law.quantile(0.8)
    mass = integrate.quad(lambda x: float(law.pdf(x)), a, b)[0]
    assert mass == pytest.approx(0.7, abs=1e-8)


@pytest.mark.parametrize("law", LAWS, ids=repr)
def test_ks_self_test(law):
    x = law.sample(100_000, RngSpec(17))
    # DKW: P(D > 0.01) <= 2 exp(-2 n 0.01^2) ~ 4e-9
    assert ks_distance(x, law) <= 0.01


def test_ks_matches_scipy_and_edge_cases():
    law = Exponential(1.0, 0.5)
    x = law.sample(500, RngSpec(3))
    assert ks_distance(x, law) == pytest.approx(stats.kstest(x, law.cdf).statistic, abs=1e-12)
    assert ks_distance([float(law.median())], law) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        ks_distance([], law)
    # ties: all mass at one point
    assert ks_distance([1.0] * 10, Beta2c1(0.5)) == pytest.approx(1.0)


@pytest.mark.parametrize("c1", [0.75, 1.5, 2.0])
def test_gamma_moments_by_quadrature(c1):
    law = GammaLaw(c1)
    mean, var = gamma_law_moments(c1)
    m1 = integrate.quad(lambda x: x * float(law.pdf(x)), 0, np.inf, limit=500,
                        epsabs=1e-12, epsrel=1e-12)[0]
    assert abs(m1 - mean) <= 1e-6
    if var is not None:
        m2 = integrate.quad(lambda x: x * x * float(law.pdf(x)), 0, np.inf, limit=500,
                            epsabs=1e-12, epsrel=1e-12)[0]
        assert abs(m2 - m1**2 - var) <= 1e-6


@pytest.mark.parametrize("c1", [0.5, 1.0, 2.0])
def test_gamma_direct_vs_beta_transform(c1):
    law = GammaLaw(c1)
    a = law.sample(40_000, RngSpec(1))
    b = law.sample_via_beta(40_000, RngSpec(2))
    assert stats.ks_2samp(a, b).pvalue > 1e-3
    assert ks_distance(b, law) < 0.015
