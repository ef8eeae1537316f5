"""When does the first lineage fall dormant?

The number of plants left at that moment has an exact law; rescaled by n
it approaches Beta(2c1, 1).  The time itself, rescaled by n, approaches
the Gamma law with CDF 1 - (2/(2+x))^(2c1).
"""
import numpy as np

from seedbank import (Beta2c1, GammaLaw, ModelParams, RngSpec, beta_cdf_distance,
                      ks_distance, pmf_N_gamma, sample_first_deactivation)

c1 = 1.0
pmf = pmf_N_gamma(10, c1)
print("exact law of N(gamma) from 10 lineages:")
print(np.round(pmf.probabilities, 4))

for n in (100, 1000, 10_000, 100_000):
    print(f"n={n:6d}  sup |CDF - (m/n)^(2c1)| = {beta_cdf_distance(n, c1):.2e}")

# direct sampler: a Bernoulli ladder over levels, then a sum of exponentials
n = 100_000
draws = np.array([sample_first_deactivation(n, ModelParams(c1), RngSpec(5, r))
                  for r in range(5000)])
print("\nKS of N(gamma)/n vs Beta:", round(ks_distance(draws[:, 0] / n, Beta2c1(c1)), 4))
print("KS of n*gamma vs Gamma law:", round(ks_distance(draws[:, 1] * n, GammaLaw(c1)), 4))
print("median of n*gamma:", np.median(draws[:, 1] * n), "limit:", GammaLaw(c1).median())
