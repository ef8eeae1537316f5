"""Segregating sites under dormancy.

Mutations fall as a Poisson process along the tree; dormant branches can
carry their own rate.  The mean count is mu times the expected length.
"""
import numpy as np

from seedbank import ModelParams, RngSpec, exact_summary, simulate_counts, superimpose_mutations

n = 50
params = ModelParams(c1=1.0, c2=1.0, mu_active=1.0, mu_inactive=1.0)
counts = []
for r in range(3000):
    gen = RngSpec(77, r).generator()
    traj = simulate_counts(n, 0, params, rng=gen)
    counts.append(sum(superimpose_mutations(traj, params, gen)))
counts = np.array(counts)

exact = exact_summary(n, params)
print(f"mean S = {counts.mean():.2f} +/- {counts.std(ddof=1) / np.sqrt(counts.size):.2f}")
print(f"mu E[L] = {exact.E_L:.2f}")

# Watterson-style estimate of mu, with the dormancy-aware expected length
print("mu estimate:", counts.mean() / exact.E_L)

# no dormant mutations: only the active length counts
quiet = ModelParams(1.0, 1.0, mu_active=1.0, mu_inactive=0.0)
traj = simulate_counts(n, 0, quiet, rng=RngSpec(1))
print("active/dormant mutations with mu_inactive=0:", superimpose_mutations(traj, quiet, RngSpec(2)))
