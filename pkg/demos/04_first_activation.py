"""The first wake-up from the seed bank.

theta * ln n tends to an exponential, the number of plants at that time
over ln n to a Frechet law, and the bank size over ln n to 2 c1.  The last
one converges slowly; watch the means climb.
"""
import math

import numpy as np

from seedbank import Exponential, Frechet, ModelParams, RngSpec, ks_distance
from seedbank.simulate import sample_first_activation

params = ModelParams(1.0, 1.0)
reps = 2000
print("       n  KS(theta ln n)  KS(N/ln n)  mean M/ln n")
for n in (1000, 10_000, 100_000):
    rows = np.array([(f.theta, f.n_after, f.m_before)
                     for f in (sample_first_activation(n, params, RngSpec(9, r))
                               for r in range(reps))])
    ln = math.log(n)
    print(f"{n:8d} {ks_distance(rows[:, 0] * ln, Exponential(1, 1)):15.4f}"
          f" {ks_distance(rows[:, 1] / ln, Frechet(1, 1)):11.4f} {rows[:, 2].mean() / ln:12.3f}")
print("limit of the last column: 2 c1 =", 2 * params.c1)
