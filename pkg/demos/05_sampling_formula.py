"""Old and recent blocks: formula, urn, and the chain itself.

Given k active blocks, the sizes of old (active) and recent (dormant) blocks
follow an Ewens-type formula, the law of a Hoppe urn started from k colours.
The chain stopped at its first activation is a different matter: the
activation needs seeds, which tilts the law.
"""
from seedbank import ModelParams, RngSpec, conditioned_spectrum_law, hoppe_urn_sample
from seedbank.sampling import empirical_law, formula_law, normalise, total_variation

n, c1 = 6, 1.0
for k in (1, 2, 3):
    law = formula_law(k, n, c1)
    urn = empirical_law([hoppe_urn_sample(k, n, c1, RngSpec(3, r)) for r in range(20_000)])
    print(f"k={k}: {len(law)} configurations, mass {sum(law.values()):.12f},"
          f" urn TV {total_variation(urn, law):.4f}")

# the most likely configuration for k=2
best = max(formula_law(2, n, c1).items(), key=lambda kv: kv[1])
print("mode for k=2: old", best[0].a, "recent", best[0].b, "p =", round(best[1], 4))

# exact law of the simulated chain at its first activation
chain = conditioned_spectrum_law(n, ModelParams(c1, 1.0))
print(f"chain: P(k=0) = {sum(chain.get(0, {}).values()):.3f}  (every plant dormant, outside the formula)")
for k in sorted(k for k in chain if k >= 1):
    p_k = sum(chain[k].values())
    tv = total_variation(normalise(chain[k]), formula_law(k, n, c1))
    print(f"chain: P(k={k}) = {p_k:.3f}, TV to formula {tv:.3f}")
