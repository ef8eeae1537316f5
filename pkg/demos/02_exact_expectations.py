"""Expected branch lengths without simulation.

The first-step equations split into one tridiagonal system per total
block count, so a 3000-lineage sample takes well under a second.
"""
import math

from seedbank import ModelParams, exact_summary, balance_residual

for c1, c2 in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.5)]:
    params = ModelParams(c1, c2)
    print(f"\nc1={c1} c2={c2}")
    print("     n     E[A]     E[I]   E[A]/(2 ln n)   E[I]/((2c1/c2) ln n)")
    for n in (30, 300, 3000):
        s = exact_summary(n, params)
        r = s.ratios()
        print(f"{n:6d} {s.E_A:8.3f} {s.E_I:8.3f} {r['A']:15.4f} {r['I']:22.4f}")

# time spent active and dormant balance exactly: c1 E[A] = c2 E[I]
p = ModelParams(0.5, 2.0)
print("\nbalance residual at n=100:", balance_residual(100, p))
# ... and a 1% error in the activation rate shows up immediately
print("with activation off by 1%:", balance_residual(100, p, ModelParams(0.5, 2.02)))

# the ratios creep towards one, on a log log n / log n scale
print("\nlog log n / log n at n=3000:", math.log(math.log(3000)) / math.log(3000))
