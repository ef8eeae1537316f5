"""One path of the block-counting chain, start to finish.

Ten lineages start active.  Plants merge pairwise, fall dormant, and wake
up again until a single active block is left.
"""
from seedbank import ModelParams, RngSpec, simulate_counts, stopping_summary, branch_lengths

params = ModelParams(c1=1.0, c2=0.5)
traj = simulate_counts(10, 0, params, rng=RngSpec(base_seed=2024))

# the event log, one row per jump
for t, kind, state in traj.events:
    print(f"{t:8.4f}  {kind.label:<12} plants={state.plants:2d} seeds={state.seeds:2d}")

s = stopping_summary(traj)
print("\nfirst deactivation at", round(s.gamma, 4), "with", s.n_at_gamma, "plants left")
print("first activation at  ", round(s.theta, 4))
print("absorbed at          ", round(s.sigma, 4), "; largest seed bank", s.sup_seeds)

L = branch_lengths(traj)
print(f"active length {L.active:.3f}, dormant length {L.inactive:.3f}")

# the same path as CSV, ready for gnuplot or pandas
print(traj.to_csv().splitlines()[:4])
