"""Stopping times, branch lengths and block spectra read off simulations."""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from .model import EventKind, ModelParams, ParameterError
from .rng import RngSpec, as_generator
from .simulate import (ABSORPTION, PLANT, SEED, MarkedPartition, Trajectory,
                       sample_first_activation, simulate_counts)


@dataclass
class StoppingSummary:
    """First deactivation (gamma), first activation (theta) and absorption
    (sigma) of one path, with the counts seen there.

    ``n_at_theta`` is the plant count right after the activation and
    ``m_at_theta`` the seed count right before it.
    """

    gamma: Optional[float] = None
    theta: Optional[float] = None
    sigma: Optional[float] = None
    n_at_gamma: Optional[int] = None
    n_at_theta: Optional[int] = None
    m_at_theta: Optional[int] = None
    sup_seeds: int = 0


@dataclass
class BranchLengths:
    active: float
    inactive: float

    @property
    def total(self) -> float:
        return self.active + self.inactive


def stopping_summary(traj: Trajectory) -> StoppingSummary:
    out = StoppingSummary(sup_seeds=int(traj.initial_state.seeds))
    if traj.initial_state == (1, 0):
        out.sigma = 0.0
    if len(traj) == 0:
        return out
    out.sup_seeds = max(out.sup_seeds, int(traj.seeds.max()))
    deact = np.flatnonzero(traj.kinds == EventKind.DEACTIVATION)
    if deact.size:
        k = deact[0]
        out.gamma = float(traj.times[k])
        out.n_at_gamma = int(traj.plants[k])
    act = np.flatnonzero(traj.kinds == EventKind.ACTIVATION)
    if act.size:
        k = act[0]
        out.theta = float(traj.times[k])
        out.n_at_theta = int(traj.plants[k])
        out.m_at_theta = int(traj.seeds[k]) + 1
    if out.sigma is None:
        hit = np.flatnonzero((traj.plants == 1) & (traj.seeds == 0))
        if hit.size:
            out.sigma = float(traj.times[hit[0]])
    return out


def branch_lengths(traj: Trajectory) -> BranchLengths:
    """Integrate plant and seed counts over ``[0, sigma]``.

    Holding intervals are summed with ``math.fsum`` so the result does not
    depend on summation order.
    """
    if not traj.absorbed:
        raise ParameterError("branch lengths need a trajectory run to absorption")
    if len(traj) == 0:
        return BranchLengths(0.0, 0.0)
    starts = np.concatenate(([0.0], traj.times[:-1]))
    holds = traj.times - starts
    plants = np.concatenate(([traj.initial_state.plants], traj.plants[:-1]))
    seeds = np.concatenate(([traj.initial_state.seeds], traj.seeds[:-1]))
    return BranchLengths(math.fsum((plants * holds).tolist()),
                         math.fsum((seeds * holds).tolist()))


def superimpose_mutations(traj: Trajectory, params: ModelParams,
                          rng=RngSpec()) -> Tuple[int, int]:
    """Poisson mutation counts on the active and dormant branches."""
    lengths = branch_lengths(traj)
    return poisson_mutations(lengths, params, rng)


def poisson_mutations(lengths: BranchLengths, params: ModelParams, rng) -> Tuple[int, int]:
    gen = as_generator(rng)
    s_active = int(gen.poisson(params.mu_active * lengths.active)) if params.mu_active else 0
    s_inactive = int(gen.poisson(params.mu_inactive * lengths.inactive)) if params.mu_inactive else 0
    return s_active, s_inactive


class Convention(enum.Enum):
    PRE_ACTIVATION = "pre"
    POST_ACTIVATION = "post"


@dataclass(frozen=True)
class BlockSpectrum:
    """``old[i-1]`` plant blocks and ``recent[i-1]`` seed blocks of size ``i``."""

    old: Tuple[int, ...]
    recent: Tuple[int, ...]

    @property
    def k(self) -> int:
        return sum(self.old)

    @property
    def n(self) -> int:
        return sum((i + 1) * (o + r) for i, (o, r) in enumerate(zip(self.old, self.recent)))

    def key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self.old, self.recent


def spectrum_at_first_activation(snapshot: MarkedPartition,
                                 convention: Convention = Convention.PRE_ACTIVATION
                                 ) -> BlockSpectrum:
    """Count plant (old) and seed (recent) blocks by size.

    Under the pre-activation convention ``snapshot`` is the left limit at the
    first activation, so no leaf can be blue yet.  Under the post-activation
    convention it is the right limit and the activated block counts as old.
    """
    snapshot.check()
    if convention == Convention.PRE_ACTIVATION and snapshot.blue:
        raise ParameterError("pre-activation snapshot has blue leaves")
    n = snapshot.n
    old = [0] * n
    recent = [0] * n
    for block, flag in snapshot.blocks:
        (old if flag == PLANT else recent)[len(block) - 1] += 1
    return BlockSpectrum(tuple(old), tuple(recent))


# -- fast full-path summary --------------------------------------------------

def simulate_summary(n: int, params: ModelParams, rng=RngSpec(),
                     max_events: Optional[int] = None
                     ) -> Tuple[StoppingSummary, BranchLengths]:
    """Summary of a full path from ``(n, 0)`` to absorption.

    The pre-activation phase is drawn by ``sample_first_activation``; the
    rest of the path is a Gillespie run from the state right after the first
    activation.  Same law as ``simulate_counts`` followed by
    ``stopping_summary`` and ``branch_lengths``, at O(n) vectorised cost.
    """
    gen = as_generator(rng)
    pre = sample_first_activation(n, params, gen)
    if pre.sigma is not None:
        summary = StoppingSummary(sigma=pre.sigma, sup_seeds=0)
        return summary, BranchLengths(pre.plant_time_to_sigma, 0.0)
    summary = StoppingSummary(gamma=pre.gamma, theta=pre.theta,
                              n_at_gamma=pre.n_at_gamma, n_at_theta=pre.n_after,
                              m_at_theta=pre.m_before, sup_seeds=pre.m_before)
    rest = simulate_counts(pre.n_after, pre.m_after, params, stop=ABSORPTION,
                           rng=gen, max_events=max_events)
    if not rest.absorbed:
        raise RuntimeError(f"event budget exceeded after theta (n={n})")
    summary.sigma = pre.theta + rest.end_time
    if len(rest):
        summary.sup_seeds = max(summary.sup_seeds, int(rest.seeds.max()))
    tail = branch_lengths(rest)
    return summary, BranchLengths(pre.plant_time + tail.active,
                                  pre.seed_time + tail.inactive)


SUMMARY_COLUMNS = ("replicate", "gamma", "theta", "sigma", "n_at_gamma",
                   "n_at_theta", "m_at_theta", "sup_seeds", "A", "I", "L",
                   "S_active", "S_inactive")


def summary_row(replicate: int, summary: StoppingSummary,
                lengths: Optional[BranchLengths] = None,
                mutations: Optional[Tuple[int, int]] = None) -> dict:
    row = {"replicate": replicate, **asdict(summary)}
    if lengths is not None:
        row.update(A=lengths.active, I=lengths.inactive, L=lengths.total)
    if mutations is not None:
        row.update(S_active=mutations[0], S_inactive=mutations[1])
    return {col: row.get(col) for col in SUMMARY_COLUMNS}
