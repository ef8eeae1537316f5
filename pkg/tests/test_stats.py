import numpy as np
import pytest
from scipy import stats

from seedbank.exact import exact_summary
from seedbank.model import EventKind, ModelParams, ParameterError
from seedbank.rng import RngSpec
from seedbank.simulate import (PLANT, SEED, MarkedPartition, StopCondition, Trajectory,
                               TerminalReason, simulate_counts)
from seedbank.stats import (BranchLengths, Convention, branch_lengths, poisson_mutations,
                            simulate_summary, spectrum_at_first_activation, stopping_summary,
                            superimpose_mutations)
from seedbank.model import BlockState

P = ModelParams(1.0, 1.0)


def _traj(events, start=(2, 0)):
    times, kinds, plants, seeds = zip(*events)
    return Trajectory(BlockState(*start), np.array(times, float), np.array(kinds, np.int8),
                      np.array(plants), np.array(seeds), TerminalReason.ABSORBED, times[-1])


def test_summary_and_lengths_by_hand():
    d, a, c = EventKind.DEACTIVATION, EventKind.ACTIVATION, EventKind.COALESCENCE
    traj = _traj([(0.5, d, 1, 1), (1.5, a, 2, 0), (2.0, c, 1, 0)])
    s = stopping_summary(traj)
    assert (s.gamma, s.n_at_gamma) == (0.5, 1)
    assert (s.theta, s.n_at_theta, s.m_at_theta) == (1.5, 2, 1)
    assert s.sigma == 2.0 and s.sup_seeds == 1
    lengths = branch_lengths(traj)
    assert lengths.active == pytest.approx(2 * 0.5 + 1 * 1.0 + 2 * 0.5)
    assert lengths.inactive == pytest.approx(1.0)


def test_branch_lengths_need_absorption():
    traj = simulate_counts(10, 0, P, stop=StopCondition.first_deactivation())
    with pytest.raises(ParameterError):
        branch_lengths(traj)


def test_mean_lengths_match_exact():
    n, reps = 10, 4000
    exact = exact_summary(n, P)
    lens = np.array([[*vars(branch_lengths(simulate_counts(n, 0, P, rng=RngSpec(4, r)))).values()]
                     for r in range(reps)])
    se = lens.std(axis=0, ddof=1) / np.sqrt(reps)
    assert abs(lens[:, 0].mean() - exact.E_A) < 4 * se[0]
    assert abs(lens[:, 1].mean() - exact.E_I) < 4 * se[1]


def test_summary_sampler_matches_gillespie():
    n, reps = 20, 3000
    hyb = [simulate_summary(n, P, RngSpec(1, r)) for r in range(reps)]
    ref = []
    for r in range(reps):
        t = simulate_counts(n, 0, P, rng=RngSpec(2, r))
        ref.append((stopping_summary(t), branch_lengths(t)))
    for getter in (lambda x: x[0].sigma, lambda x: x[0].sup_seeds,
                   lambda x: x[1].active, lambda x: x[1].inactive):
        assert stats.ks_2samp([getter(x) for x in hyb], [getter(x) for x in ref]).pvalue > 1e-3


def test_mutations():
    zero = poisson_mutations(BranchLengths(5.0, 7.0), P, RngSpec(1))
    assert zero == (0, 0)
    p = ModelParams(1.0, 1.0, 2.0, 0.5)
    draws = np.array([poisson_mutations(BranchLengths(3.0, 4.0), p, RngSpec(1, r))
                      for r in range(4000)])
    assert draws[:, 0].mean() == pytest.approx(6.0, abs=0.25)
    assert draws[:, 1].mean() == pytest.approx(2.0, abs=0.15)
    traj = simulate_counts(8, 0, P, rng=RngSpec(2))
    assert superimpose_mutations(traj, P, RngSpec(3)) == (0, 0)


def test_spectrum_conventions():
    before = MarkedPartition.from_blocks([({1, 2}, PLANT), ({3}, SEED), ({4, 5}, SEED)])
    after = MarkedPartition.from_blocks([({1, 2}, PLANT), ({3}, PLANT), ({4, 5}, SEED)],
                                        blue={3})
    pre = spectrum_at_first_activation(before, Convention.PRE_ACTIVATION)
    assert pre.old == (0, 1, 0, 0, 0) and pre.recent == (1, 1, 0, 0, 0)
    post = spectrum_at_first_activation(after, Convention.POST_ACTIVATION)
    assert post.k == 2 and post.n == 5
    with pytest.raises(ParameterError):
        spectrum_at_first_activation(after, Convention.PRE_ACTIVATION)
    with pytest.raises(ParameterError):
        spectrum_at_first_activation(
            MarkedPartition.from_blocks([({1, 2}, PLANT), ({2}, SEED)], n=2))
