import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from seedbank.model import BlockState, EventKind, ModelParams, ParameterError, Variant
from seedbank.rng import RngSpec
from seedbank.simulate import (PLANT, SEED, StopCondition, TerminalReason,
                               sample_first_activation, sample_first_deactivation,
                               simulate_counts, simulate_partition)
from seedbank.stats import stopping_summary

P = ModelParams(1.0, 1.0)


def test_embedded_chain_first_jump_frequency():
    # from (2, 0): coalescence at rate 1, deactivation at rate 2
    stop = StopCondition.plants_reach(1)
    kinds = [simulate_counts(2, 0, P, stop=stop, rng=RngSpec(5, r)).kinds[0]
             for r in range(6000)]
    freq = np.mean(np.array(kinds) == EventKind.DEACTIVATION)
    assert abs(freq - 2 / 3) < 3 * np.sqrt(2 / 9 / 6000) + 1e-3


@given(st.integers(1, 25), st.integers(0, 5), st.floats(0.2, 3), st.floats(0.2, 3),
       st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_trajectory_invariants(n, m, c1, c2, seed):
    traj = simulate_counts(n, m, ModelParams(c1, c2), rng=RngSpec(seed))
    assert traj.absorbed and traj.final_state == (1, 0)
    assert np.all(np.diff(traj.times) > 0)
    assert np.all(traj.plants >= 0) and np.all(traj.seeds >= 0)
    total = traj.plants + traj.seeds
    prev = np.concatenate(([n + m], total[:-1]))
    step = prev - total
    assert np.all(step == (traj.kinds == EventKind.COALESCENCE))


def test_start_at_absorption_is_empty():
    traj = simulate_counts(1, 0, P)
    assert len(traj) == 0 and traj.absorbed and traj.end_time == 0.0


def test_deterministic_and_csv_roundtrip():
    a = simulate_counts(30, 0, P, rng=RngSpec(11, 4))
    b = simulate_counts(30, 0, P, rng=RngSpec(11, 4))
    assert a.to_csv() == b.to_csv()
    rows = io.StringIO(a.to_csv()).read().splitlines()
    assert rows[0] == "time,event,plants,seeds"
    assert rows[1] == "0.0,start,30,0"
    last = rows[-1].split(",")
    assert float(last[0]) == a.end_time and last[2:] == ["1", "0"]
    assert len(rows) == len(a) + 2
    assert simulate_counts(30, 0, P, rng=RngSpec(11, 5)).to_csv() != a.to_csv()


def test_bounded_bank_never_overflows():
    v = Variant.bounded(3)
    for r in range(200):
        traj = simulate_counts(40, 0, ModelParams(2.0, 0.5), variant=v, rng=RngSpec(2, r))
        assert traj.seeds.max(initial=0) <= 3


def test_event_budget():
    traj = simulate_counts(200, 0, P, max_events=10)
    assert traj.terminal_reason == TerminalReason.EVENT_BUDGET_EXCEEDED
    assert len(traj) == 10


def test_time_horizon_and_plants_stop():
    traj = simulate_counts(50, 0, P, stop=StopCondition.time_horizon(0.01), rng=RngSpec(1))
    assert traj.terminal_reason == TerminalReason.STOP_CONDITION_MET
    assert traj.end_time == 0.01 and traj.times.max(initial=0) <= 0.01
    traj = simulate_counts(50, 0, P, stop=StopCondition.plants_reach(10), rng=RngSpec(1))
    assert traj.plants[-1] == 10
    assert len(simulate_counts(10, 0, P, stop=StopCondition.plants_reach(10))) == 0


def test_first_deactivation_runs_through_absorption():
    # from (1, 0) gamma is the single Exp(c1) deactivation
    t = [simulate_counts(1, 0, P, stop=StopCondition.first_deactivation(),
                         rng=RngSpec(3, r)).end_time for r in range(3000)]
    assert stats.kstest(t, "expon").pvalue > 0.001


def test_stop_parse():
    assert StopCondition.parse("plants:4") == StopCondition.plants_reach(4)
    assert StopCondition.parse("first-activation") == StopCondition.first_activation()
    with pytest.raises(ParameterError):
        StopCondition.parse("never")


def test_invalid_start():
    with pytest.raises(ParameterError):
        simulate_counts(-1, 0, P)


def _gillespie_theta(n, reps, seed):
    out = []
    for r in range(reps):
        s = stopping_summary(simulate_counts(n, 0, P, stop=StopCondition.first_activation(),
                                             rng=RngSpec(seed, r)))
        out.append((s.gamma, s.n_at_gamma, s.theta, s.n_at_theta, s.m_at_theta))
    return np.array(out)


def test_direct_samplers_match_gillespie():
    n, reps = 20, 3000
    ref = _gillespie_theta(n, reps, 1)
    fa = [sample_first_activation(n, P, RngSpec(2, r)) for r in range(reps)]
    direct = np.array([(f.gamma, f.n_at_gamma, f.theta, f.n_after, f.m_before) for f in fa])
    for col in range(5):
        assert stats.ks_2samp(ref[:, col], direct[:, col]).pvalue > 1e-3, col
    ladder = np.array([sample_first_deactivation(n, P, RngSpec(3, r)) for r in range(reps)])
    assert stats.ks_2samp(ref[:, 1], ladder[:, 0]).pvalue > 1e-3
    assert stats.ks_2samp(ref[:, 0], ladder[:, 1]).pvalue > 1e-3


def test_first_activation_integrals_consistent():
    f = sample_first_activation(500, P, RngSpec(9))
    assert f.plant_time > 0 and f.seed_time > 0
    assert f.m_before >= 1 and f.n_before + f.m_before <= 500
    assert f.gamma <= f.theta


def test_partition_blocks_track_counts():
    run = simulate_partition(12, P, history=True, rng=RngSpec(4))
    for snap, p, s in zip(run.history, run.trajectory.plants, run.trajectory.seeds):
        snap.check()
        assert snap.state == BlockState(p, s)
        assert sorted(x for b, _ in snap.blocks for x in b) == list(range(1, 13))
    assert run.at_stop.state == (1, 0)


def test_partition_snapshots_around_first_activation():
    for r in range(200):
        run = simulate_partition(8, P, stop=StopCondition.first_activation(), rng=RngSpec(6, r))
        before, after = run.before_stop, run.at_stop
        assert not before.blue and after.blue
        assert before.state.apply(EventKind.ACTIVATION) == after.state
        blue_block = [b for b, f in after.blocks if b & after.blue]
        assert len(blue_block) == 1 and blue_block[0] == after.blue
        flags = dict((b, f) for b, f in after.blocks)
        assert flags[blue_block[0]] == PLANT
        assert (blue_block[0], SEED) in before.blocks
