"""Exact event-driven simulation of the seed bank coalescent.

Three routes are provided:

* ``simulate_counts`` -- Gillespie simulation of the block-counting chain,
  standard or bounded.
* ``simulate_partition`` -- the same dynamics on labelled blocks, with the
  white/blue colouring of leaves whose block has reactivated.
* ``sample_first_deactivation`` / ``sample_first_activation`` -- direct
  samplers for the phase before the first activation.  Until then only
  coalescences and deactivations happen, and the choice between them at
  plant level ``i`` is a Bernoulli variable with parameter
  ``2*c1/(i - 1 + 2*c1)`` that does not depend on the seeds, so the whole
  phase can be drawn with a few vectorised numpy calls.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .model import (STANDARD, BlockState, EventKind, ModelParams,
                    ParameterError, Variant, check_state)
from .rng import Draws, RngSpec, as_generator


class TerminalReason(enum.Enum):
    ABSORBED = "absorbed"
    STOP_CONDITION_MET = "stop_condition_met"
    EVENT_BUDGET_EXCEEDED = "event_budget_exceeded"


class StopKind(enum.Enum):
    ABSORPTION = "absorption"
    FIRST_DEACTIVATION = "first_deactivation"
    FIRST_ACTIVATION = "first_activation"
    PLANTS_REACH = "plants_reach"
    TIME_HORIZON = "time_horizon"


@dataclass(frozen=True)
class StopCondition:
    kind: StopKind = StopKind.ABSORPTION
    value: Optional[float] = None

    @classmethod
    def absorption(cls):
        return cls(StopKind.ABSORPTION)

    @classmethod
    def first_deactivation(cls):
        return cls(StopKind.FIRST_DEACTIVATION)

    @classmethod
    def first_activation(cls):
        return cls(StopKind.FIRST_ACTIVATION)

    @classmethod
    def plants_reach(cls, level: int):
        if level < 1 or int(level) != level:
            raise ParameterError("plants level must be a positive integer")
        return cls(StopKind.PLANTS_REACH, int(level))

    @classmethod
    def time_horizon(cls, t: float):
        if not t > 0:
            raise ParameterError("time horizon must be positive")
        return cls(StopKind.TIME_HORIZON, float(t))

    @classmethod
    def parse(cls, text: str) -> "StopCondition":
        """Parse ``absorption``, ``first_deactivation``, ``first_activation``,
        ``plants:<level>`` or ``time:<t>``."""
        name, _, arg = text.replace("-", "_").partition(":")
        if name in ("absorption", "first_deactivation", "first_activation"):
            return getattr(cls, name)()
        if name == "plants":
            return cls.plants_reach(int(arg))
        if name == "time":
            return cls.time_horizon(float(arg))
        raise ParameterError(f"unknown stop condition {text!r}")

    @property
    def runs_through_absorption(self) -> bool:
        # gamma and theta are a.s. finite only if the chain keeps running
        # from (1, 0) with its deactivation rate.
        return self.kind in (StopKind.FIRST_DEACTIVATION, StopKind.FIRST_ACTIVATION)


ABSORPTION = StopCondition()

_KIND_LABELS = {int(k): k.label for k in EventKind}


@dataclass
class Trajectory:
    """Timed event log of one realisation of the block-counting chain.

    Event ``k`` happened at ``times[k]``, was of kind ``kinds[k]`` and left
    the chain in ``(plants[k], seeds[k])``.
    """

    initial_state: BlockState
    times: np.ndarray
    kinds: np.ndarray
    plants: np.ndarray
    seeds: np.ndarray
    terminal_reason: TerminalReason
    end_time: float
    stop: StopCondition = ABSORPTION
    variant: Variant = STANDARD

    def __len__(self):
        return len(self.times)

    @property
    def events(self) -> List[Tuple[float, EventKind, BlockState]]:
        return [(float(t), EventKind(int(k)), BlockState(int(p), int(s)))
                for t, k, p, s in zip(self.times, self.kinds, self.plants, self.seeds)]

    @property
    def final_state(self) -> BlockState:
        if len(self.times) == 0:
            return self.initial_state
        return BlockState(int(self.plants[-1]), int(self.seeds[-1]))

    @property
    def absorbed(self) -> bool:
        return self.terminal_reason == TerminalReason.ABSORBED

    def to_csv(self, fh=None) -> Optional[str]:
        """Write ``time,event,plants,seeds`` rows; the first row is the start."""
        own = fh is None
        if own:
            fh = io.StringIO()
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time", "event", "plants", "seeds"])
        writer.writerow([repr(0.0), "start", *self.initial_state])
        for t, k, p, s in zip(self.times.tolist(), self.kinds.tolist(),
                              self.plants.tolist(), self.seeds.tolist()):
            writer.writerow([repr(t), _KIND_LABELS[k], p, s])
        if own:
            return fh.getvalue()
        return None


def default_event_budget(n0: int) -> int:
    return 50 * n0 + 10**6


def _stop_met(stop: StopCondition, kind: int, plants: int) -> bool:
    if stop.kind == StopKind.FIRST_DEACTIVATION:
        return kind == EventKind.DEACTIVATION
    if stop.kind == StopKind.FIRST_ACTIVATION:
        return kind == EventKind.ACTIVATION
    if stop.kind == StopKind.PLANTS_REACH:
        return plants == stop.value
    return False


def simulate_counts(n0: int, m0: int, params: ModelParams,
                    variant: Variant = STANDARD,
                    stop: StopCondition = ABSORPTION,
                    rng=RngSpec(),
                    max_events: Optional[int] = None) -> Trajectory:
    """Gillespie simulation of ``(plants, seeds)`` started from ``(n0, m0)``.

    The run ends at the first event after which ``stop`` holds.  Unless the
    stop is the first deactivation or activation, it also ends on reaching
    ``(1, 0)``.  Exceeding ``max_events`` ends the run with
    ``TerminalReason.EVENT_BUDGET_EXCEEDED``.
    """
    if n0 < 0 or m0 < 0 or n0 + m0 < 1:
        raise ParameterError("need n0 + m0 >= 1 with non-negative counts")
    init = BlockState(n0, m0)
    check_state(init, variant)
    if stop.kind == StopKind.PLANTS_REACH and stop.value > n0 + m0:
        raise ParameterError("plants level exceeds the number of blocks")
    if max_events is None:
        max_events = default_event_budget(n0 + m0)

    draws = Draws(as_generator(rng))
    c1, c2 = params.c1, params.c2
    bound = variant.bound if variant.is_bounded else -1
    horizon = stop.value if stop.kind == StopKind.TIME_HORIZON else math.inf
    through = stop.runs_through_absorption

    times: List[float] = []
    kinds: List[int] = []
    plants: List[int] = []
    seeds: List[int] = []
    i, j = n0, m0
    t = 0.0

    if stop.kind == StopKind.PLANTS_REACH and i == stop.value:
        reason = TerminalReason.STOP_CONDITION_MET
    elif (i, j) == (1, 0) and not through:
        reason = TerminalReason.ABSORBED
    else:
        reason = None
    while reason is None:
        if len(times) >= max_events:
            reason = TerminalReason.EVENT_BUDGET_EXCEEDED
            break
        coal = i * (i - 1) * 0.5
        deact = c1 * i
        if j == bound:
            coal += deact
            deact = 0.0
        act = c2 * j
        total = coal + deact + act
        dt = draws.exponential() / total
        if t + dt > horizon:
            t = horizon
            reason = TerminalReason.STOP_CONDITION_MET
            break
        t += dt
        u = draws.uniform() * total
        if u < coal:
            kind = 0
            i -= 1
        elif u < coal + deact:
            kind = 1
            i -= 1
            j += 1
        else:
            kind = 2
            i += 1
            j -= 1
        times.append(t)
        kinds.append(kind)
        plants.append(i)
        seeds.append(j)
        if _stop_met(stop, kind, i):
            reason = TerminalReason.STOP_CONDITION_MET
        elif i == 1 and j == 0 and not through:
            reason = TerminalReason.ABSORBED

    return Trajectory(
        initial_state=init,
        times=np.array(times, dtype=float),
        kinds=np.array(kinds, dtype=np.int8),
        plants=np.array(plants, dtype=np.int64),
        seeds=np.array(seeds, dtype=np.int64),
        terminal_reason=reason,
        end_time=t,
        stop=stop,
        variant=variant,
    )


# -- labelled blocks ---------------------------------------------------------

PLANT = "p"
SEED = "s"


@dataclass(frozen=True)
class MarkedPartition:
    """Blocks of ``{1..n}`` flagged plant (``"p"``) or seed (``"s"``).

    ``blue`` holds the leaves whose block has reactivated at least once.
    """

    n: int
    blocks: Tuple[Tuple[frozenset, str], ...]
    blue: frozenset = frozenset()

    @classmethod
    def from_blocks(cls, blocks, n: Optional[int] = None, blue=()) -> "MarkedPartition":
        blocks = tuple((frozenset(b), flag) for b, flag in blocks)
        if n is None:
            n = sum(len(b) for b, _ in blocks)
        return cls(n, blocks, frozenset(blue))

    @property
    def plant_blocks(self) -> List[frozenset]:
        return [b for b, flag in self.blocks if flag == PLANT]

    @property
    def seed_blocks(self) -> List[frozenset]:
        return [b for b, flag in self.blocks if flag == SEED]

    @property
    def state(self) -> BlockState:
        return BlockState(len(self.plant_blocks), len(self.seed_blocks))

    def color(self, leaf: int) -> str:
        return "blue" if leaf in self.blue else "white"

    def check(self) -> None:
        seen = set()
        for b, flag in self.blocks:
            if flag not in (PLANT, SEED):
                raise ParameterError(f"unknown block flag {flag!r}")
            if not b:
                raise ParameterError("empty block")
            if seen & b:
                raise ParameterError("blocks overlap")
            seen |= b
        if seen != set(range(1, self.n + 1)):
            raise ParameterError("blocks do not partition {1..n}")
        if not self.blue <= seen:
            raise ParameterError("coloured leaf outside {1..n}")


def _undo_snapshot(n, plant_blocks, seed_blocks, blue, kind, undo) -> MarkedPartition:
    """Partition just before the last event, rebuilt from its undo record."""
    plant_blocks = list(plant_blocks)
    seed_blocks = list(seed_blocks)
    if kind == 0:
        merged = plant_blocks.index(undo[0] + undo[1])
        plant_blocks[merged:merged + 1] = [undo[0], undo[1]]
    elif kind == 1:
        seed_blocks.remove(undo)
        plant_blocks.append(undo)
    else:
        block, newly_blue = undo
        plant_blocks.remove(block)
        seed_blocks.append(block)
        blue = set(blue) - newly_blue
    return _snapshot(n, plant_blocks, seed_blocks, blue)


def _snapshot(n, plant_blocks, seed_blocks, blue) -> MarkedPartition:
    blocks = tuple([(frozenset(b), PLANT) for b in plant_blocks]
                   + [(frozenset(b), SEED) for b in seed_blocks])
    return MarkedPartition(n, blocks, frozenset(blue))


@dataclass
class PartitionRun:
    """Result of ``simulate_partition``.

    ``before_stop`` and ``at_stop`` are the partitions just before and just
    after the final event (equal when no event happened).  ``history`` holds
    the partition after every event when requested.
    """

    trajectory: Trajectory
    before_stop: MarkedPartition
    at_stop: MarkedPartition
    history: Optional[List[MarkedPartition]] = None


def simulate_partition(n: int, params: ModelParams,
                       stop: StopCondition = ABSORPTION,
                       rng=RngSpec(), history: bool = False,
                       max_events: Optional[int] = None) -> PartitionRun:
    """Simulate labelled blocks from ``n`` white singleton plants.

    A coalescence merges a uniform pair of plant blocks, a deactivation
    (activation) flips a uniform plant (seed) block, and an activation paints
    every leaf of the activated block blue.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if stop.kind == StopKind.PLANTS_REACH and stop.value > n:
        raise ParameterError("plants level exceeds n")
    if max_events is None:
        max_events = default_event_budget(n)
    draws = Draws(as_generator(rng))
    c1, c2 = params.c1, params.c2
    horizon = stop.value if stop.kind == StopKind.TIME_HORIZON else math.inf
    through = stop.runs_through_absorption

    plant_blocks: List[List[int]] = [[leaf] for leaf in range(1, n + 1)]
    seed_blocks: List[List[int]] = []
    blue: set = set()
    times, kinds, plants, seeds = [], [], [], []
    hist = [] if history else None
    before = None
    t = 0.0

    if stop.kind == StopKind.PLANTS_REACH and n == stop.value:
        reason = TerminalReason.STOP_CONDITION_MET
    elif n == 1 and not through:
        reason = TerminalReason.ABSORBED
    else:
        reason = None
    while reason is None:
        if len(times) >= max_events:
            reason = TerminalReason.EVENT_BUDGET_EXCEEDED
            break
        i, j = len(plant_blocks), len(seed_blocks)
        coal = i * (i - 1) * 0.5
        deact = c1 * i
        act = c2 * j
        total = coal + deact + act
        dt = draws.exponential() / total
        if t + dt > horizon:
            t = horizon
            reason = TerminalReason.STOP_CONDITION_MET
            break
        t += dt
        u = draws.uniform() * total
        if u < coal:
            kind = 0
            a = int(draws.uniform() * i)
            b = int(draws.uniform() * (i - 1))
            if b >= a:
                b += 1
            a, b = min(a, b), max(a, b)
            undo = (plant_blocks[a], plant_blocks[b])
            plant_blocks[a] = plant_blocks[a] + plant_blocks.pop(b)
        elif u < coal + deact:
            kind = 1
            undo = plant_blocks.pop(int(draws.uniform() * i))
            seed_blocks.append(undo)
        else:
            kind = 2
            block = seed_blocks.pop(int(draws.uniform() * j))
            undo = (block, frozenset(block) - blue)
            blue.update(block)
            plant_blocks.append(block)
        i, j = len(plant_blocks), len(seed_blocks)
        times.append(t)
        kinds.append(kind)
        plants.append(i)
        seeds.append(j)
        if history:
            hist.append(_snapshot(n, plant_blocks, seed_blocks, blue))
        if _stop_met(stop, kind, i):
            reason = TerminalReason.STOP_CONDITION_MET
        elif i == 1 and j == 0 and not through:
            reason = TerminalReason.ABSORBED
        if reason is not None:
            before = _undo_snapshot(n, plant_blocks, seed_blocks, blue, kind, undo)

    at_stop = _snapshot(n, plant_blocks, seed_blocks, blue)
    if before is None:
        before = at_stop
    traj = Trajectory(
        initial_state=BlockState(n, 0),
        times=np.array(times, dtype=float),
        kinds=np.array(kinds, dtype=np.int8),
        plants=np.array(plants, dtype=np.int64),
        seeds=np.array(seeds, dtype=np.int64),
        terminal_reason=reason,
        end_time=t,
        stop=stop,
    )
    return PartitionRun(traj, before, at_stop, hist)


# -- direct samplers ---------------------------------------------------------

def sample_first_deactivation(n: int, params: ModelParams, rng=RngSpec()) -> Tuple[int, float]:
    """Draw ``(N(gamma), gamma)`` for the chain started from ``(n, 0)``.

    Levels are walked downwards: the transition from ``i + 1`` plants is a
    deactivation with probability ``2*c1/(i + 2*c1)``.  If every transition
    is a coalescence, the last plant deactivates after an extra
    ``Exp(c1)`` hold and ``N(gamma) = 0``.  The time is the sum of the
    ``Exp(i(i-1)/2 + c1*i)`` holds over the visited levels.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    gen = as_generator(rng)
    c1 = params.c1
    n_at_gamma = 0
    hi = n - 1
    chunk = 256
    while hi >= 1:
        lo = max(hi - chunk, 0)
        ladder = np.arange(hi, lo, -1, dtype=float)
        hits = np.flatnonzero(gen.random(ladder.size) < 2 * c1 / (ladder + 2 * c1))
        if hits.size:
            n_at_gamma = int(ladder[hits[0]])
            break
        hi = lo
        chunk *= 2
    levels = np.arange(n, n_at_gamma, -1, dtype=float)
    rates = levels * (levels - 1) * 0.5 + c1 * levels
    gamma = float(np.sum(gen.standard_exponential(levels.size) / rates))
    return n_at_gamma, gamma


@dataclass
class FirstActivation:
    """Pre-activation phase of the chain started from ``(n, 0)``.

    ``n_before``/``m_before`` are the counts just before the first
    activation, ``plant_time``/``seed_time`` the integrals of the counts over
    ``[0, theta]``.  ``sigma`` is set when ``(1, 0)`` was reached before any
    deactivation; the phase then continues through ``(0, 1)``.
    """

    n: int
    theta: float
    n_before: int
    m_before: int
    gamma: float
    n_at_gamma: int
    sigma: Optional[float]
    plant_time_to_sigma: Optional[float]
    plant_time: float
    seed_time: float

    @property
    def n_after(self) -> int:
        return self.n_before + 1

    @property
    def m_after(self) -> int:
        return self.m_before - 1


@lru_cache(maxsize=4)
def _ladder(n: int, c1: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Levels ``n..1``, their coalescence+deactivation rates, and the
    deactivation probabilities ``2 c1 / (i - 1 + 2 c1)``."""
    levels = np.arange(n, 0, -1, dtype=float)
    rates = levels * (levels - 1) * 0.5 + c1 * levels
    p_deact = 2 * c1 / (levels - 1 + 2 * c1)
    for arr in (levels, rates, p_deact):
        arr.setflags(write=False)
    return levels, rates, p_deact


def sample_first_activation(n: int, params: ModelParams, rng=RngSpec()) -> FirstActivation:
    """Draw the whole phase up to the first activation.

    Competing clocks: run the chain with activations switched off (holds
    ``Exp(i(i-1)/2 + c1*i)``, deactivation with probability
    ``2 c1 / (i - 1 + 2 c1)``) and give every seed an independent
    ``Exp(c2)`` activation clock started when it was made.  The first clock
    to ring is the first activation, and up to that time the two chains
    coincide.  After the last plant deactivates the chain sits at
    ``(0, j)`` until a clock rings.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    gen = as_generator(rng)
    c1, c2 = params.c1, params.c2
    levels, rates, p_deact = _ladder(n, c1)
    deact = gen.random(n) < p_deact
    holds = gen.standard_exponential(n) / rates
    leave = np.cumsum(holds)                    # time the chain leaves each level
    made = np.flatnonzero(deact)
    made_at = leave[made]
    rings = made_at + gen.standard_exponential(made.size) / c2
    first = int(np.argmin(rings))
    theta = float(rings[first])

    pos = int(np.searchsorted(leave, theta))    # index of the level occupied at theta
    n_before = n - pos
    alive = made_at < theta
    m_before = int(np.count_nonzero(alive))
    entered = float(leave[pos - 1]) if pos else 0.0
    plant_time = float(np.dot(levels[:pos], holds[:pos])) + n_before * (theta - entered)
    seed_time = float(np.sum(theta - made_at[alive]))

    sigma = None
    plant_time_to_sigma = None
    if made[0] == n - 1:
        # no deactivation above level 1: (1, 0) was reached first
        sigma = float(leave[n - 2]) if n >= 2 else 0.0
        plant_time_to_sigma = float(np.dot(levels[:n - 1], holds[:n - 1]))
    return FirstActivation(
        n=n,
        theta=theta,
        n_before=n_before,
        m_before=m_before,
        gamma=float(made_at[0]),
        n_at_gamma=int(levels[made[0]]) - 1,
        sigma=sigma,
        plant_time_to_sigma=plant_time_to_sigma,
        plant_time=plant_time,
        seed_time=seed_time,
    )
