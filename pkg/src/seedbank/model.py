"""Parameters, states and transition rates of the seed bank coalescent.

The block-counting chain lives on pairs ``(plants, seeds)``.  From ``(i, j)``
it coalesces two plants at rate ``i(i-1)/2``, deactivates a plant at rate
``c1*i`` and activates a seed at rate ``c2*j``.  The bounded variant caps the
bank at ``m`` seeds; a deactivation into a full bank removes the lineage, so
its rate is folded into the coalescence channel.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple


class EventKind(enum.IntEnum):
    COALESCENCE = 0
    DEACTIVATION = 1
    ACTIVATION = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class BlockState(NamedTuple):
    plants: int
    seeds: int

    @property
    def total(self) -> int:
        return self.plants + self.seeds

    def apply(self, kind: EventKind) -> "BlockState":
        if kind == EventKind.COALESCENCE:
            return BlockState(self.plants - 1, self.seeds)
        if kind == EventKind.DEACTIVATION:
            return BlockState(self.plants - 1, self.seeds + 1)
        return BlockState(self.plants + 1, self.seeds - 1)


class ParameterError(ValueError):
    """Raised for invalid model parameters or states."""


@dataclass(frozen=True)
class ModelParams:
    """Rates of the seed bank coalescent.

    ``c1`` is the per-lineage deactivation rate, ``c2`` the per-seed
    activation rate.  Mutations fall on active branches at rate
    ``mu_active`` and on dormant branches at rate ``mu_inactive``.
    """

    c1: float = 1.0
    c2: float = 1.0
    mu_active: float = 0.0
    mu_inactive: float = 0.0

    def __post_init__(self):
        validate(self)


def validate(params: ModelParams) -> ModelParams:
    for name in ("c1", "c2", "mu_active", "mu_inactive"):
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ParameterError(f"{name} must be a finite real, got {value!r}")
    if params.c1 <= 0:
        raise ParameterError("c1 must be positive")
    if params.c2 <= 0:
        raise ParameterError("c2 must be positive")
    if params.mu_active < 0:
        raise ParameterError("mu_active must be non-negative")
    if params.mu_inactive < 0:
        raise ParameterError("mu_inactive must be non-negative")
    return params


@dataclass(frozen=True)
class Variant:
    """``Variant()`` is the standard chain, ``Variant(bound=m)`` the bounded one."""

    bound: Optional[int] = None

    def __post_init__(self):
        if self.bound is not None and (int(self.bound) != self.bound or self.bound < 1):
            raise ParameterError("bank capacity must be a positive integer")

    @property
    def is_bounded(self) -> bool:
        return self.bound is not None

    @classmethod
    def standard(cls) -> "Variant":
        return cls()

    @classmethod
    def bounded(cls, m: int) -> "Variant":
        return cls(bound=m)


STANDARD = Variant()


def binom2(i: int) -> int:
    return i * (i - 1) // 2


def check_state(state: BlockState, variant: Variant = STANDARD) -> None:
    if state.plants < 0 or state.seeds < 0:
        raise ParameterError(f"negative block count in {tuple(state)}")
    if variant.is_bounded and state.seeds > variant.bound:
        raise ParameterError(
            f"state {tuple(state)} exceeds bank capacity {variant.bound}")


def transition_rates(state: BlockState, params: ModelParams,
                     variant: Variant = STANDARD) -> List[Tuple[EventKind, float]]:
    """Non-zero jump rates out of ``state``, in ``EventKind`` order.

    The rate function is a pure description of the chain: ``(1, 0)`` still
    reports its deactivation rate ``c1`` even though genealogy consumers treat
    it as absorbing.
    """
    i, j = state
    coal = float(binom2(i))
    deact = params.c1 * i
    if variant.is_bounded and j >= variant.bound:
        coal += deact
        deact = 0.0
    act = params.c2 * j
    out = []
    if coal > 0:
        out.append((EventKind.COALESCENCE, coal))
    if deact > 0:
        out.append((EventKind.DEACTIVATION, deact))
    if act > 0:
        out.append((EventKind.ACTIVATION, act))
    return out


def total_rate(state: BlockState, params: ModelParams,
               variant: Variant = STANDARD) -> float:
    return sum(rate for _, rate in transition_rates(state, params, variant))
