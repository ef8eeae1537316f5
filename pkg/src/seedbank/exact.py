"""Exact laws and expectations of the block-counting chain.

Expected accumulated functionals until absorption at ``(1, 0)`` solve the
first-step equations

    lambda(i, j) h(i, j) = r(i, j) + sum over jumps of rate * h(next)

with ``h(1, 0) = 0``.  Coalescence lowers the number of blocks
``k = i + j`` by one while (de)activation keeps it, so the equations split
into one tridiagonal system per level ``k``, solved for ``k = 1, 2, ..., n``.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import solve_banded

from .model import ModelParams, ParameterError, binom2


class Functional(enum.Enum):
    PLANT_TIME = "plant_time"      # E[A]
    SEED_TIME = "seed_time"        # E[I]
    ELAPSED_TIME = "elapsed_time"  # E[sigma]


def _reward(functional: Functional, i: np.ndarray, k: int) -> np.ndarray:
    if functional == Functional.PLANT_TIME:
        return i.astype(float)
    if functional == Functional.SEED_TIME:
        return (k - i).astype(float)
    return np.ones(i.size)


@dataclass
class ExactPmf:
    support: np.ndarray
    probabilities: np.ndarray

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probabilities)

    def as_dict(self) -> Dict[int, float]:
        return dict(zip(self.support.tolist(), self.probabilities.tolist()))


def pmf_N_gamma(n: int, c1: float) -> ExactPmf:
    """Law of the plant count right after the first deactivation.

    ``N = m`` means coalescences from levels ``n`` down to ``m + 2`` and then
    a deactivation from level ``m + 1``.  ``N = 0`` means the last plant
    deactivates after every other transition was a coalescence.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    i = np.arange(1, n, dtype=float)
    log_coal = np.log(i) - np.log(i + 2 * c1)          # coalescence from level i+1
    # tail[m] = log P(no deactivation from levels n..m+1) for m = 0..n-1
    tail = np.concatenate((np.cumsum(log_coal[::-1])[::-1], [0.0]))
    m = np.arange(0, n)
    probs = np.empty(n)
    probs[0] = math.exp(tail[0])
    probs[1:] = 2 * c1 / (m[1:] + 2 * c1) * np.exp(tail[1:])
    return ExactPmf(m, probs)


def cdf_N_gamma_displayed(n: int, c1: float, z: float) -> float:
    """The product ``prod_{i=floor(zn)}^{n-1} i/(i + 2 c1)``.

    It equals ``P(N(gamma) <= floor(zn) - 1)``: the lower index sits one
    below the event decomposition used by ``pmf_N_gamma``.  The gap
    vanishes as ``n`` grows.
    """
    lo = max(int(math.floor(z * n)), 0)
    if lo == 0:
        return 0.0
    i = np.arange(lo, n, dtype=float)
    return float(np.exp(np.sum(np.log(i) - np.log(i + 2 * c1))))


def beta_cdf_distance(n: int, c1: float) -> float:
    """``sup_m |P(N(gamma) <= m) - (m/n)^(2 c1)|`` over ``m = 0..n``."""
    cdf = np.append(pmf_N_gamma(n, c1).cdf(), 1.0)
    m = np.arange(0, n + 1)
    return float(np.max(np.abs(cdf - (m / n) ** (2 * c1))))


class ExpectationTable:
    """Expected functional from every state ``(i, j)`` with ``i + j <= n``.

    ``levels[k][i]`` is the value at ``(i, k - i)``.
    """

    def __init__(self, n: int, params: ModelParams, functional: Functional,
                 levels: List[np.ndarray]):
        self.n = n
        self.params = params
        self.functional = functional
        self.levels = levels

    def __getitem__(self, state: Tuple[int, int]) -> float:
        i, j = state
        k = i + j
        if i < 0 or j < 0 or not 1 <= k <= self.n:
            raise KeyError(state)
        return float(self.levels[k][i])

    @property
    def start(self) -> float:
        """Value at ``(n, 0)``."""
        return self[self.n, 0]

    def rows(self):
        for k in range(1, self.n + 1):
            for i, value in enumerate(self.levels[k].tolist()):
                yield i, k - i, value

    def to_csv(self, fh) -> None:
        fh.write("i,j,value\n")
        for i, j, value in self.rows():
            fh.write(f"{i},{j},{value!r}\n")


def expectations(n: int, params: ModelParams,
                 functional: Functional = Functional.PLANT_TIME) -> ExpectationTable:
    """Solve the first-step equations level by level (O(n^2) total).

    On level ``k`` the unknowns are ``h(i, k - i)`` for ``i = 0..k``: the
    diagonal is the total rate, deactivation couples ``i`` to ``i - 1`` with
    rate ``c1*i``, activation couples ``i`` to ``i + 1`` with rate
    ``c2*(k - i)``, and coalescence feeds in ``h(i - 1, k - i)`` from level
    ``k - 1``.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    c1, c2 = params.c1, params.c2
    levels: List[np.ndarray] = [np.zeros(0)] * (n + 1)
    # level 1: (0, 1) -> (1, 0) by activation; (1, 0) absorbing
    r01 = _reward(functional, np.array([0]), 1)[0]
    levels[1] = np.array([r01 / c2, 0.0])
    for k in range(2, n + 1):
        i = np.arange(k + 1)
        coal = i * (i - 1) / 2.0
        deact = c1 * i
        act = c2 * (k - i)
        diag = coal + deact + act
        rhs = _reward(functional, i, k)
        rhs[1:] += coal[1:] * levels[k - 1][:k]
        ab = np.zeros((3, k + 1))
        ab[0, 1:] = -act[:-1]        # super-diagonal: h(i+1)
        ab[1] = diag
        ab[2, :-1] = -deact[1:]      # sub-diagonal: h(i-1)
        levels[k] = solve_banded((1, 1), ab, rhs, check_finite=False)
    return ExpectationTable(n, params, functional, levels)


def dense_expectations(n: int, params: ModelParams,
                       functional: Functional = Functional.PLANT_TIME) -> Dict[Tuple[int, int], float]:
    """Same quantity by one dense solve over all states; for checking."""
    states = [(i, k - i) for k in range(1, n + 1) for i in range(k + 1)]
    unknown = [s for s in states if s != (1, 0)]
    index = {s: idx for idx, s in enumerate(unknown)}
    size = len(unknown)
    mat = np.zeros((size, size))
    rhs = np.zeros(size)
    for (i, j), row in index.items():
        jumps = [((i - 1, j), binom2(i)), ((i - 1, j + 1), params.c1 * i),
                 ((i + 1, j - 1), params.c2 * j)]
        mat[row, row] = sum(rate for _, rate in jumps)
        if functional == Functional.PLANT_TIME:
            rhs[row] = i
        elif functional == Functional.SEED_TIME:
            rhs[row] = j
        else:
            rhs[row] = 1.0
        for target, rate in jumps:
            if rate and target in index:
                mat[row, index[target]] -= rate
    sol = np.linalg.solve(mat, rhs)
    out = {s: float(sol[index[s]]) for s in unknown}
    out[(1, 0)] = 0.0
    return out


def balance_residual(n: int, params: ModelParams,
                     chain_params: Optional[ModelParams] = None) -> float:
    """``|c1 E[A] - c2 E[I]| / (c1 E[A])`` from ``(n, 0)``.

    ``chain_params`` (default ``params``) drives the chain whose expectations
    are taken, while ``params`` supplies the rates in the identity.  Passing a
    perturbed chain measures how sensitive the identity is.
    """
    return float(balance_residuals(n, params, chain_params)[-1])


def balance_residuals(n_max: int, params: ModelParams,
                      chain_params: Optional[ModelParams] = None) -> np.ndarray:
    """Balance residuals for every start ``(n, 0)`` with ``2 <= n <= n_max``.

    One table per functional covers all starting sizes, since it holds the
    value at every state with at most ``n_max`` blocks.
    """
    if n_max < 2:
        raise ParameterError("n must be at least 2")
    chain = params if chain_params is None else chain_params
    ta = expectations(n_max, chain, Functional.PLANT_TIME)
    ti = expectations(n_max, chain, Functional.SEED_TIME)
    ea = np.array([ta.levels[k][k] for k in range(2, n_max + 1)])
    ei = np.array([ti.levels[k][k] for k in range(2, n_max + 1)])
    return np.abs(params.c1 * ea - params.c2 * ei) / (params.c1 * ea)


@dataclass
class ExactSummary:
    n: int
    c1: float
    c2: float
    E_A: float
    E_I: float
    E_sigma: float
    balance_residual: float

    @property
    def E_L(self) -> float:
        return self.E_A + self.E_I

    def ratios(self) -> Dict[str, float]:
        """Expectations over their leading-order ``log n`` growth."""
        log_n = math.log(self.n)
        return {
            "A": self.E_A / (2 * log_n),
            "I": self.E_I / (2 * self.c1 / self.c2 * log_n),
            "L": self.E_L / (2 * (1 + self.c1 / self.c2) * log_n),
        }

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "c1": self.c1, "c2": self.c2,
                           "E_A": self.E_A, "E_I": self.E_I, "E_L": self.E_L,
                           "E_sigma": self.E_sigma,
                           "balance_residual": self.balance_residual})


def exact_summary(n: int, params: ModelParams) -> ExactSummary:
    ea = expectations(n, params, Functional.PLANT_TIME).start
    ei = expectations(n, params, Functional.SEED_TIME).start
    es = expectations(n, params, Functional.ELAPSED_TIME).start
    resid = abs(params.c1 * ea - params.c2 * ei) / (params.c1 * ea) if n >= 2 else 0.0
    return ExactSummary(n, params.c1, params.c2, ea, ei, es, resid)


def gamma_law_moments(c1: float) -> Tuple[Optional[float], Optional[float]]:
    """Mean and variance of the limit of ``n * gamma``; ``None`` if infinite."""
    if c1 <= 0:
        raise ParameterError("c1 must be positive")
    mean = 2.0 / (2 * c1 - 1) if c1 > 0.5 else None
    var = 4 * c1 / ((c1 - 1) * (2 * c1 - 1) ** 2) if c1 > 1 else None
    return mean, var

