"""Conditional sampling formula for old and recent blocks at the first activation.

Given ``k`` active blocks at the first activation, let ``a[i]`` count active
("old") blocks of size ``i`` and ``b[j]`` dormant ("recent") blocks of size
``j``.  Their conditional law is an Ewens-type formula

    P(a, b | k) = (n-k)! k! / (k + 2 c1)_(n-k)
                  * prod_i 1/a_i!  * prod_j (2 c1 / j)^b_j / b_j!

on ``A(k, n) = {sum a = k, sum i (a_i + b_i) = n}``.  It is the law of a
Hoppe urn that starts with ``k`` one-ball colours and a black ball of weight
``2 c1``.

Every probability is computed in log space.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from scipy.special import gammaln

from .model import ModelParams, ParameterError
from .rng import RngSpec, as_generator

ENUMERATION_LIMIT = 14


@dataclass(frozen=True)
class Configuration:
    """``a[i-1]`` old and ``b[i-1]`` recent blocks of size ``i``."""

    a: Tuple[int, ...]
    b: Tuple[int, ...]

    @property
    def k(self) -> int:
        return sum(self.a)

    @property
    def old_leaves(self) -> int:
        return sum((i + 1) * x for i, x in enumerate(self.a))

    @property
    def n(self) -> int:
        return self.old_leaves + sum((i + 1) * x for i, x in enumerate(self.b))

    def in_A(self, k: int, n: int) -> bool:
        return (len(self.a) == n and len(self.b) == n and min(self.a + self.b) >= 0
                and self.k == k and self.n == n)


def log_ascending_factorial(x: float, length: int) -> float:
    """``log x_(length)`` with ``x_(m) = x (x+1) ... (x+m-1)``."""
    if length < 0:
        raise ParameterError("length must be non-negative")
    if length == 0:
        return 0.0
    return float(gammaln(x + length) - gammaln(x))


def log_gen_binom(x: float, t: int) -> float:
    """``log C(x, t)`` for real ``x`` and integer ``t >= 0`` with ``x - t + 1 > 0``."""
    return float(gammaln(x + 1) - gammaln(t + 1) - gammaln(x - t + 1))


def log_rising_binom(alpha: float, t: int) -> float:
    """``log C(alpha + t - 1, t) = log (alpha)_(t) / t!``."""
    return log_ascending_factorial(alpha, t) - math.lgamma(t + 1)


# -- enumeration -------------------------------------------------------------

def _partitions(total: int, max_part: int) -> Iterator[List[int]]:
    """Partitions of ``total`` as non-increasing part lists."""
    if total == 0:
        yield []
        return
    for part in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - part, part):
            yield [part] + rest


def _counts(parts: List[int], n: int) -> Tuple[int, ...]:
    out = [0] * n
    for p in parts:
        out[p - 1] += 1
    return tuple(out)


def _check_size(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ParameterError("need 1 <= k <= n")
    if n > ENUMERATION_LIMIT:
        raise ParameterError(f"enumeration is limited to n <= {ENUMERATION_LIMIT}")


def enumerate_Abar(k: int, n: int) -> List[Tuple[int, ...]]:
    """All old-block vectors with ``k`` blocks holding at most ``n`` leaves."""
    _check_size(k, n)
    out = []
    for z in range(k, n + 1):
        for parts in _partitions(z, z):
            if len(parts) == k:
                out.append(_counts(parts, n))
    return out


def enumerate_A(k: int, n: int) -> List[Configuration]:
    """All configurations of ``A(k, n)``."""
    out = []
    for a in enumerate_Abar(k, n):
        z = sum((i + 1) * x for i, x in enumerate(a))
        for parts in _partitions(n - z, n - z):
            out.append(Configuration(a, _counts(parts, n)))
    return out


# -- closed forms ------------------------------------------------------------

def log_spectrum_probability(cfg: Configuration, k: int, n: int, c1: float) -> float:
    if not cfg.in_A(k, n):
        raise ParameterError("configuration is not in A(k, n)")
    theta = 2 * c1
    out = (math.lgamma(n - k + 1) + math.lgamma(k + 1)
           - log_ascending_factorial(k + theta, n - k))
    for a_i in cfg.a:
        out -= math.lgamma(a_i + 1)
    for j, b_j in enumerate(cfg.b, start=1):
        if b_j:
            out += b_j * math.log(theta / j) - math.lgamma(b_j + 1)
    return out


def spectrum_probability(cfg: Configuration, k: int, n: int, c1: float) -> float:
    """Conditional probability of ``cfg`` given ``k`` active blocks."""
    return math.exp(log_spectrum_probability(cfg, k, n, c1))


def marginal_old_probability(a, k: int, n: int, c1: float) -> float:
    """Conditional law of the old blocks alone:

    ``k!/prod a_i! * C(2c1 + n - z - 1, n - z) / C(2c1 + n - 1, n - k)``
    with ``z = sum i a_i``.
    """
    a = tuple(int(x) for x in a)
    if len(a) > n:
        raise ParameterError("vector longer than n")
    z = sum((i + 1) * x for i, x in enumerate(a))
    if min(a) < 0 or sum(a) != k or z > n:
        raise ParameterError("old-block vector is not in Abar(k, n)")
    theta = 2 * c1
    out = math.lgamma(k + 1) - sum(math.lgamma(x + 1) for x in a)
    out += log_gen_binom(theta + n - z - 1, n - z) - log_gen_binom(theta + n - 1, n - k)
    return math.exp(out)


def pgf_Z(k: int, n: int, c1: float) -> Dict[int, float]:
    """Law of the number of leaves in old blocks, on ``z = k..n``."""
    if not 1 <= k <= n:
        raise ParameterError("need 1 <= k <= n")
    theta = 2 * c1
    denom = log_gen_binom(theta + n - 1, n - k)
    return {z: math.exp(log_gen_binom(theta + n - z - 1, n - z)
                        + log_gen_binom(z - 1, z - k) - denom)
            for z in range(k, n + 1)}


def expected_old(j: int, k: int, n: int, c1: float) -> float:
    """``E[O_j | k] = k C(2c1+n-j-1, n-j-k+1) / C(2c1+n-1, n-k)``."""
    if not 1 <= j <= n - k + 1:
        return 0.0
    theta = 2 * c1
    return k * math.exp(log_gen_binom(theta + n - j - 1, n - j - k + 1)
                        - log_gen_binom(theta + n - 1, n - k))


def expected_recent(j: int, k: int, n: int, c1: float) -> float:
    """``E[R_j | k] = (2c1/j) C(2c1+n-j-1, n-j-k) / C(2c1+n-1, n-k)``."""
    if not 1 <= j <= n - k:
        return 0.0
    theta = 2 * c1
    return theta / j * math.exp(log_gen_binom(theta + n - j - 1, n - j - k)
                                - log_gen_binom(theta + n - 1, n - k))


# -- forward urn -------------------------------------------------------------

def hoppe_urn_sample(k: int, n: int, c1: float, rng=RngSpec()) -> Configuration:
    """Run ``n - k`` draws of a Hoppe urn from ``k`` single-ball old colours.

    With ``m`` balls in the urn a new recent colour appears with probability
    ``2 c1 / (m + 2 c1)``; otherwise a ball is copied, so an existing colour
    grows with probability proportional to its size.
    """
    if not 1 <= k <= n:
        raise ParameterError("need 1 <= k <= n")
    gen = as_generator(rng)
    theta = 2 * c1
    sizes = [1] * k
    old = k
    balls = k
    owner = list(range(k))       # colour of every ball, for size-biased picks
    for u in gen.random((n - k, 2)).tolist():
        if u[0] * (balls + theta) < theta:
            sizes.append(1)
            owner.append(len(sizes) - 1)
        else:
            colour = owner[int(u[1] * balls)]
            sizes[colour] += 1
            owner.append(colour)
        balls += 1
    a = [0] * n
    b = [0] * n
    for idx, size in enumerate(sizes):
        (a if idx < old else b)[size - 1] += 1
    return Configuration(tuple(a), tuple(b))


# -- exact law of the simulated chain ----------------------------------------

def conditioned_spectrum_law(n: int, params: ModelParams, post_activation: bool = False
                             ) -> Dict[int, Dict[Configuration, float]]:
    """Exact joint law of ``(k, spectrum)`` at the first activation of the
    seed bank coalescent itself, by propagating probability over block-size
    states.

    Returns ``{k: {configuration: P(k, configuration)}}``.  With
    ``post_activation`` the activated block counts as old and ``k`` includes
    it.  Intended for small ``n``.
    """
    if n > ENUMERATION_LIMIT:
        raise ParameterError(f"exact law is limited to n <= {ENUMERATION_LIMIT}")
    c1, c2 = params.c1, params.c2
    out: Dict[int, Dict[Configuration, float]] = defaultdict(lambda: defaultdict(float))

    def spectrum(plants, seeds):
        return Configuration(_counts(list(plants), n), _counts(list(seeds), n))

    layer = {((1,) * n, ()): 1.0}
    while layer:
        nxt: Dict[Tuple[tuple, tuple], float] = defaultdict(float)
        for (plants, seeds), mass in layer.items():
            i, j = len(plants), len(seeds)
            total = i * (i - 1) / 2 + c1 * i + c2 * j
            for s in range(j):
                p = mass * c2 / total
                if post_activation:
                    cfg = spectrum(plants + (seeds[s],), seeds[:s] + seeds[s + 1:])
                    out[i + 1][cfg] += p
                else:
                    out[i][spectrum(plants, seeds)] += p
            for x in range(i):
                rest = plants[:x] + plants[x + 1:]
                key = (rest, tuple(sorted(seeds + (plants[x],), reverse=True)))
                nxt[key] += mass * c1 / total
                for y in range(x + 1, i):
                    merged = rest[:y - 1] + rest[y:] + (plants[x] + plants[y],)
                    key = (tuple(sorted(merged, reverse=True)), seeds)
                    nxt[key] += mass / total
        layer = nxt
    return {k: dict(v) for k, v in out.items()}


def total_variation(p: Dict, q: Dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in keys)


def formula_law(k: int, n: int, c1: float) -> Dict[Configuration, float]:
    return {cfg: spectrum_probability(cfg, k, n, c1) for cfg in enumerate_A(k, n)}


def normalise(law: Dict) -> Dict:
    total = sum(law.values())
    return {key: value / total for key, value in law.items()}


@lru_cache(maxsize=None)
def _cached_formula_law(k, n, c1):
    return formula_law(k, n, c1)


def empirical_law(samples) -> Dict:
    counts: Dict = defaultdict(int)
    for s in samples:
        counts[s] += 1
    total = len(samples)
    return {key: value / total for key, value in counts.items()}
