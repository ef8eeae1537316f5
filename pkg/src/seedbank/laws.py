"""Limit laws of the stopping-time functionals and a KS distance.

==============  =========================================  =====================
law             CDF                                        limit of
==============  =========================================  =====================
``Beta2c1``     ``x**(2 c1)`` on ``[0, 1]``                ``N(gamma) / n``
``GammaLaw``    ``1 - (2 / (2 + x))**(2 c1)``, ``x >= 0``  ``n * gamma``
``Frechet``     ``exp(-4 c1 c2 / x)``, ``x > 0``           ``N(theta) / log n``
``Exponential`` ``1 - exp(-2 c1 c2 x)``                    ``theta * log n``
==============  =========================================  =====================
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RngSpec, as_generator


class LimitLaw:
    """Continuous law with closed-form CDF and quantile."""

    def cdf(self, x):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def sample(self, size, rng=RngSpec()):
        return self.quantile(as_generator(rng).random(size))

    def median(self) -> float:
        return float(self.quantile(0.5))


@dataclass(frozen=True)
class Beta2c1(LimitLaw):
    """``Beta(2 c1, 1)``."""

    c1: float

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return x ** (2 * self.c1)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0) & (x <= 1)
        safe = np.where(inside, x, 1.0)
        return np.where(inside, 2 * self.c1 * safe ** (2 * self.c1 - 1), 0.0)

    def quantile(self, p):
        return np.asarray(p, dtype=float) ** (1.0 / (2 * self.c1))


@dataclass(frozen=True)
class GammaLaw(LimitLaw):
    """Law of ``2 (1 - Y) / Y`` with ``Y ~ Beta(2 c1, 1)``; density
    ``c1 (2 / (2 + x))**(2 c1 + 1)``."""

    c1: float

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return 1.0 - (2.0 / (2.0 + x)) ** (2 * self.c1)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.maximum(x, 0.0)
        return np.where(x >= 0, self.c1 * (2.0 / (2.0 + safe)) ** (2 * self.c1 + 1), 0.0)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            return 2.0 * ((1.0 - p) ** (-1.0 / (2 * self.c1)) - 1.0)

    def sample_via_beta(self, size, rng=RngSpec()):
        y = Beta2c1(self.c1).sample(size, rng)
        return 2.0 * (1.0 - y) / y


@dataclass(frozen=True)
class Frechet(LimitLaw):
    """Shape 1, scale ``4 c1 c2``."""

    c1: float
    c2: float

    @property
    def scale(self) -> float:
        return 4 * self.c1 * self.c2

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0, x, 1.0)
        return np.where(x > 0, np.exp(-self.scale / safe), 0.0)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0, x, 1.0)
        return np.where(x > 0, self.scale / safe**2 * np.exp(-self.scale / safe), 0.0)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            return -self.scale / np.log(p)


@dataclass(frozen=True)
class Exponential(LimitLaw):
    """Rate ``2 c1 c2``."""

    c1: float
    c2: float

    @property
    def rate(self) -> float:
        return 2 * self.c1 * self.c2

    def cdf(self, x):
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        return -np.expm1(-self.rate * x)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def quantile(self, p):
        return -np.log1p(-np.asarray(p, dtype=float)) / self.rate


def ks_distance(samples, law: LimitLaw) -> float:
    """``sup_x |F_emp(x) - F(x)|`` evaluated at the sorted samples.

    Ties are handled correctly: inside a run of equal values the largest
    ``i/n`` and the smallest ``(i-1)/n`` bound the jump of the ECDF.
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size == 0:
        raise ValueError("ks_distance needs at least one sample")
    f = law.cdf(x)
    m = x.size
    upper = np.arange(1, m + 1) / m - f
    lower = f - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))
