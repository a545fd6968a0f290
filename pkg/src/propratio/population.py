"""Finite populations with a binary attribute and a quantitative auxiliary.

A population is an ordered list of units (phi, x) with phi in {0, 1} and x
a finite real.  The summary statistics computed here (with the N-1 divisor
throughout) feed every closed-form bias/MSE expression in the moment
engine:

    P      proportion of units with phi = 1
    X_bar  mean of the auxiliary variable
    S_p^2  attribute variance         sum(phi_i - P)^2 / (N-1)
    S_x^2  auxiliary variance         sum(x_i - X_bar)^2 / (N-1)
    S_px   attribute-auxiliary covariance
    rho_pb point-biserial correlation S_px / (S_p * S_x)
    C_p    coefficient of variation of the attribute, S_p / P
    C_x    coefficient of variation of the auxiliary, S_x / X_bar

All sums use math.fsum (exactly rounded), which makes every summary field
invariant under permutation of the unit order, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegeneratePopulation,
    EmptyPopulation,
    EmptySample,
    InvalidDesign,
    UndefinedDeviation,
    ValidationError,
)

__all__ = [
    "PopulationUnit",
    "Population",
    "PopulationSummary",
    "SampleSummary",
    "SampleDeviation",
    "summarize_population",
    "summarize_sample",
    "fpc",
    "sample_deviation",
]


@dataclass(frozen=True)
class PopulationUnit:
    """One unit: binary attribute indicator and auxiliary measurement."""

    phi: int
    x: float

    def __post_init__(self):
        if self.phi not in (0, 1):
            raise ValidationError(f"phi must be 0 or 1, got {self.phi!r}")
        if not math.isfinite(self.x):
            raise ValidationError(f"x must be finite, got {self.x!r}")


@dataclass(frozen=True)
class Population:
    """Ordered finite population of at least two units."""

    units: tuple[PopulationUnit, ...]

    def __post_init__(self):
        units = tuple(self.units)
        object.__setattr__(self, "units", units)
        if len(units) < 2:
            raise EmptyPopulation(f"population needs at least 2 units, got {len(units)}")

    @classmethod
    def from_values(cls, phi, x) -> "Population":
        phi = list(phi)
        x = list(x)
        if len(phi) != len(x):
            raise ValidationError(f"phi and x lengths differ: {len(phi)} vs {len(x)}")
        return cls(tuple(PopulationUnit(int(p), float(v)) for p, v in zip(phi, x)))

    @property
    def size(self) -> int:
        return len(self.units)

    @property
    def attribute_total(self) -> int:
        return sum(u.phi for u in self.units)

    @property
    def nondegenerate(self) -> bool:
        """True iff both variables actually vary (summary statistics exist)."""
        a = self.attribute_total
        xs = [u.x for u in self.units]
        return 0 < a < self.size and min(xs) < max(xs)

    @cached_property
    def phi_array(self) -> np.ndarray:
        arr = np.array([u.phi for u in self.units], dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def x_array(self) -> np.ndarray:
        arr = np.array([u.x for u in self.units], dtype=np.float64)
        arr.setflags(write=False)
        return arr

    @property
    def proportion(self) -> float:
        return self.attribute_total / self.size

    @property
    def x_mean(self) -> float:
        return math.fsum(u.x for u in self.units) / self.size


@dataclass(frozen=True)
class PopulationSummary:
    """Population-level statistics consumed by the closed-form theory."""

    p: float
    x_bar_pop: float
    s_p_sq: float
    s_x_sq: float
    s_phix: float
    rho_pb: float
    c_p: float
    c_x: float

    @classmethod
    def from_stats(cls, p, x_bar_pop, rho_pb, c_p, c_x) -> "PopulationSummary":
        """Build a summary from the five externally supplied statistics.

        Used for studies where only published summary values are
        available; the variance/covariance fields are reconstructed from
        the coefficients of variation.  No binary-variance identity is
        enforced here (published inputs are typically rounded).
        """
        if not 0.0 < p < 1.0:
            raise ValidationError(f"P must lie in (0, 1), got {p}")
        if x_bar_pop <= 0.0:
            raise ValidationError(f"auxiliary mean must be positive, got {x_bar_pop}")
        if c_p <= 0.0 or c_x <= 0.0:
            raise ValidationError("coefficients of variation must be positive")
        if abs(rho_pb) > 1.0:
            raise ValidationError(f"|rho_pb| must be <= 1, got {rho_pb}")
        s_p = c_p * p
        s_x = c_x * x_bar_pop
        return cls(
            p=p,
            x_bar_pop=x_bar_pop,
            s_p_sq=s_p * s_p,
            s_x_sq=s_x * s_x,
            s_phix=rho_pb * s_p * s_x,
            rho_pb=rho_pb,
            c_p=c_p,
            c_x=c_x,
        )


@dataclass(frozen=True)
class SampleSummary:
    """Sample proportion and auxiliary mean for n drawn units."""

    p: float
    x_bar: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"sample size must be >= 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError(f"sample proportion must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class SampleDeviation:
    """Relative deviations e_phi = (p-P)/P and e_x = (x_bar-X_bar)/X_bar."""

    e_phi: float
    e_x: float


def summarize_population(pop: Population) -> PopulationSummary:
    """Compute the population summary statistics (N-1 divisor).

    Raises EmptyPopulation for N < 2 and DegeneratePopulation when the
    attribute or the auxiliary variable is constant, or the auxiliary
    mean is not positive -- every downstream formula divides by S_p, S_x,
    P or X_bar, so such populations are rejected here instead of
    producing NaN later.
    """
    n_pop = pop.size
    if n_pop < 2:
        raise EmptyPopulation(f"population needs at least 2 units, got {n_pop}")
    a = pop.attribute_total
    if a == 0 or a == n_pop:
        raise DegeneratePopulation("attribute is constant (all phi equal)")
    xs = [u.x for u in pop.units]
    if min(xs) == max(xs):
        raise DegeneratePopulation("auxiliary variable is constant")
    p = a / n_pop
    x_bar = math.fsum(xs) / n_pop
    if x_bar <= 0.0:
        raise DegeneratePopulation(
            f"auxiliary mean must be positive for ratio estimation, got {x_bar}"
        )
    s_p_sq = math.fsum((u.phi - p) ** 2 for u in pop.units) / (n_pop - 1)
    s_x_sq = math.fsum((v - x_bar) ** 2 for v in xs) / (n_pop - 1)
    s_phix = (math.fsum(u.phi * u.x for u in pop.units) - n_pop * p * x_bar) / (n_pop - 1)
    s_p = math.sqrt(s_p_sq)
    s_x = math.sqrt(s_x_sq)
    return PopulationSummary(
        p=p,
        x_bar_pop=x_bar,
        s_p_sq=s_p_sq,
        s_x_sq=s_x_sq,
        s_phix=s_phix,
        rho_pb=s_phix / (s_p * s_x),
        c_p=s_p / p,
        c_x=s_x / x_bar,
    )


def summarize_sample(units) -> SampleSummary:
    """Sample proportion and auxiliary mean of a drawn unit list."""
    units = list(units)
    if not units:
        raise EmptySample("cannot summarize an empty sample")
    n = len(units)
    a = sum(u.phi for u in units)
    x_bar = math.fsum(u.x for u in units) / n
    return SampleSummary(p=a / n, x_bar=x_bar, n=n)


def fpc(n: int, n_pop: int) -> float:
    """Finite-population factor f = 1/n - 1/N.

    Evaluated as (N - n) / (n * N), a single rounding, so exact rational
    values like 29/440 survive to the last bit.
    """
    if n < 1 or n > n_pop:
        raise InvalidDesign(f"need 1 <= n <= N, got n={n}, N={n_pop}")
    return (n_pop - n) / (n * n_pop)


def sample_deviation(summary: SampleSummary, pop_summary: PopulationSummary) -> SampleDeviation:
    """Relative deviations of a sample from the population values."""
    if pop_summary.p <= 0.0 or pop_summary.x_bar_pop == 0.0:
        raise UndefinedDeviation("deviations need P > 0 and nonzero auxiliary mean")
    return SampleDeviation(
        e_phi=(summary.p - pop_summary.p) / pop_summary.p,
        e_x=(summary.x_bar - pop_summary.x_bar_pop) / pop_summary.x_bar_pop,
    )
