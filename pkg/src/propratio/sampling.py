"""Sampling engine: SRSWOR draws, Monte Carlo studies, exact enumeration,
and synthetic populations with a controlled point-biserial correlation.

Determinism contract
--------------------
Every operation is a pure function of (inputs, seed).  Monte Carlo
replicates get independent counter-based substreams keyed on (seed,
replicate index) and are accumulated over a fixed chunk grid, so reports
are bit-identical no matter how many worker threads evaluate the chunks.
Exact enumeration visits all C(N, n) subsets in lexicographic order with
compensated summation, which is what makes the 1e-12 oracle tolerances
attainable.

A replicate (or subset) on which an estimator leaves its domain aborts
the whole run with the offender identified -- silently skipping it would
bias the empirical MSE.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from math import comb, fsum

import numpy as np

from .errors import (
    EstimatorDomainError,
    InvalidDesign,
    TooManySamples,
    UndefinedDeviation,
    UnreachableTarget,
    ValidationError,
)
from .estimators import FamilyKind, RatioExpParams, SmoothFamily
from .kernels import get_backend
from .population import Population, PopulationUnit
from .rng import sample_indices, substream_state

__all__ = [
    "EstimatorKind",
    "EstimatorSpec",
    "EstimatorStats",
    "EmpiricalReport",
    "ExactReport",
    "DeviationMoments",
    "SyntheticSpec",
    "draw_srswor",
    "monte_carlo",
    "enumerate_exact",
    "exact_deviation_moments",
    "generate_population",
    "DEFAULT_ENUMERATION_LIMIT",
    "CHUNK_SIZE",
]

DEFAULT_ENUMERATION_LIMIT = 2_000_000

# Replicates per accumulation chunk.  Part of the determinism contract for
# the compiled backend (its per-chunk Kahan sums depend on the grid), so
# reports are reproducible given (seed, chunk_size, backend).
CHUNK_SIZE = 4096

_FAMILY_CODE = {
    FamilyKind.LINEAR_DIFFERENCE: 2.0,
    FamilyKind.POWER_RATIO: 3.0,
    FamilyKind.EXPONENTIAL: 4.0,
}


class EstimatorKind(str, Enum):
    USUAL = "usual"
    RATIO = "ratio"
    SMOOTH = "smooth"
    RATIO_EXP = "ratio-exp"
    REGRESSION = "regression"


@dataclass(frozen=True)
class EstimatorSpec:
    """One estimator to evaluate per sample, with its parameters."""

    kind: EstimatorKind
    label: str
    smooth: SmoothFamily | None = None
    ratio_exp: RatioExpParams | None = None
    slope: float | None = None

    def __post_init__(self):
        required = {
            EstimatorKind.SMOOTH: self.smooth,
            EstimatorKind.RATIO_EXP: self.ratio_exp,
            EstimatorKind.REGRESSION: self.slope,
        }
        if self.kind in required and required[self.kind] is None:
            raise ValidationError(f"{self.kind.value} spec needs its parameters")

    @classmethod
    def usual(cls, label: str = "usual") -> "EstimatorSpec":
        return cls(EstimatorKind.USUAL, label)

    @classmethod
    def ratio(cls, label: str = "ratio") -> "EstimatorSpec":
        return cls(EstimatorKind.RATIO, label)

    @classmethod
    def from_family(cls, family: SmoothFamily, label: str | None = None) -> "EstimatorSpec":
        if label is None:
            label = f"smooth({family.kind.value}, {family.shape:g})"
        return cls(EstimatorKind.SMOOTH, label, smooth=family)

    @classmethod
    def from_ratio_exp(cls, params: RatioExpParams, label: str | None = None) -> "EstimatorSpec":
        if label is None:
            label = f"ratio-exp(alpha={params.alpha:g}, beta={params.beta:g})"
        return cls(EstimatorKind.RATIO_EXP, label, ratio_exp=params)

    @classmethod
    def regression(cls, slope: float, label: str = "regression") -> "EstimatorSpec":
        return cls(EstimatorKind.REGRESSION, label, slope=slope)

    def to_row(self) -> np.ndarray:
        row = np.zeros(7)
        if self.kind is EstimatorKind.USUAL:
            row[0] = 0.0
        elif self.kind is EstimatorKind.RATIO:
            row[0] = 1.0
        elif self.kind is EstimatorKind.SMOOTH:
            row[0] = _FAMILY_CODE[self.smooth.kind]
            row[1] = self.smooth.shape
        elif self.kind is EstimatorKind.RATIO_EXP:
            pr = self.ratio_exp
            row[0] = 5.0
            row[1:7] = (pr.q1, pr.q2, pr.alpha, pr.beta, pr.a, pr.b)
        elif self.kind is EstimatorKind.REGRESSION:
            row[0] = 6.0
            row[1] = self.slope
        return row


@dataclass(frozen=True)
class EstimatorStats:
    """Per-estimator results of a simulation or enumeration run.

    mse_se is the Monte Carlo standard error of the MSE estimate (None
    for exact runs); pre is the percent relative efficiency against the
    usual estimator in the same run (None when that MSE is zero).
    """

    label: str
    mean: float
    bias: float
    mse: float
    mse_se: float | None = None
    pre: float | None = None


@dataclass(frozen=True)
class EmpiricalReport:
    """Monte Carlo study results; deterministic given (seed, chunk grid)."""

    rows: tuple[EstimatorStats, ...]
    reps: int
    seed: int
    n: int
    population_size: int
    backend: str


@dataclass(frozen=True)
class ExactReport:
    """Exact moments of each estimator over all C(N, n) samples."""

    rows: tuple[EstimatorStats, ...]
    sample_count: int
    n: int
    population_size: int
    backend: str


@dataclass(frozen=True)
class DeviationMoments:
    """Exact SRSWOR moments of (e_phi, e_x) and of p over all subsets."""

    e_phi_mean: float
    e_x_mean: float
    e_phi_sq_mean: float
    e_x_sq_mean: float
    cross_mean: float
    p_mean: float
    p_mse: float
    sample_count: int


def _check_design(pop: Population, n: int):
    if n < 1 or n > pop.size:
        raise InvalidDesign(f"need 1 <= n <= N={pop.size}, got n={n}")


def _spec_matrix(specs, x_mean: float) -> np.ndarray:
    """Validate population-level preconditions and encode specs as rows."""
    if not specs:
        raise ValidationError("at least one estimator spec is required")
    for spec in specs:
        if spec.kind is EstimatorKind.SMOOTH and x_mean <= 0.0:
            raise ValidationError(
                f"smooth-family estimators need a positive auxiliary mean, got {x_mean}"
            )
        if spec.kind is EstimatorKind.RATIO_EXP:
            pr = spec.ratio_exp
            if pr.a * x_mean + pr.b <= 0.0:
                raise ValidationError(
                    f"ratio-exp estimator needs a*X_bar + b > 0, got {pr.a * x_mean + pr.b}"
                )
    return np.vstack([spec.to_row() for spec in specs])


def draw_srswor(pop: Population, n: int, seed: int) -> list[PopulationUnit]:
    """Draw one SRSWOR sample of size n; every subset equally likely.

    Uses substream 0 of the seed, so the drawn units coincide with
    replicate 0 of monte_carlo under the same seed.
    """
    _check_design(pop, n)
    indices, _ = sample_indices(pop.size, n, substream_state(seed, 0))
    return [pop.units[i] for i in indices]


def _chunk_grid(reps: int, chunk_size: int):
    return [(start, min(start + chunk_size, reps)) for start in range(0, reps, chunk_size)]


def monte_carlo(
    pop: Population,
    n: int,
    reps: int,
    specs,
    seed: int,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
    backend: str | None = None,
) -> EmpiricalReport:
    """Replicate SRSWOR draws and accumulate empirical estimator moments.

    The usual estimator is always evaluated (appended when absent) so
    every row gets an empirical PRE against it.  Raises
    EstimatorDomainError, identifying the replicate, if any estimator
    leaves its domain on any draw.
    """
    _check_design(pop, n)
    if reps < 1:
        raise ValidationError(f"reps must be >= 1, got {reps}")
    if workers < 1 or chunk_size < 1:
        raise ValidationError("workers and chunk_size must be >= 1")
    specs = list(specs)
    if not specs:
        raise ValidationError("at least one estimator spec is required")
    usual_idx = next(
        (i for i, s in enumerate(specs) if s.kind is EstimatorKind.USUAL), None
    )
    if usual_idx is None:
        specs.append(EstimatorSpec.usual())
        usual_idx = len(specs) - 1
    p_pop = pop.proportion
    x_mean = pop.x_mean
    est = _spec_matrix(specs, x_mean)
    kernel = get_backend(backend)
    phi, x = pop.phi_array, pop.x_array
    grid = _chunk_grid(reps, chunk_size)

    def run_chunk(bounds):
        start, stop = bounds
        return kernel.mc_chunk(phi, x, n, est, seed, start, stop, p_pop, x_mean)

    if workers == 1 or len(grid) == 1:
        results = [run_chunk(bounds) for bounds in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_chunk, grid))

    for partials, err_code, err_rep, err_est in results:  # fixed chunk order
        if err_code != 0:
            raise EstimatorDomainError(
                "estimator left its domain during simulation",
                label=specs[err_est].label,
                replicate=err_rep,
            )

    n_est = est.shape[0]
    totals = np.empty((n_est, 3))
    for e in range(n_est):
        for k in range(3):
            totals[e, k] = fsum(res[0][e, k] for res in results)

    mse_usual = totals[usual_idx, 1] / reps
    rows = []
    for e, spec in enumerate(specs):
        mean = totals[e, 0] / reps
        mse = totals[e, 1] / reps
        fourth = totals[e, 2] / reps
        mse_se = math.sqrt(max(fourth - mse * mse, 0.0) / reps)
        rows.append(
            EstimatorStats(
                label=spec.label,
                mean=mean,
                bias=mean - p_pop,
                mse=mse,
                mse_se=mse_se,
                pre=(100.0 * mse_usual / mse) if mse > 0.0 else None,
            )
        )
    return EmpiricalReport(
        rows=tuple(rows),
        reps=reps,
        seed=seed,
        n=n,
        population_size=pop.size,
        backend=kernel.BACKEND_NAME,
    )


def _check_enumeration_size(pop: Population, n: int, limit: int) -> int:
    count = comb(pop.size, n)
    if count > limit:
        raise TooManySamples(
            f"C({pop.size}, {n}) = {count} exceeds the enumeration limit {limit}"
        )
    return count


def enumerate_exact(
    pop: Population,
    n: int,
    specs,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    backend: str | None = None,
) -> ExactReport:
    """Exact expectation/bias/MSE of each estimator over all C(N, n) samples."""
    _check_design(pop, n)
    expected = _check_enumeration_size(pop, n, limit)
    specs = list(specs)
    if not specs:
        raise ValidationError("at least one estimator spec is required")
    usual_idx = next(
        (i for i, s in enumerate(specs) if s.kind is EstimatorKind.USUAL), None
    )
    if usual_idx is None:
        specs.append(EstimatorSpec.usual())
        usual_idx = len(specs) - 1
    p_pop = pop.proportion
    x_mean = pop.x_mean
    est = _spec_matrix(specs, x_mean)
    kernel = get_backend(backend)
    partials, count, err_code, err_rank, err_est = kernel.enum_exact(
        pop.phi_array, pop.x_array, n, est, p_pop, x_mean
    )
    if err_code != 0:
        raise EstimatorDomainError(
            "estimator left its domain during enumeration",
            label=specs[err_est].label,
            subset_rank=err_rank,
        )
    assert count == expected
    mse_usual = partials[usual_idx, 1] / count
    rows = []
    for e, spec in enumerate(specs):
        mean = partials[e, 0] / count
        mse = partials[e, 1] / count
        rows.append(
            EstimatorStats(
                label=spec.label,
                mean=mean,
                bias=mean - p_pop,
                mse=mse,
                pre=(100.0 * mse_usual / mse) if mse > 0.0 else None,
            )
        )
    return ExactReport(
        rows=tuple(rows),
        sample_count=count,
        n=n,
        population_size=pop.size,
        backend=kernel.BACKEND_NAME,
    )


def exact_deviation_moments(
    pop: Population,
    n: int,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    backend: str | None = None,
) -> DeviationMoments:
    """Exact moments of (e_phi, e_x) and of p over every size-n subset.

    This is the oracle for the design-moment identities E[e_phi] =
    E[e_x] = 0, E[e_phi^2] = f C_p^2, E[e_x^2] = f C_x^2,
    E[e_phi e_x] = f rho C_p C_x, E[p] = P and Var(p) = f P^2 C_p^2.
    """
    _check_design(pop, n)
    _check_enumeration_size(pop, n, limit)
    p_pop = pop.proportion
    x_mean = pop.x_mean
    if p_pop <= 0.0 or x_mean == 0.0:
        raise UndefinedDeviation("deviation moments need P > 0 and nonzero auxiliary mean")
    kernel = get_backend(backend)
    sums, count = kernel.enum_moments(pop.phi_array, pop.x_array, n, p_pop, x_mean)
    return DeviationMoments(
        e_phi_mean=sums[0] / count,
        e_x_mean=sums[1] / count,
        e_phi_sq_mean=sums[2] / count,
        e_x_sq_mean=sums[3] / count,
        cross_mean=sums[4] / count,
        p_mean=sums[5] / count,
        p_mse=sums[6] / count,
        sample_count=count,
    )


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a synthetic population with a target correlation.

    The auxiliary variable follows a two-class Gaussian model: per-class
    draws with the given spreads are centered within each class, and the
    class-mean separation is then solved analytically so the realized
    point-biserial correlation equals target_rho (up to float rounding).
    x_mean anchors the overall auxiliary mean.
    """

    N: int
    target_p: float
    target_rho: float
    seed: int
    x_model: str = "gaussian-mixture"
    x_mean: float = 15.0
    spread0: float = 2.0
    spread1: float = 2.0

    def __post_init__(self):
        if self.N < 4:
            raise ValidationError(f"N must be >= 4, got {self.N}")
        if not 0.0 < self.target_p < 1.0:
            raise ValidationError(f"target_p must lie in (0, 1), got {self.target_p}")
        if not abs(self.target_rho) < 1.0:
            raise ValidationError(f"|target_rho| must be < 1, got {self.target_rho}")
        if self.x_model != "gaussian-mixture":
            raise ValidationError(f"unknown x_model {self.x_model!r}")
        if self.spread0 <= 0.0 or self.spread1 <= 0.0:
            raise ValidationError("class spreads must be positive")
        if self.x_mean <= 0.0:
            raise ValidationError(f"x_mean must be positive, got {self.x_mean}")


_GENERATOR_ATTEMPTS = 8
_RHO_TOLERANCE = 0.05


def generate_population(spec: SyntheticSpec) -> Population:
    """Generate a population hitting target_p within 1/N and target_rho
    within float rounding (far inside the contractual 0.05).

    Deterministic given spec.seed.  Raises UnreachableTarget if the class
    split degenerates or the (single-shot analytic) construction misses
    the correlation tolerance after a bounded number of redraws.
    """
    n_pop = spec.N
    n_ones = round(n_pop * spec.target_p)
    if n_ones < 1 or n_ones > n_pop - 1:
        raise UnreachableTarget(
            f"target_p={spec.target_p} rounds to a degenerate class split for N={n_pop}"
        )
    rng = np.random.default_rng(spec.seed)
    p_hat = n_ones / n_pop
    s_p = math.sqrt(n_pop * p_hat * (1.0 - p_hat) / (n_pop - 1))
    for _ in range(_GENERATOR_ATTEMPTS):
        phi = np.zeros(n_pop, dtype=np.int64)
        phi[rng.permutation(n_pop)[:n_ones]] = 1
        noise = np.where(
            phi == 1,
            rng.normal(0.0, spec.spread1, n_pop),
            rng.normal(0.0, spec.spread0, n_pop),
        )
        # center the noise within each class: this zeroes its covariance
        # with phi exactly, so the separation below is exact, not tuned
        noise[phi == 1] -= noise[phi == 1].mean()
        noise[phi == 0] -= noise[phi == 0].mean()
        s_w_sq = float(np.sum(noise * noise)) / (n_pop - 1)
        if s_w_sq <= 0.0:
            continue
        separation = (
            math.sqrt(s_w_sq)
            * spec.target_rho
            / (s_p * math.sqrt(1.0 - spec.target_rho**2))
        )
        x = spec.x_mean + (phi - p_hat) * separation + noise
        pop = Population.from_values(phi.tolist(), x.tolist())
        achieved = _achieved_rho(phi, x)
        if abs(achieved - spec.target_rho) <= _RHO_TOLERANCE:
            return pop
    raise UnreachableTarget(
        f"could not reach rho={spec.target_rho} within {_RHO_TOLERANCE} "
        f"after {_GENERATOR_ATTEMPTS} attempts"
    )


def _achieved_rho(phi: np.ndarray, x: np.ndarray) -> float:
    phi_c = phi - phi.mean()
    x_c = x - x.mean()
    return float(np.sum(phi_c * x_c) / math.sqrt(np.sum(phi_c**2) * np.sum(x_c**2)))
