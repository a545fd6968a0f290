"""Shared builders for randomized and oracle test inputs."""

import numpy as np

from propratio import DesignMoments, Population, PopulationSummary


def relerr(got, expected):
    return abs(got - expected) / max(abs(expected), 1e-300)


def random_population(rng, size, p=0.45, low=5.0, high=25.0) -> Population:
    """A nondegenerate population with positive auxiliary values."""
    while True:
        phi = (rng.random(size) < p).astype(int)
        if 0 < phi.sum() < size:
            break
    x = rng.uniform(low, high, size)
    return Population.from_values(phi.tolist(), x.tolist())


def oracle_designs() -> list[tuple[Population, int]]:
    """Small fixture designs for the exact-enumeration moment oracle.

    Population sizes 6..30 with sample sizes 2..6; the two largest are
    generated (deterministically) rather than spelled out.
    """
    rng = np.random.default_rng(20240817)
    return [
        (Population.from_values([1, 0, 0, 1, 0, 1], [3.2, 1.1, 2.0, 4.5, 1.7, 3.9]), 2),
        (
            Population.from_values(
                [1, 1, 0, 0, 1, 0, 0, 1], [5.5, 6.1, 2.2, 3.3, 5.0, 2.8, 3.9, 6.6]
            ),
            3,
        ),
        (
            Population.from_values(
                [1, 0, 1, 0, 1, 1, 0, 0, 1, 0, 1, 1],
                [2.4, 1.1, 3.0, 0.9, 2.2, 2.9, 1.3, 0.8, 2.0, 1.5, 2.7, 3.3],
            ),
            4,
        ),
        (random_population(rng, 21), 5),
        (random_population(rng, 30), 6),
    ]


def random_design(rng) -> DesignMoments:
    """A nondegenerate design with moderate statistics (well-conditioned)."""
    summary = PopulationSummary.from_stats(
        p=rng.uniform(0.05, 0.95),
        x_bar_pop=rng.uniform(1.0, 30.0),
        rho_pb=rng.uniform(-0.95, 0.95),
        c_p=rng.uniform(0.1, 1.5),
        c_x=rng.uniform(0.05, 0.5),
    )
    return DesignMoments(f=rng.uniform(0.005, 0.2), summary=summary)


def random_t3_setting(rng) -> dict:
    return {
        "alpha": rng.uniform(-2.0, 2.0),
        "beta": rng.uniform(-2.0, 2.0),
        "a": rng.uniform(0.5, 2.0),
        "b": rng.uniform(0.0, 5.0),
    }
