#!/usr/bin/env python3
"""Benchmark the compiled sampling kernels against the pure-Python backend.

Times the two hot loops -- Monte Carlo replication and exact subset
enumeration -- on a mid-sized synthetic population and prints a speedup
table.  Both backends produce statistically identical results (asserted
here as a sanity check), so the only difference is wall time.

Run after an editable install:

    python benchmarks/bench_kernels.py
"""

import math
import time

from propratio import (
    EstimatorSpec,
    RatioExpParams,
    SyntheticSpec,
    available_backends,
    enumerate_exact,
    generate_population,
    monte_carlo,
    optimal_regression_slope,
    summarize_population,
)

MC_POP = SyntheticSpec(N=500, target_p=0.5, target_rho=0.9, seed=2024)
MC_N = 50
MC_REPS = 200_000
ENUM_POP = SyntheticSpec(N=26, target_p=0.5, target_rho=0.8, seed=7)
ENUM_N = 6  # C(26, 6) = 230230 subsets
REPEATS = 3


def best_of(repeats, fn):
    times = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main():
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "c" not in backends:
        print("compiled backend not built; timing the pure backend only")

    pop = generate_population(MC_POP)
    summary = summarize_population(pop)
    specs = [
        EstimatorSpec.usual(),
        EstimatorSpec.ratio(label="t1"),
        EstimatorSpec.regression(optimal_regression_slope(summary)),
        EstimatorSpec.from_ratio_exp(
            RatioExpParams(q1=1.0, q2=0.05, alpha=0.0, beta=1.0), label="t3"
        ),
    ]
    enum_pop = generate_population(ENUM_POP)
    enum_specs = [EstimatorSpec.usual(), EstimatorSpec.ratio(label="t1")]

    tasks = {
        "monte_carlo 200k reps (N=500, n=50)": lambda backend: monte_carlo(
            pop, MC_N, MC_REPS, specs, seed=314159, backend=backend
        ),
        "monte_carlo same, 8 threads": lambda backend: monte_carlo(
            pop, MC_N, MC_REPS, specs, seed=314159, workers=8, backend=backend
        ),
        "enumerate C(26,6)=230230 subsets": lambda backend: enumerate_exact(
            enum_pop, ENUM_N, enum_specs, backend=backend
        ),
    }

    width = max(len(name) for name in tasks)
    print(f"\n{'task'.ljust(width)}  {'python':>10}  {'c':>10}  {'speedup':>8}")
    for name, task in tasks.items():
        t_py, r_py = best_of(REPEATS, lambda: task("python"))
        line = f"{name.ljust(width)}  {t_py:>9.3f}s"
        if "c" in backends:
            t_c, r_c = best_of(REPEATS, lambda: task("c"))
            for a, b in zip(r_py.rows, r_c.rows):
                assert math.isclose(a.mse, b.mse, rel_tol=1e-11), (name, a.label)
            line += f"  {t_c:>9.3f}s  {t_py / t_c:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
