"""Command-line front end.

Subcommands:

  table1     reproduce the built-in reference study's efficiency table
  theory     closed-form bias/MSE/PRE from a summary-statistics JSON
  simulate   Monte Carlo study on a population CSV (theory + empirical)
  enumerate  exact moments over all C(N, n) samples vs. first-order theory
  generate   synthetic population CSV with target proportion/correlation

Exit codes: 0 success, 1 I/O, 2 validation or parse failure, 3 numerical
failure (singular system, estimator domain), 4 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import sys

from . import moments, reference, sampling
from .errors import (
    DegeneratePopulation,
    DomainError,
    DegenerateAuxiliary,
    ParseError,
    PropRatioError,
    SingularSystem,
    TooManySamples,
    UndefinedDeviation,
    UnreachableTarget,
    ValidationError,
)
from .estimators import FamilyKind, RatioExpParams, SmoothFamily
from .io import load_population_csv, load_summary_json, write_population_csv
from .moments import DesignMoments
from .population import summarize_population
from .report import PRE_FORMAT, ReportTable
from .sampling import EstimatorSpec, SyntheticSpec

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


def _t3_label(alpha: float, beta: float, a: float, b: float) -> str:
    label = f"t3({alpha:g},{beta:g})"
    if a != 1.0 or b != 0.0:
        label = f"t3({alpha:g},{beta:g};a={a:g},b={b:g})"
    return label


def _parse_t3(text: str) -> dict:
    """Parse a --t3 option like 'alpha=1,beta=0[,a=1,b=0][,q1=..,q2=..]'."""
    allowed = {"alpha", "beta", "a", "b", "q1", "q2"}
    values = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in allowed:
            raise ValidationError(f"--t3: unknown key {key!r} in {text!r}")
        try:
            values[key] = float(raw)
        except ValueError:
            raise ValidationError(f"--t3: bad value for {key!r} in {text!r}") from None
    if "alpha" not in values or "beta" not in values:
        raise ValidationError(f"--t3 needs at least alpha= and beta=, got {text!r}")
    if ("q1" in values) != ("q2" in values):
        raise ValidationError("--t3: give both q1 and q2 or neither")
    values.setdefault("a", 1.0)
    values.setdefault("b", 0.0)
    return values


def _t3_row(dm: DesignMoments, setting: dict):
    """Resolve one t3 setting: (label, params-with-weights, quad, mse)."""
    s = dm.summary
    coeffs = moments.ratio_exp_coefficients(
        setting["alpha"], setting["beta"], setting["a"], setting["b"], s.x_bar_pop
    )
    quad = moments.mse_quadratic(dm, coeffs)
    if "q1" in setting:
        q1, q2 = setting["q1"], setting["q2"]
        mse = moments.mse_at_weights(q1, q2, quad)
    else:
        weights = moments.optimal_weights(quad)
        q1, q2 = weights.q1, weights.q2
        mse = moments.min_ratio_exp_mse(quad)
    params = RatioExpParams(
        q1=q1, q2=q2, alpha=setting["alpha"], beta=setting["beta"],
        a=setting["a"], b=setting["b"],
    )
    label = _t3_label(setting["alpha"], setting["beta"], setting["a"], setting["b"])
    bias = moments.ratio_exp_bias(dm, params, coeffs)
    return label, params, quad, coeffs, bias, mse


def _emit(table: ReportTable, args, notes=()) -> None:
    text = table.render(args.format)
    print(text)
    for note in notes:
        print(note)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")


def cmd_table1(args) -> int:
    dm = reference.HOME_OWNERSHIP.to_design_moments()
    vu = moments.var_usual(dm)
    rows = [
        ("usual", 0.0, vu),
        ("t1", moments.ratio_bias(dm), moments.ratio_mse(dm)),
        ("t2", 0.0, moments.min_smooth_mse(dm)),
    ]
    for alpha, beta in reference.T3_SETTINGS:
        setting = {"alpha": alpha, "beta": beta, "a": 1.0, "b": 0.0}
        label, _, _, _, bias, mse = _t3_row(dm, setting)
        rows.append((label, bias, mse))

    table = ReportTable(
        headers=("estimator", "bias", "mse", "pre", "reference_pre", "within_tol"),
        formats={"pre": PRE_FORMAT, "reference_pre": PRE_FORMAT},
    )
    for label, bias, mse in rows:
        pre = moments.pre(vu, mse)
        ref = reference.REFERENCE_PRE[label]
        ok = abs(pre - ref) <= reference.REFERENCE_RTOL * ref
        table.add_row(label, bias, mse, pre, ref, ok)
    _emit(table, args)
    return EXIT_OK


def _census_table(t3_settings) -> ReportTable:
    table = ReportTable(
        headers=("estimator", "bias", "mse", "pre"),
        formats={"pre": PRE_FORMAT},
    )
    labels = ["usual", "t1", "t2"] + [
        _t3_label(s["alpha"], s["beta"], s["a"], s["b"]) for s in t3_settings
    ]
    for label in labels:
        table.add_row(label, 0.0, 0.0, None)
    return table


def cmd_theory(args) -> int:
    summary = load_summary_json(args.summary)
    t3_settings = [_parse_t3(text) for text in args.t3] if args.t3 else [
        {"alpha": a, "beta": b, "a": 1.0, "b": 0.0} for a, b in reference.T3_SETTINGS
    ]
    if summary.n == summary.N:
        table = _census_table(t3_settings)
        _emit(table, args, notes=("census design (n = N): no sampling error",))
        return EXIT_OK
    dm = summary.to_design_moments()
    vu = moments.var_usual(dm)
    table = ReportTable(
        headers=(
            "estimator", "bias", "mse", "pre", "beats_usual", "beats_regression",
        ),
        formats={"pre": PRE_FORMAT},
    )
    table.add_row("usual", 0.0, vu, moments.pre(vu, vu), None, None)
    table.add_row("t1", moments.ratio_bias(dm), moments.ratio_mse(dm),
                  moments.pre(vu, moments.ratio_mse(dm)), None, None)
    mse_t2 = moments.min_smooth_mse(dm)
    table.add_row("t2", 0.0, mse_t2, moments.pre(vu, mse_t2), None, None)
    for setting in t3_settings:
        label, _, quad, _, bias, mse = _t3_row(dm, setting)
        table.add_row(
            label, bias, mse, moments.pre(vu, mse),
            moments.beats_usual(dm, quad), moments.beats_regression(dm, quad),
        )
    _emit(table, args)
    return EXIT_OK


def _default_specs(dm: DesignMoments, t3_settings):
    """usual, t1, regression and t2 at their optimal constants, plus t3 rows.

    Returns (specs, theory) aligned by index; theory rows are
    (bias, mse) first-order values.
    """
    s = dm.summary
    slope = moments.optimal_regression_slope(s)
    du = moments.optimal_slope(dm)
    specs = [
        EstimatorSpec.usual(),
        EstimatorSpec.ratio(label="t1"),
        EstimatorSpec.regression(slope=slope),
        EstimatorSpec.from_family(
            SmoothFamily(FamilyKind.LINEAR_DIFFERENCE, du, s.p), label="t2-opt"
        ),
    ]
    theory = [
        (0.0, moments.var_usual(dm)),
        (moments.ratio_bias(dm), moments.ratio_mse(dm)),
        (0.0, moments.min_smooth_mse(dm)),
        (0.0, moments.min_smooth_mse(dm)),
    ]
    for setting in t3_settings:
        label, params, _, _, bias, mse = _t3_row(dm, setting)
        specs.append(EstimatorSpec.from_ratio_exp(params, label=label))
        theory.append((bias, mse))
    return specs, theory


def cmd_simulate(args) -> int:
    pop = load_population_csv(args.population)
    summary = summarize_population(pop)
    dm = DesignMoments.for_design(summary, args.n, pop.size)
    t3_settings = [_parse_t3(text) for text in args.t3] if args.t3 else [
        {"alpha": 0.0, "beta": 1.0, "a": 1.0, "b": 0.0}
    ]
    specs, theory = _default_specs(dm, t3_settings)
    report = sampling.monte_carlo(
        pop, args.n, args.reps, specs, args.seed,
        workers=args.workers, backend=args.backend,
    )
    vu = moments.var_usual(dm)
    table = ReportTable(
        headers=(
            "estimator", "theory_bias", "theory_mse", "theory_pre",
            "emp_mean", "emp_bias", "emp_mse", "emp_mse_se", "emp_pre",
        ),
        formats={"theory_pre": PRE_FORMAT, "emp_pre": PRE_FORMAT},
    )
    for (bias, mse), row in zip(theory, report.rows):
        table.add_row(
            row.label, bias, mse, moments.pre(vu, mse) if mse > 0 else None,
            row.mean, row.bias, row.mse, row.mse_se, row.pre,
        )
    _emit(
        table, args,
        notes=(f"reps={report.reps} seed={report.seed} backend={report.backend}",),
    )
    return EXIT_OK


def cmd_enumerate(args) -> int:
    pop = load_population_csv(args.population)
    summary = summarize_population(pop)
    dm = DesignMoments.for_design(summary, args.n, pop.size)
    t3_settings = [_parse_t3(text) for text in args.t3] if args.t3 else [
        {"alpha": 0.0, "beta": 1.0, "a": 1.0, "b": 0.0}
    ]
    specs, theory = _default_specs(dm, t3_settings)
    report = sampling.enumerate_exact(
        pop, args.n, specs, limit=args.limit, backend=args.backend
    )
    table = ReportTable(
        headers=(
            "estimator", "exact_mean", "exact_bias", "exact_mse",
            "theory_bias", "theory_mse", "mse_rel_gap",
        ),
    )
    for (bias, mse), row in zip(theory, report.rows):
        gap = (mse - row.mse) / row.mse if row.mse != 0.0 else None
        table.add_row(row.label, row.mean, row.bias, row.mse, bias, mse, gap)
    _emit(
        table, args,
        notes=(f"enumerated {report.sample_count} samples of size {args.n}",),
    )
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = SyntheticSpec(
        N=args.N, target_p=args.P, target_rho=args.rho, seed=args.seed,
        x_mean=args.x_mean, spread0=args.spread0, spread1=args.spread1,
    )
    pop = sampling.generate_population(spec)
    write_population_csv(args.out, pop)
    # echo from the reloaded file so the printed numbers are exactly what
    # any later command will see
    reloaded = load_population_csv(args.out)
    summary = summarize_population(reloaded)
    print(f"wrote {reloaded.size} units to {args.out}")
    print(f"achieved P = {summary.p!r}")
    print(f"achieved rho_pb = {summary.rho_pb!r}")
    print(f"achieved x_bar = {summary.x_bar_pop!r}")
    print(f"achieved c_x = {summary.c_x!r}")
    return EXIT_OK


def _add_common_output(parser):
    parser.add_argument("--format", choices=("md", "csv"), default="md",
                        help="report rendering (default: md)")
    parser.add_argument("--out", help="also write the report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propratio",
        description="Proportion estimation with an auxiliary variable under SRSWOR: "
                    "closed-form theory, exact enumeration, Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table1", help="reproduce the built-in reference efficiency table")
    _add_common_output(p)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("theory", help="closed-form bias/MSE/PRE from summary statistics")
    p.add_argument("--summary", required=True, help="summary JSON file (seven fields)")
    p.add_argument("--t3", action="append", default=[],
                   help="tier-3 setting 'alpha=A,beta=B[,a=..,b=..][,q1=..,q2=..]' (repeatable)")
    _add_common_output(p)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("simulate", help="Monte Carlo study on a population CSV")
    p.add_argument("--population", required=True, help="population CSV ('phi,x')")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--reps", type=int, required=True, help="replicate count")
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--workers", type=int, default=1, help="worker threads (default 1)")
    p.add_argument("--backend", choices=("c", "python"), default=None,
                   help="kernel backend (default: compiled when available)")
    p.add_argument("--t3", action="append", default=[],
                   help="tier-3 setting (repeatable); default alpha=0,beta=1 at optimal weights")
    _add_common_output(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("enumerate", help="exact moments over all C(N, n) samples")
    p.add_argument("--population", required=True, help="population CSV ('phi,x')")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--limit", type=int, default=sampling.DEFAULT_ENUMERATION_LIMIT,
                   help="subset-count cap (default %(default)s)")
    p.add_argument("--backend", choices=("c", "python"), default=None)
    p.add_argument("--t3", action="append", default=[])
    _add_common_output(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("generate", help="write a synthetic population CSV")
    p.add_argument("--N", type=int, required=True, help="population size")
    p.add_argument("--P", type=float, required=True, help="target proportion")
    p.add_argument("--rho", type=float, required=True, help="target point-biserial correlation")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--x-mean", type=float, default=15.0, dest="x_mean",
                   help="auxiliary mean (default %(default)s)")
    p.add_argument("--spread0", type=float, default=2.0, help="class-0 spread")
    p.add_argument("--spread1", type=float, default=2.0, help="class-1 spread")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooManySamples as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SingularSystem, DegenerateAuxiliary, DomainError, UnreachableTarget,
            ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ParseError, ValidationError, DegeneratePopulation,
            UndefinedDeviation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except PropRatioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
