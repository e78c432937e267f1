"""Command-line surface tying the experiments together.

Subcommands: simulate, rank, sweep, estimate, validate. Flag values
override config-file values; defaults mirror the main experimental setup
(N=1000, M=500, K=5, R=100, rho1=0.8, rho2=0.6, sigma_eta=0.6).
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .core import MetricKind
from .dataio import (DEFAULT_BASE_SIGMA_GRID, DEFAULT_SIGMA_ETA_GRID,
                     ReportRow, RunConfig, load_bench_dataset, load_run_config,
                     write_report, write_sweep_csv)
from .errors import AuxevalError
from .estimate import EstimateReport, naive_estimate, one_step_crossfit, one_step_fixed
from .ranking import run_ranking_experiment, sweep
from .simulate import child_stream, gen_sim_dataset

USAGE_ERROR = 2
CONTRACT_ERROR = 1


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON run-config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m-samples", type=int, dest="m_samples")
    p.add_argument("--folds", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--level", type=float)
    p.add_argument("--out", type=Path)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auxeval",
        description="Evaluation-metric estimation with auxiliary pairwise-comparison signals")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one simulated dataset, naive vs one-step report")
    _add_common_flags(p)

    p = sub.add_parser("rank", help="repeated-trial ranking experiment")
    _add_common_flags(p)

    p = sub.add_parser("sweep", help="ranking experiment across a parameter grid")
    _add_common_flags(p)
    p.add_argument("--axis", choices=("base_sigma", "sigma_eta"))
    p.add_argument("--grid", type=str, help="comma-separated grid values")

    p = sub.add_parser("estimate", help="one-step estimation on a benchmark JSONL file")
    _add_common_flags(p)
    p.add_argument("input", type=Path, help="benchmark JSONL file")
    p.add_argument("--gt", type=float, help="ground-truth fraction for the report row")
    p.add_argument("--model", type=str, help="model name for the report row")

    p = sub.add_parser("validate", help="check a benchmark JSONL file")
    p.add_argument("input", type=Path)

    return parser


def _resolve_config(args) -> RunConfig:
    config = load_run_config(args.config) if getattr(args, "config", None) else RunConfig()
    overrides = {}
    for flag, field in (("seed", "seed"), ("n", "n"), ("m_samples", "m"),
                        ("folds", "folds"), ("trials", "trials"), ("level", "level")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if getattr(args, "axis", None):
        overrides["axis"] = args.axis
    if getattr(args, "grid", None):
        overrides["grid"] = tuple(float(tok) for tok in args.grid.split(","))
    if getattr(args, "out", None):
        overrides["out"] = str(args.out)
    return dataclasses.replace(config, **overrides) if overrides else config


def _print_report(report: EstimateReport) -> None:
    print(f"method={report.method} theta_hat={report.theta_hat:.4f} "
          f"theta_hat_clamped={report.theta_hat_clamped:.4f} "
          f"std_error={report.std_error:.4f} "
          f"ci=[{report.ci[0]:.4f}, {report.ci[1]:.4f}] "
          f"n={report.n} m={report.m} k={report.k}")


def _cmd_simulate(args) -> int:
    cfg = _resolve_config(args)
    sim = cfg.sim_config()
    dataset = gen_sim_dataset(sim, 0, child_stream(sim.seed, 0, 0, 0))
    phis = dataset.phi(MetricKind.SQUARED_ERROR)
    _print_report(naive_estimate(phis, cfg.level, metric=MetricKind.SQUARED_ERROR))
    report, _ = one_step_crossfit(dataset, MetricKind.SQUARED_ERROR, k=cfg.folds,
                                  level=cfg.level,
                                  stream=child_stream(sim.seed, 0, 0, 1))
    _print_report(report)
    return 0


def _cmd_rank(args) -> int:
    cfg = _resolve_config(args)
    summaries = run_ranking_experiment(cfg.sim_config(), folds=cfg.folds)
    for method in ("naive", "one_step"):
        s = summaries[method]
        print(f"method={method} trials={s.trials} exact_match={s.exact_match:.4f} "
              f"kendall_mean={s.kendall_mean:.4f}")
    if cfg.out:
        write_sweep_csv("none", [summaries], cfg.out)
        print(f"wrote {cfg.out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _resolve_config(args)
    grid = cfg.grid or (DEFAULT_BASE_SIGMA_GRID if cfg.axis == "base_sigma"
                        else DEFAULT_SIGMA_ETA_GRID)
    points = sweep(cfg.sim_config(), cfg.axis, grid, folds=cfg.folds)
    for point in points:
        for method in ("naive", "one_step"):
            s = point[method]
            print(f"axis={cfg.axis} value={s.sweep_coordinate:g} method={method} "
                  f"exact_match={s.exact_match:.4f} kendall_mean={s.kendall_mean:.4f}")
    if cfg.out:
        write_sweep_csv(cfg.axis, points, cfg.out)
        print(f"wrote {cfg.out}")
    return 0


def _cmd_estimate(args) -> int:
    cfg = _resolve_config(args)
    records = load_bench_dataset(args.input)
    phis = [r.phi for r in records]
    naive = naive_estimate(phis, cfg.level)
    onestep, _ = one_step_fixed(records, cfg.level)
    _print_report(naive)
    _print_report(onestep)
    if cfg.out:
        model = args.model or Path(args.input).stem
        write_report([ReportRow(model=model, naive=naive, onestep=onestep,
                                gt=args.gt)], cfg.out)
        print(f"wrote {cfg.out}")
    return 0


def _cmd_validate(args) -> int:
    records = load_bench_dataset(args.input)
    print(f"{args.input}: {len(records)} records, m={len(records[0].aux) - 1}, ok")
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "rank": _cmd_rank,
    "sweep": _cmd_sweep,
    "estimate": _cmd_estimate,
    "validate": _cmd_validate,
}


def run_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors; keep both
        return USAGE_ERROR if exc.code else 0
    try:
        return _COMMANDS[args.command](args)
    except AuxevalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONTRACT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONTRACT_ERROR


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
