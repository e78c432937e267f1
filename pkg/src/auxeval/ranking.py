"""Repeated-trial ranking experiments: exact-match accuracy and Kendall's tau
for the naive and one-step estimators across parameter sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import MetricKind
from .errors import InvalidInputError
from .estimate import naive_estimate, one_step_crossfit
from .nuisance import DEFAULT_FEATURE_SET
from .simulate import (SimConfig, child_stream, gen_sim_dataset, oracle_m,
                       oracle_params_for, oracle_tau)

METHODS = ("naive", "one_step", "one_step_oracle")


@dataclass(frozen=True)
class RankingSummary:
    method: str
    trials: int
    rankings: tuple[tuple[int, ...], ...]
    exact_match: float
    kendall_mean: float
    sweep_coordinate: float = math.nan


def rank_models(estimates) -> tuple[int, ...]:
    """Model order by ascending estimate (lower loss first); ties broken by
    lower model index. Model indices are 1-based."""
    values = np.asarray(estimates, dtype=float)
    if values.size < 2:
        raise InvalidInputError("ranking needs at least two models")
    if not np.isfinite(values).all():
        raise InvalidInputError("estimates must be finite")
    order = np.argsort(values, kind="stable")
    return tuple(int(i) + 1 for i in order)


def _check_permutation(pi, length: int | None = None) -> tuple[int, ...]:
    pi = tuple(int(p) for p in pi)
    if length is not None and len(pi) != length:
        raise InvalidInputError("permutations must have equal length")
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise InvalidInputError(f"{pi} is not a permutation of 1..{len(pi)}")
    return pi


def exact_match(rankings, truth) -> float:
    """Fraction of rankings identical to the true ordering."""
    truth = _check_permutation(truth)
    checked = [_check_permutation(r, len(truth)) for r in rankings]
    if not checked:
        raise InvalidInputError("exact_match needs at least one ranking")
    return sum(r == truth for r in checked) / len(checked)


def kendall_tau(pi_hat, pi_star) -> float:
    """Pairwise-concordance rank correlation (tau-a, no tie correction)."""
    pi_hat = _check_permutation(pi_hat)
    pi_star = _check_permutation(pi_star, len(pi_hat))
    size = len(pi_hat)
    if size < 2:
        raise InvalidInputError("kendall_tau needs length >= 2")
    pos_hat = {model: i for i, model in enumerate(pi_hat)}
    pos_star = {model: i for i, model in enumerate(pi_star)}
    concordant = discordant = 0
    models = sorted(pos_hat)
    for i in range(size):
        for j in range(i + 1, size):
            d_hat = pos_hat[models[i]] - pos_hat[models[j]]
            d_star = pos_star[models[i]] - pos_star[models[j]]
            if d_hat * d_star > 0:
                concordant += 1
            else:
                discordant += 1
    return (concordant - discordant) / (size * (size - 1) / 2)


def _oracle_estimate(dataset, params) -> float:
    """One-step estimate with the theoretical nuisances plugged in."""
    phi = dataset.phi(MetricKind.SQUARED_ERROR)
    tau1 = oracle_tau(dataset.x, dataset.w1[:, 0], params)
    return float((oracle_m(params) + phi - tau1).mean())


def run_ranking_experiment(config: SimConfig, truth=None,
                           methods=("naive", "one_step"), folds: int = 5,
                           feature_set: str = DEFAULT_FEATURE_SET,
                           sweep_coordinate: float = math.nan,
                           ) -> dict[str, RankingSummary]:
    """Repeat R trials of generate-estimate-rank for every model.

    Both estimators see the same datasets in each trial; each (trial, model)
    pair draws from its own child stream, so trials are order-independent.
    """
    n_models = len(config.sigma_sq_per_model)
    if truth is None:
        sig = config.sigma_sq_per_model
        if any(sig[i] >= sig[i + 1] for i in range(n_models - 1)):
            raise InvalidInputError(
                "default truth assumes strictly increasing sigma_sq_per_model")
        truth = tuple(range(1, n_models + 1))
    truth = _check_permutation(truth, n_models)
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise InvalidInputError(f"unknown methods: {sorted(unknown)}")

    rankings: dict[str, list[tuple[int, ...]]] = {m: [] for m in methods}
    for trial in range(config.trials):
        estimates: dict[str, list[float]] = {m: [] for m in methods}
        for li in range(n_models):
            data_stream = child_stream(config.seed, trial, li, 0)
            dataset = gen_sim_dataset(config, li, data_stream)
            if "naive" in estimates:
                report = naive_estimate(dataset.phi(MetricKind.SQUARED_ERROR),
                                        metric=MetricKind.SQUARED_ERROR)
                estimates["naive"].append(report.theta_hat)
            if "one_step" in estimates:
                fold_stream = child_stream(config.seed, trial, li, 1)
                report, _ = one_step_crossfit(dataset, MetricKind.SQUARED_ERROR,
                                              k=folds, stream=fold_stream,
                                              feature_set=feature_set)
                estimates["one_step"].append(report.theta_hat)
            if "one_step_oracle" in estimates:
                estimates["one_step_oracle"].append(
                    _oracle_estimate(dataset, oracle_params_for(config, li)))
        for method in methods:
            rankings[method].append(rank_models(estimates[method]))

    out = {}
    for method in methods:
        taus = [kendall_tau(r, truth) for r in rankings[method]]
        out[method] = RankingSummary(
            method=method,
            trials=config.trials,
            rankings=tuple(rankings[method]),
            exact_match=exact_match(rankings[method], truth),
            kendall_mean=float(np.mean(taus)),
            sweep_coordinate=sweep_coordinate,
        )
    return out


SWEEP_AXES = ("base_sigma", "sigma_eta")


def config_at(config: SimConfig, axis: str, value: float) -> SimConfig:
    """The config with one swept parameter replaced, all else fixed. A
    base_sigma value shifts every model variance, preserving the gaps."""
    if axis == "base_sigma":
        base = config.sigma_sq_per_model[0]
        sigmas = tuple(value + (s - base) for s in config.sigma_sq_per_model)
        return replace(config, sigma_sq_per_model=sigmas)
    if axis == "sigma_eta":
        return replace(config, sigma_eta=value)
    raise InvalidInputError(f"unknown sweep axis {axis!r} (expected one of {SWEEP_AXES})")


def sweep(config: SimConfig, axis: str, grid,
          methods=("naive", "one_step"), folds: int = 5,
          feature_set: str = DEFAULT_FEATURE_SET,
          ) -> list[dict[str, RankingSummary]]:
    """run_ranking_experiment at each grid value of the swept axis."""
    grid = list(grid)
    if not grid:
        raise InvalidInputError("sweep needs a nonempty grid")
    return [
        run_ranking_experiment(config_at(config, axis, value), methods=methods,
                               folds=folds, feature_set=feature_set,
                               sweep_coordinate=float(value))
        for value in grid
    ]
