"""Naive and one-step estimators, influence-score diagnostics, confidence
intervals, variance-reduction measurement, and the improvement comparison."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .core import BenchRecord, MetricKind, metric_range
from .errors import (ContractError, EmptyDatasetError, InvalidInputError,
                     UndefinedVRError)
from .nuisance import (DEFAULT_FEATURE_SET, ClampCounter, cross_fit_tau,
                       external_tau, feature_matrix)
from .simulate import as_sim_dataset

logger = logging.getLogger(__name__)

_STD_NORMAL = NormalDist()


@dataclass(frozen=True)
class EstimateReport:
    theta_hat: float
    var_influence: float
    std_error: float
    ci: tuple[float, float]
    n: int
    m: int
    k: int
    method: str
    theta_hat_clamped: float


@dataclass(frozen=True)
class InfluenceBreakdown:
    """Per-instance decomposition of the one-step estimate."""
    phis: np.ndarray
    tau_firsts: np.ndarray
    m_hats: np.ndarray
    psi_hats: np.ndarray


def _sample_variance(values: np.ndarray) -> float:
    # N-1 denominator; a single observation carries no variance information.
    # Identical observations get exactly 0, not a mean-rounding residue.
    if values.size < 2 or np.all(values == values.flat[0]):
        return 0.0
    return float(np.var(values, ddof=1))


def confidence_interval(theta: float, var_influence: float, n: int,
                        level: float) -> tuple[float, float]:
    """Normal interval theta +/- z_{(1+level)/2} * sqrt(var_influence / n)."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    if not 0.0 < level < 1.0:
        raise InvalidInputError(f"level must be in (0, 1), got {level}")
    z = _STD_NORMAL.inv_cdf((1.0 + level) / 2.0)
    half = z * np.sqrt(var_influence / n)
    return (theta - half, theta + half)


def _report(psi: np.ndarray, *, level: float, metric: MetricKind, method: str,
            m: int, k: int) -> EstimateReport:
    theta = float(psi.mean())
    var = _sample_variance(psi)
    n = psi.size
    lo, hi = metric_range(metric)
    return EstimateReport(
        theta_hat=theta,
        var_influence=var,
        std_error=float(np.sqrt(var / n)),
        ci=confidence_interval(theta, var, n, level),
        n=n, m=m, k=k, method=method,
        theta_hat_clamped=float(min(max(theta, lo), hi)),
    )


def naive_estimate(phis, level: float = 0.95,
                   metric: MetricKind = MetricKind.ACCURACY) -> EstimateReport:
    """Sample mean of the per-instance metric values."""
    phis = np.asarray(phis, dtype=float)
    if phis.size == 0:
        raise EmptyDatasetError("naive_estimate needs at least one observation")
    return _report(phis, level=level, metric=metric, method="naive", m=0, k=0)


def integrated_regression_mc(tau_values) -> float:
    """Monte Carlo integration of the outcome regression: the mean of the
    regression evaluated on the integration samples."""
    tau_values = np.asarray(tau_values, dtype=float)
    if tau_values.size == 0:
        raise InvalidInputError("integrated regression needs at least one sample (M >= 1)")
    return float(tau_values.mean())


def influence_score(m_hat: float, phi: float, tau_first: float) -> float:
    """m_hat + phi - tau_first; grouped so that identical nuisances cancel
    exactly in floating point."""
    return phi + (m_hat - tau_first)


def one_step_from_scores(phis, tau_firsts, m_hats, *, level: float = 0.95,
                         metric: MetricKind = MetricKind.ACCURACY,
                         method: str = "one_step_fixed", m: int = 0,
                         k: int = 0) -> tuple[EstimateReport, InfluenceBreakdown]:
    """Assemble the one-step estimate from per-instance nuisance values."""
    phis = np.asarray(phis, dtype=float)
    tau_firsts = np.asarray(tau_firsts, dtype=float)
    m_hats = np.asarray(m_hats, dtype=float)
    if not phis.size:
        raise EmptyDatasetError("one-step estimation needs at least one instance")
    if not (phis.shape == tau_firsts.shape == m_hats.shape):
        raise InvalidInputError("phis, tau_firsts and m_hats must be aligned")
    psi = phis + (m_hats - tau_firsts)
    report = _report(psi, level=level, metric=metric, method=method, m=m, k=k)
    return report, InfluenceBreakdown(phis=phis, tau_firsts=tau_firsts,
                                      m_hats=m_hats, psi_hats=psi)


def one_step_crossfit(dataset, metric: MetricKind = MetricKind.SQUARED_ERROR,
                      k: int = 5, level: float = 0.95,
                      stream: np.random.Generator | None = None,
                      regressor_kind: str = "ols_quadratic",
                      feature_set: str = DEFAULT_FEATURE_SET,
                      ) -> tuple[EstimateReport, InfluenceBreakdown]:
    """Cross-fitted one-step estimator.

    Fits the outcome regression out-of-fold on the correction sample, Monte
    Carlo integrates it over each instance's remaining aux samples, and
    averages the resulting influence scores.
    """
    if stream is None:
        stream = np.random.default_rng(0)
    arr = as_sim_dataset(dataset)
    phi = arr.phi(metric)
    cf = cross_fit_tau(arr, k, stream, metric=metric,
                       regressor_kind=regressor_kind, feature_set=feature_set)
    f1 = feature_matrix(arr.x, arr.w1[:, 0], arr.w2[:, 0], arr.v[:, 0], feature_set)
    # regressors are linear in the features, so averaging features over the
    # integration samples first computes the same Monte Carlo mean in O(n)
    fmean = feature_matrix(
        arr.x[:, None], arr.w1[:, 1:], arr.w2[:, 1:], arr.v[:, 1:], feature_set
    ).mean(axis=1)
    tau_first = np.empty(len(arr))
    m_hat = np.empty(len(arr))
    for f in range(cf.folds.k):
        idx = cf.folds.test_indices(f)
        handle = cf.regressors[f]
        tau_first[idx] = handle.predict(f1[idx])
        m_hat[idx] = handle.predict(fmean[idx])
    return one_step_from_scores(phi, tau_first, m_hat, level=level, metric=metric,
                                method="one_step_crossfit", m=arr.m, k=k)


def one_step_fixed(dataset: list[BenchRecord], level: float = 0.95,
                   counter: ClampCounter | None = None,
                   ) -> tuple[EstimateReport, InfluenceBreakdown]:
    """One-step estimator with a fixed external regressor (no cross-fitting)."""
    if not dataset:
        raise EmptyDatasetError("one_step_fixed needs at least one record")
    slots = len(dataset[0].tau_pred)
    if any(len(r.tau_pred) != slots for r in dataset):
        raise ContractError("records carry differing numbers of tau predictions")
    counter = counter if counter is not None else ClampCounter()
    phis = np.array([r.phi for r in dataset], dtype=float)
    tau_firsts = np.array([external_tau(r, 1, counter) for r in dataset])
    m_hats = np.array([
        integrated_regression_mc([external_tau(r, s, counter)
                                  for s in range(2, slots + 1)])
        for r in dataset
    ])
    if counter.count:
        logger.warning("clamped %d out-of-range tau predictions", counter.count)
    return one_step_from_scores(phis, tau_firsts, m_hats, level=level,
                                metric=MetricKind.ACCURACY,
                                method="one_step_fixed", m=slots - 1, k=0)


def empirical_vr(naive_scores, influence_scores) -> float:
    """Observed variance reduction 1 - Var(psi) / Var(phi)."""
    phi = np.asarray(naive_scores, dtype=float)
    psi = np.asarray(influence_scores, dtype=float)
    if phi.size == 0 or psi.size == 0:
        raise InvalidInputError("empirical_vr needs nonempty score vectors")
    var_phi = _sample_variance(phi)
    if var_phi == 0.0:
        raise UndefinedVRError("variance reduction undefined when Var(phi) = 0")
    return 1.0 - _sample_variance(psi) / var_phi


def orthogonality_stat(m_hats, theta: float, phis, tau_firsts,
                       ) -> tuple[float, float]:
    """Sample covariance between (m_hat - theta) and (phi - tau_first), plus
    its jackknife standard error."""
    a = np.asarray(m_hats, dtype=float) - theta
    b = np.asarray(phis, dtype=float) - np.asarray(tau_firsts, dtype=float)
    if a.shape != b.shape or a.size < 2:
        raise InvalidInputError("orthogonality_stat needs two aligned vectors, length >= 2")
    n = a.size
    da = a - a.mean()
    db = b - b.mean()
    s = float(da @ db)
    cov = s / (n - 1)
    if n < 3:
        return cov, float("nan")
    # leave-one-out cross products: S_(-i) = S - n/(n-1) * da_i * db_i
    cov_loo = (s - (n / (n - 1)) * da * db) / (n - 2)
    se = float(np.sqrt((n - 1) / n * ((cov_loo - cov_loo.mean()) ** 2).sum()))
    return cov, se


def improvement_metric(naive_pct: float, onestep_pct: float, gt_pct: float) -> float:
    """Reduction in absolute error of the one-step estimate vs the naive one."""
    return abs(naive_pct - gt_pct) - abs(onestep_pct - gt_pct)
