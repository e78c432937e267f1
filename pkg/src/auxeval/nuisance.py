"""Outcome-regression fitting: feature maps, ridge-guarded least squares,
fold partitioning for cross-fitting, and the fixed external regressor."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import AuxTriple, BenchRecord, MetricKind
from .errors import (InvalidFoldsError, InvalidInputError, MissingTauError,
                     SingularDesignError)

logger = logging.getLogger(__name__)

RIDGE_GUARD = 1e-8
# condition number of the normal equations beyond which the ridge kicks in
_RIDGE_TRIGGER = 1e12

# Feature sets for the quadratic regression. "full" is the complete map over
# the auxiliary triple; "oracle" restricts to the information set of the
# closed-form regression, which the fitted estimator is meant to track.
FEATURE_SETS = {"full": 4, "oracle": 2}
DEFAULT_FEATURE_SET = "oracle"


def build_features(x: float, t: AuxTriple) -> list[float]:
    """Quadratic feature vector [1, (w1-x)^2, (w2-x)^2, v] of one triple."""
    if isinstance(t.w1, str):
        raise InvalidInputError("build_features needs a scalar-kind triple")
    return [1.0, (t.w1 - x) ** 2, (t.w2 - x) ** 2, float(t.v)]


def feature_matrix(x, w1, w2, v, feature_set: str = DEFAULT_FEATURE_SET) -> np.ndarray:
    """Vectorized build_features over aligned arrays (any common shape)."""
    if feature_set not in FEATURE_SETS:
        raise InvalidInputError(f"unknown feature set {feature_set!r}")
    cols = [np.ones_like(np.asarray(w1, dtype=float)), (w1 - x) ** 2]
    if feature_set == "full":
        cols += [(w2 - x) ** 2, np.asarray(v, dtype=float)]
    return np.stack(cols, axis=-1)


def fit_ols(features, targets) -> np.ndarray:
    """Least-squares coefficients via the normal equations.

    A scaled ridge of RIDGE_GUARD is added only when the design is
    ill-conditioned, so degenerate configurations degrade gracefully while
    well-posed fits stay exact.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise InvalidInputError("features must be (n, p) aligned with length-n targets")
    n, p = X.shape
    if n < p:
        raise SingularDesignError(f"need n >= p, got n={n}, p={p}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise InvalidInputError("features and targets must be finite")
    A = X.T @ X
    b = X.T @ y
    if p > 1 and np.linalg.cond(A) > _RIDGE_TRIGGER:
        A = A + (RIDGE_GUARD * max(np.trace(A) / p, 1.0)) * np.eye(p)
    try:
        coef = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise SingularDesignError(f"normal equations not solvable: {exc}") from exc
    if not np.isfinite(coef).all():
        raise SingularDesignError("design is rank-deficient beyond the ridge guard")
    return coef


@dataclass(frozen=True)
class FoldAssignment:
    n: int
    k: int
    fold_of: np.ndarray  # instance index -> fold id in [0, k)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)

    def sizes(self) -> list[int]:
        return [int((self.fold_of == f).sum()) for f in range(self.k)]


def make_folds(n: int, k: int, stream: np.random.Generator) -> FoldAssignment:
    """Uniformly random balanced partition; the remainder is spread one extra
    instance over the first n mod k folds after shuffling."""
    if k < 2 or k > n:
        raise InvalidFoldsError(f"fold count must satisfy 2 <= k <= n, got k={k}, n={n}")
    perm = stream.permutation(n)
    q, r = divmod(n, k)
    fold_of = np.empty(n, dtype=np.int64)
    start = 0
    for f in range(k):
        size = q + 1 if f < r else q
        fold_of[perm[start:start + size]] = f
        start += size
    return FoldAssignment(n=n, k=k, fold_of=fold_of)


@dataclass(frozen=True)
class RegressorHandle:
    """A fitted outcome regression: OLS coefficients, a constant, or an
    external prediction table. train_indices records what the fit saw."""

    kind: str  # "ols_quadratic" | "constant" | "external"
    coef: np.ndarray | None = None
    value: float | None = None
    table: np.ndarray | None = None  # external: (n_records, m+1) predictions
    feature_set: str = DEFAULT_FEATURE_SET
    train_indices: np.ndarray | None = field(default=None, repr=False)

    def predict(self, features) -> np.ndarray | float:
        """Predict from feature vectors ((p,) or (n, p)); linear in features,
        so slot-averaged features give the slot-averaged prediction."""
        if self.kind == "constant":
            f = np.asarray(features, dtype=float)
            return self.value if f.ndim == 1 else np.full(f.shape[0], self.value)
        if self.kind == "ols_quadratic":
            return np.asarray(features, dtype=float) @ self.coef
        raise InvalidInputError("external handles predict per (record, slot), not features")

    def predict_slot(self, record_index: int, slot: int) -> float:
        if self.kind != "external" or self.table is None:
            raise MissingTauError("no external prediction table on this handle")
        n, s = self.table.shape
        if not (0 <= record_index < n and 1 <= slot <= s):
            raise MissingTauError(
                f"no external prediction for record {record_index}, slot {slot}")
        return float(self.table[record_index, slot - 1])


@dataclass
class ClampCounter:
    """Counts out-of-range external predictions that were clamped."""
    count: int = 0

    def bump(self, n: int = 1) -> None:
        self.count += n


def external_tau(record: BenchRecord, slot: int,
                 counter: ClampCounter | None = None) -> float:
    """Externally produced prediction for one aux slot (1-based), clamped to
    [0, 1]. Out-of-range values are counted and logged, not fatal."""
    if not record.tau_pred:
        raise MissingTauError(f"record {record.id!r} carries no tau predictions")
    if not 1 <= slot <= len(record.tau_pred):
        raise MissingTauError(
            f"record {record.id!r} has no prediction for slot {slot} "
            f"(valid range 1..{len(record.tau_pred)})")
    raw = record.tau_pred[slot - 1]
    clamped = min(max(raw, 0.0), 1.0)
    if clamped != raw:
        if counter is not None:
            counter.bump()
        logger.warning("record %s slot %d: tau prediction %.6g clamped to [0, 1]",
                       record.id, slot, raw)
    return clamped


@dataclass(frozen=True)
class CrossFitResult:
    """Per-fold regressors plus the fold bookkeeping mapping instances to the
    regressor trained without them."""

    folds: FoldAssignment
    regressors: tuple[RegressorHandle, ...]

    def handle_for(self, i: int) -> RegressorHandle:
        return self.regressors[int(self.folds.fold_of[i])]


def cross_fit_tau(dataset, k: int, stream: np.random.Generator,
                  metric: MetricKind = MetricKind.SQUARED_ERROR,
                  regressor_kind: str = "ols_quadratic",
                  feature_set: str = DEFAULT_FEATURE_SET) -> CrossFitResult:
    """Fit the outcome regression out-of-fold on the correction sample.

    Each fold's regressor is trained on all out-of-fold (slot-1 features,
    phi) pairs; instances are mapped to the regressor that never saw them.
    """
    from .simulate import as_sim_dataset

    arr = as_sim_dataset(dataset)
    n = len(arr)
    if n == 0:
        raise InvalidInputError("cross_fit_tau needs a nonempty dataset")
    phi = arr.phi(metric)
    F1 = feature_matrix(arr.x, arr.w1[:, 0], arr.w2[:, 0], arr.v[:, 0], feature_set)
    folds = make_folds(n, k, stream)
    regressors = []
    for f in range(folds.k):
        train = folds.train_indices(f)
        if regressor_kind == "constant":
            handle = RegressorHandle(kind="constant", value=float(phi[train].mean()),
                                     feature_set=feature_set, train_indices=train)
        elif regressor_kind == "ols_quadratic":
            coef = fit_ols(F1[train], phi[train])
            handle = RegressorHandle(kind="ols_quadratic", coef=coef,
                                     feature_set=feature_set, train_indices=train)
        else:
            raise InvalidInputError(f"unknown regressor kind {regressor_kind!r}")
        regressors.append(handle)
    return CrossFitResult(folds=folds, regressors=tuple(regressors))
