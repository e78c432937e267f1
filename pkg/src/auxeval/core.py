"""Domain records and the metric functions every estimator consumes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidInputError


class MetricKind(Enum):
    ACCURACY = "accuracy"
    SQUARED_ERROR = "squared_error"


@dataclass(frozen=True)
class AuxTriple:
    """One auxiliary comparison sample: two candidate responses plus the
    preference flag (v = 1 means the first response is preferred)."""

    w1: float | str
    w2: float | str
    v: int

    def __post_init__(self):
        if self.v not in (0, 1):
            raise InvalidInputError(f"preference flag must be 0 or 1, got {self.v!r}")
        if isinstance(self.w1, str) != isinstance(self.w2, str):
            raise InvalidInputError("w1 and w2 must be the same kind (both scalar or both text)")


@dataclass(frozen=True)
class SimRecord:
    """One simulated evaluation instance.

    aux[0] is the correction sample; aux[1:] are the Monte Carlo
    integration samples. This ordering is part of the data contract.
    """

    x: float
    y: float
    g: float
    aux: tuple[AuxTriple, ...]

    def __post_init__(self):
        if len(self.aux) < 2:
            raise InvalidInputError("a SimRecord needs at least 2 aux triples")
        if any(isinstance(t.w1, str) for t in self.aux):
            raise InvalidInputError("SimRecord aux triples must be scalar-kind")


@dataclass(frozen=True)
class BenchRecord:
    """One benchmark instance with pre-scored correctness and externally
    produced regressor predictions aligned index-for-index with aux."""

    id: str
    x: str
    y: str
    g: str
    phi: int
    aux: tuple[AuxTriple, ...]
    tau_pred: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.phi not in (0, 1):
            raise InvalidInputError(f"phi must be 0 or 1, got {self.phi!r}")
        if len(self.aux) < 2:
            raise InvalidInputError("a BenchRecord needs at least 2 aux triples")
        if len(self.tau_pred) != len(self.aux):
            raise InvalidInputError(
                f"tau_pred length {len(self.tau_pred)} != aux length {len(self.aux)}")
        if any(not math.isfinite(t) for t in self.tau_pred):
            raise InvalidInputError("tau_pred entries must be finite")


def canonicalize_answer(text: str) -> str:
    """Trim surrounding whitespace, nothing more."""
    return text.strip()


def accuracy_metric(y: str, g: str) -> int:
    """Exact-match correctness of an answer string against the ground truth."""
    return 1 if canonicalize_answer(y) == canonicalize_answer(g) else 0


def squared_error_metric(y: float, g: float) -> float:
    if not (math.isfinite(y) and math.isfinite(g)):
        raise InvalidInputError(f"squared_error_metric needs finite inputs, got ({y}, {g})")
    return (y - g) ** 2


def metric_value(kind: MetricKind, y, g) -> float:
    if kind is MetricKind.ACCURACY:
        return float(accuracy_metric(y, g))
    return squared_error_metric(y, g)


def metric_range(kind: MetricKind) -> tuple[float, float]:
    """Range the metric can take; used for the clamped companion estimate."""
    if kind is MetricKind.ACCURACY:
        return (0.0, 1.0)
    return (0.0, math.inf)
