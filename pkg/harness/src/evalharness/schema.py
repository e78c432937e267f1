"""Harness-side check of the benchmark JSONL contract.

This mirrors the documented wire format the estimator package consumes; it
is deliberately implemented independently so the two sides keep each other
honest. The authoritative check is the consumer's `validate` command.
"""
from __future__ import annotations

import math

from .errors import SchemaError

RECORD_KEYS = ("id", "question", "answer", "ground_truth", "phi", "aux", "tau_pred")
AUX_KEYS = ("w1", "w2", "v")


def check_record(obj: dict, expected_slots: int | None = None) -> None:
    if sorted(obj) != sorted(RECORD_KEYS):
        raise SchemaError(f"record keys must be exactly {RECORD_KEYS}, got {sorted(obj)}")
    for key in ("id", "question", "answer", "ground_truth"):
        if not isinstance(obj[key], str):
            raise SchemaError(f"{key} must be a string")
    if obj["phi"] not in (0, 1):
        raise SchemaError(f"phi must be 0 or 1, got {obj['phi']!r}")
    aux, taus = obj["aux"], obj["tau_pred"]
    if not isinstance(aux, list) or len(aux) < 2:
        raise SchemaError("aux must hold at least 2 triples")
    if not isinstance(taus, list) or len(taus) != len(aux):
        raise SchemaError("tau_pred must align with aux")
    if expected_slots is not None and len(aux) != expected_slots:
        raise SchemaError(f"expected {expected_slots} aux triples, got {len(aux)}")
    for i, triple in enumerate(aux):
        if not isinstance(triple, dict) or sorted(triple) != sorted(AUX_KEYS):
            raise SchemaError(f"aux[{i}] must carry exactly keys {AUX_KEYS}")
        if not (isinstance(triple["w1"], str) and isinstance(triple["w2"], str)):
            raise SchemaError(f"aux[{i}].w1/w2 must be strings")
        if triple["v"] not in (0, 1):
            raise SchemaError(f"aux[{i}].v must be 0 or 1")
    for i, value in enumerate(taus):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"tau_pred[{i}] must be a number")
        if not math.isfinite(value) or not 0.0 <= value <= 1.0:
            raise SchemaError(f"tau_pred[{i}] must be a finite number in [0, 1]")
