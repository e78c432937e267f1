"""Harness configuration."""
from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import HarnessError


@dataclass(frozen=True)
class HarnessConfig:
    """Model routing and client policy.

    A homogeneous setup uses the same model for both auxiliary responses;
    a heterogeneous one routes w2 to a different model.
    """

    aux_model_1: str = "aux-model"
    aux_model_2: str = "aux-model"
    target_model: str = "target-model"
    regressor_model: str = "regressor-model"
    max_tokens_target: int = 32768
    max_tokens_aux: int = 8192
    max_tokens_judge: int = 1024
    max_tokens_regressor: int = 1024
    m: int = 10
    retries: int = 3
    timeout: float = 120.0
    temperature: float = 1.0
    few_shot: bool = False
    success_threshold: float = 0.9

    def __post_init__(self):
        if self.m < 1:
            raise HarnessError(f"m must be >= 1, got {self.m}")
        for name in ("max_tokens_target", "max_tokens_aux", "max_tokens_judge",
                     "max_tokens_regressor"):
            if getattr(self, name) <= 0:
                raise HarnessError(f"{name} must be positive")
        if not 0.0 <= self.success_threshold <= 1.0:
            raise HarnessError("success_threshold must be in [0, 1]")


def load_harness_config(path) -> HarnessConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise HarnessError(f"config {path} must hold a JSON object")
    known = {f.name for f in fields(HarnessConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise HarnessError(f"config {path} has unknown key(s) {unknown}")
    return HarnessConfig(**data)
