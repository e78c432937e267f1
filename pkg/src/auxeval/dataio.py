"""Benchmark JSONL contract, result CSVs, and run configuration."""
from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, fields
from pathlib import Path

from .core import AuxTriple, BenchRecord
from .errors import ContractError, InvalidInputError
from .estimate import EstimateReport, improvement_metric
from .nuisance import ClampCounter
from .ranking import RankingSummary

logger = logging.getLogger(__name__)

_RECORD_KEYS = ("id", "question", "answer", "ground_truth", "phi", "aux", "tau_pred")
_AUX_KEYS = ("w1", "w2", "v")


def parse_bench_line(line: str, line_no: int = 0,
                     counter: ClampCounter | None = None) -> BenchRecord:
    """One JSONL line -> validated BenchRecord.

    Out-of-range tau predictions are clamped into [0, 1] (counted, not
    fatal); every structural violation raises ContractError with the line.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ContractError(f"malformed JSON ({exc.msg})", line=line_no) from exc
    if not isinstance(obj, dict):
        raise ContractError("each line must hold a JSON object", line=line_no)
    missing = [k for k in _RECORD_KEYS if k not in obj]
    if missing:
        raise ContractError(f"missing required field(s) {missing}", line=line_no)
    extra = [k for k in obj if k not in _RECORD_KEYS]
    if extra:
        raise ContractError(f"unknown field(s) {extra}", line=line_no)
    for key in ("id", "question", "answer", "ground_truth"):
        if not isinstance(obj[key], str):
            raise ContractError(f"field {key!r} must be a string", line=line_no)
    if obj["phi"] not in (0, 1):
        raise ContractError(f"phi must be 0 or 1, got {obj['phi']!r}", line=line_no)
    if not isinstance(obj["aux"], list) or len(obj["aux"]) < 2:
        raise ContractError("aux must be a list of at least 2 triples", line=line_no)
    if not isinstance(obj["tau_pred"], list):
        raise ContractError("tau_pred must be a list of numbers", line=line_no)
    if len(obj["tau_pred"]) != len(obj["aux"]):
        raise ContractError(
            f"tau_pred length {len(obj['tau_pred'])} does not match aux length "
            f"{len(obj['aux'])}", line=line_no)

    triples = []
    for i, t in enumerate(obj["aux"]):
        if not isinstance(t, dict) or sorted(t) != sorted(_AUX_KEYS):
            raise ContractError(f"aux[{i}] must carry exactly keys {_AUX_KEYS}",
                                line=line_no)
        if not (isinstance(t["w1"], str) and isinstance(t["w2"], str)):
            raise ContractError(f"aux[{i}].w1/w2 must be strings", line=line_no)
        if t["v"] not in (0, 1):
            raise ContractError(f"aux[{i}].v must be 0 or 1, got {t['v']!r}",
                                line=line_no)
        triples.append(AuxTriple(w1=t["w1"], w2=t["w2"], v=int(t["v"])))

    taus = []
    for i, value in enumerate(obj["tau_pred"]):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ContractError(f"tau_pred[{i}] must be a number", line=line_no)
        value = float(value)
        if not math.isfinite(value):
            raise ContractError(f"tau_pred[{i}] must be finite", line=line_no)
        clamped = min(max(value, 0.0), 1.0)
        if clamped != value:
            if counter is not None:
                counter.bump()
            logger.warning("line %d: tau_pred[%d] = %.6g clamped to [0, 1]",
                           line_no, i, value)
        taus.append(clamped)

    return BenchRecord(id=obj["id"], x=obj["question"], y=obj["answer"],
                       g=obj["ground_truth"], phi=int(obj["phi"]),
                       aux=tuple(triples), tau_pred=tuple(taus))


def serialize_bench_record(record: BenchRecord) -> str:
    """Inverse of parse_bench_line (modulo tau clamping); one line, stable
    key order."""
    obj = {
        "id": record.id,
        "question": record.x,
        "answer": record.y,
        "ground_truth": record.g,
        "phi": record.phi,
        "aux": [{"w1": t.w1, "w2": t.w2, "v": t.v} for t in record.aux],
        "tau_pred": list(record.tau_pred),
    }
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def load_bench_dataset(path) -> list[BenchRecord]:
    """Parse and validate a benchmark JSONL file; M must be uniform."""
    path = Path(path)
    records: list[BenchRecord] = []
    counter = ClampCounter()
    first_m_line = 0
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_bench_line(line, line_no, counter)
            if records and len(record.aux) != len(records[0].aux):
                raise ContractError(
                    f"inconsistent aux count: line {first_m_line} has "
                    f"{len(records[0].aux)}, line {line_no} has {len(record.aux)}")
            if not records:
                first_m_line = line_no
            records.append(record)
    if not records:
        raise ContractError(f"{path} contains no records")
    if counter.count:
        logger.warning("%s: clamped %d out-of-range tau predictions",
                       path, counter.count)
    return records


@dataclass(frozen=True)
class ReportRow:
    """One rendered table row: a model's ground truth plus both estimates."""
    model: str
    naive: EstimateReport
    onestep: EstimateReport
    gt: float | None = None  # fraction scale, like the report fields


REPORT_COLUMNS = ("model", "gt_pct", "naive_pct", "onestep_pct",
                  "onestep_clamped_pct", "improv_pct", "n", "m", "se",
                  "ci_lo", "ci_hi")


def _pct(fraction: float, digits: int = 2) -> str:
    return f"{fraction * 100.0:.{digits}f}"


def write_report(rows, path) -> None:
    """Render rows as the result table CSV (percent scale, 2 decimals)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            gt = "" if row.gt is None else _pct(row.gt)
            improv = ""
            if row.gt is not None:
                improv = f"{improvement_metric(row.naive.theta_hat * 100, row.onestep.theta_hat * 100, row.gt * 100):.2f}"
            writer.writerow([
                row.model, gt,
                _pct(row.naive.theta_hat),
                _pct(row.onestep.theta_hat),
                _pct(row.onestep.theta_hat_clamped),
                improv,
                row.onestep.n, row.onestep.m,
                _pct(row.onestep.std_error, digits=4),
                _pct(row.onestep.ci[0]), _pct(row.onestep.ci[1]),
            ])


SWEEP_COLUMNS = ("axis", "axis_value", "method", "exact_match",
                 "kendall_mean", "trials")


def write_sweep_csv(axis: str, summaries_per_point, path) -> None:
    """Sweep results as plot-ready CSV, one row per (grid point, method)."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for point in summaries_per_point:
            for method in sorted(point):
                s: RankingSummary = point[method]
                writer.writerow([axis, f"{s.sweep_coordinate:g}", s.method,
                                 f"{s.exact_match:.4f}", f"{s.kendall_mean:.4f}",
                                 s.trials])


@dataclass
class RunConfig:
    """Everything the CLI needs; file values are overridden by flags."""
    n: int = 1000
    m: int = 500
    folds: int = 5
    trials: int = 100
    seed: int = 3
    rho1: float = 0.8
    rho2: float = 0.6
    sigma_eta: float = 0.6
    sigma_sq_per_model: tuple[float, ...] = (1.0, 1.05, 1.1)
    level: float = 0.95
    axis: str = "base_sigma"
    grid: tuple[float, ...] = ()
    input: str | None = None
    out: str | None = None

    def __post_init__(self):
        if not 0.0 < self.level < 1.0:
            raise InvalidInputError(f"level must be in (0, 1), got {self.level}")

    def sim_config(self):
        from .simulate import SimConfig
        return SimConfig(n=self.n, m=self.m,
                         sigma_sq_per_model=tuple(self.sigma_sq_per_model),
                         rho1=self.rho1, rho2=self.rho2, sigma_eta=self.sigma_eta,
                         seed=self.seed, trials=self.trials)


DEFAULT_BASE_SIGMA_GRID = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)
DEFAULT_SIGMA_ETA_GRID = (0.2, 0.5, 0.8, 1.1, 1.4, 1.7, 2.0)


def load_run_config(path) -> RunConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ContractError(f"config {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ContractError(f"config {path} must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ContractError(f"config {path} has unknown key(s) {unknown}")
    if "sigma_sq_per_model" in data:
        data["sigma_sq_per_model"] = tuple(data["sigma_sq_per_model"])
    if "grid" in data:
        data["grid"] = tuple(data["grid"])
    return RunConfig(**data)
