"""The per-question pipeline and the dataset builder.

For each question: obtain the target model's answer (unless pre-scored),
then for each of the M+1 auxiliary rounds generate a response pair, elicit
the target model's preference, and query the semantic regressor for a
correctness probability. Record-level failures are logged and skipped; the
file is written atomically only if enough records succeed.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .client import ChatClient
from .config import HarnessConfig
from .errors import (BuildAbortedError, GenerationError, HarnessError,
                     JudgeParseError, SchemaError, TauParseError)
from .parsing import (extract_final_answer, extract_probability,
                      parse_judge_reply, verdict_to_v)
from .prompts import generation_prompt, judge_prompt, tau_prompt
from .schema import check_record

logger = logging.getLogger(__name__)


@dataclass
class BuildStats:
    succeeded: int = 0
    failed: int = 0
    tau_clamped: int = 0
    failures: list[str] = field(default_factory=list)


def generate_aux_pair(question: str, config: HarnessConfig, client: ChatClient,
                      question_id: str | None = None) -> tuple[str, str]:
    """Two candidate reasoning chains from the configured auxiliary models."""
    prompt = generation_prompt(question)
    try:
        w1 = client.complete(config.aux_model_1, prompt, config.max_tokens_aux,
                             config.temperature)
        w2 = client.complete(config.aux_model_2, prompt, config.max_tokens_aux,
                             config.temperature)
    except GenerationError as exc:
        raise GenerationError(str(exc), question_id=question_id) from exc
    return w1, w2


def judge_preference(question: str, w1: str, w2: str, config: HarnessConfig,
                     client: ChatClient) -> int:
    """The target model's pairwise preference; 1 means the first response."""
    reply = client.complete(config.target_model,
                            judge_prompt(question, w1, w2),
                            config.max_tokens_judge, config.temperature)
    return verdict_to_v(parse_judge_reply(reply))


def predict_tau(question: str, w1: str, w2: str, v: int, config: HarnessConfig,
                client: ChatClient, few_shot_examples: str | None = None,
                stats: BuildStats | None = None) -> float:
    """Correctness probability from the fixed semantic regressor."""
    examples = few_shot_examples if config.few_shot else None
    reply = client.complete(config.regressor_model,
                            tau_prompt(question, w1, w2, v, examples),
                            config.max_tokens_regressor, config.temperature)
    value, clamped = extract_probability(reply)
    if clamped:
        if stats is not None:
            stats.tau_clamped += 1
        logger.warning("regressor reply out of range, clamped to %.3f", value)
    return value


def target_answer(question: str, config: HarnessConfig, client: ChatClient) -> str:
    reply = client.complete(config.target_model, generation_prompt(question),
                            config.max_tokens_target, config.temperature)
    return extract_final_answer(reply)


def build_record(item: dict, config: HarnessConfig, client: ChatClient,
                 few_shot_examples: str | None = None,
                 stats: BuildStats | None = None) -> dict:
    """One benchmark record with M+1 aligned aux triples and predictions."""
    question_id = str(item["id"])
    question = item["question"]
    ground_truth = item["ground_truth"]
    answer = item.get("answer")
    if answer is None:
        answer = target_answer(question, config, client)
    phi = item.get("phi")
    if phi is None:
        phi = 1 if answer.strip() == ground_truth.strip() else 0
    if phi not in (0, 1):
        raise SchemaError(f"question {question_id!r}: phi must be 0 or 1")

    aux, taus = [], []
    for _ in range(config.m + 1):
        w1, w2 = generate_aux_pair(question, config, client, question_id)
        v = judge_preference(question, w1, w2, config, client)
        tau = predict_tau(question, w1, w2, v, config, client,
                          few_shot_examples, stats)
        aux.append({"w1": w1, "w2": w2, "v": v})
        taus.append(tau)

    record = {
        "id": question_id,
        "question": question,
        "answer": answer,
        "ground_truth": ground_truth,
        "phi": int(phi),
        "aux": aux,
        "tau_pred": taus,
    }
    check_record(record, expected_slots=config.m + 1)
    return record


def build_dataset(items, config: HarnessConfig, client: ChatClient, out_path,
                  few_shot_examples: str | None = None) -> BuildStats:
    """Build records for every item and write the JSONL file atomically.

    The file is only written when the success fraction reaches the
    configured threshold; failed records are never silently defaulted.
    """
    items = list(items)
    if not items:
        raise HarnessError("no questions to build from")
    stats = BuildStats()
    lines = []
    for item in items:
        try:
            record = build_record(item, config, client, few_shot_examples, stats)
        except (GenerationError, JudgeParseError, TauParseError, SchemaError) as exc:
            stats.failed += 1
            stats.failures.append(f"{item.get('id', '?')}: {exc}")
            logger.error("skipping record %s: %s", item.get("id", "?"), exc)
            continue
        lines.append(json.dumps(record, ensure_ascii=False, separators=(",", ":")))
        stats.succeeded += 1

    fraction = stats.succeeded / len(items)
    if fraction < config.success_threshold:
        raise BuildAbortedError(
            f"only {stats.succeeded}/{len(items)} records succeeded "
            f"({fraction:.0%} < threshold {config.success_threshold:.0%}); "
            "no file written")

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = out_path.with_suffix(out_path.suffix + ".tmp")
    tmp_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    os.replace(tmp_path, out_path)
    logger.info("wrote %d records to %s (%d failed, %d tau values clamped)",
                stats.succeeded, out_path, stats.failed, stats.tau_clamped)
    return stats


def load_questions(path) -> list[dict]:
    """Questions from a JSONL (one object per line) or JSON-array file.
    Required keys: id, question, ground_truth; optional: answer, phi."""
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        items = json.loads(text)
    else:
        items = [json.loads(line) for line in text.splitlines() if line.strip()]
    for i, item in enumerate(items):
        missing = [k for k in ("id", "question", "ground_truth") if k not in item]
        if missing:
            raise HarnessError(f"question #{i} missing key(s) {missing}")
    return items
