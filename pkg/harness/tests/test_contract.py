"""Cross-component contract: files built with a fully mocked client must be
accepted by the consumer package's `validate` command (exit 0). The consumer
is reached only through its CLI, never imported."""
import json
import subprocess
import sys
import time

import pytest

from evalharness.client import MockClient
from evalharness.config import HarnessConfig
from evalharness.errors import JudgeParseError
from evalharness.pipeline import build_dataset, judge_preference


def _validate_with_consumer(path):
    return subprocess.run(
        [sys.executable, "-m", "auxeval", "validate", str(path)],
        capture_output=True, text=True)


def _questions(n=3):
    return [{"id": f"q{i}", "question": f"What is {i}+{i}?",
             "ground_truth": str(2 * i)} for i in range(n)]


def test_acceptance_12_mocked_build_passes_consumer_validate(tmp_path):
    t0 = time.time()
    config = HarnessConfig(m=2)
    out = tmp_path / "bench.jsonl"
    build_dataset(_questions(), config, MockClient(), out)

    for line in out.read_text(encoding="utf-8").splitlines():
        obj = json.loads(line)
        assert len(obj["aux"]) == config.m + 1
        assert len(obj["tau_pred"]) == config.m + 1

    result = _validate_with_consumer(out)
    elapsed = time.time() - t0
    passed = result.returncode == 0 and elapsed < 5.0
    print(f"ACCEPTANCE #12 [{'PASS' if passed else 'FAIL'}] mocked build_dataset "
          f"accepted by the consumer validate command (exit {result.returncode}; "
          f"M+1 = {config.m + 1} slots per record; {elapsed:.1f}s < 5s)")
    assert result.returncode == 0, result.stderr
    assert elapsed < 5.0


def test_acceptance_12_judge_replies_outside_contract_are_rejected():
    # a reply outside the JSON contract raises; no preference is invented
    bad = MockClient(script=["the first one looks better to me"])
    with pytest.raises(JudgeParseError):
        judge_preference("q", "a", "b", HarnessConfig(m=1), bad)
    almost = MockClient(script=['{"preference": "first", "reasoning": "x"}'])
    with pytest.raises(JudgeParseError):
        judge_preference("q", "a", "b", HarnessConfig(m=1), almost)


def test_consumer_estimate_runs_on_built_file(tmp_path):
    out = tmp_path / "bench.jsonl"
    build_dataset(_questions(4), HarnessConfig(m=3), MockClient(), out)
    result = subprocess.run(
        [sys.executable, "-m", "auxeval", "estimate", str(out)],
        capture_output=True, text=True)
    assert result.returncode == 0, result.stderr
    assert "method=one_step_fixed" in result.stdout
