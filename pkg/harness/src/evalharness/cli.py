"""Build benchmark JSONL files from a question list."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .client import HttpChatClient, MockClient, RetryingClient, mock_client_from_fixture
from .config import HarnessConfig, load_harness_config
from .errors import HarnessError
from .pipeline import build_dataset, load_questions


def run_command(argv) -> int:
    parser = argparse.ArgumentParser(
        prog="evalharness",
        description="Build benchmark JSONL files with auxiliary comparison "
                    "signals and correctness predictions")
    parser.add_argument("questions", type=Path,
                        help="JSON/JSONL file of {id, question, ground_truth, ...}")
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--config", type=Path, help="harness config JSON")
    parser.add_argument("--m-samples", type=int, dest="m_samples")
    parser.add_argument("--mock", action="store_true",
                        help="use the deterministic offline client")
    parser.add_argument("--mock-fixture", type=Path,
                        help="recorded-reply fixture for the mock client")
    parser.add_argument("--few-shot-examples", type=Path,
                        help="text block enabling few-shot regressor prompts")
    args = parser.parse_args(list(argv))

    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        config = load_harness_config(args.config) if args.config else HarnessConfig()
        if args.m_samples is not None:
            import dataclasses
            config = dataclasses.replace(config, m=args.m_samples)
        if args.mock_fixture:
            client = mock_client_from_fixture(args.mock_fixture)
        elif args.mock:
            client = MockClient()
        else:
            client = RetryingClient(HttpChatClient(timeout=config.timeout),
                                    retries=config.retries)
        examples = None
        if args.few_shot_examples:
            examples = args.few_shot_examples.read_text(encoding="utf-8")
        stats = build_dataset(load_questions(args.questions), config, client,
                              args.out, few_shot_examples=examples)
    except HarnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}: {stats.succeeded} records "
          f"({stats.failed} failed, {stats.tau_clamped} tau values clamped)")
    return 0


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
