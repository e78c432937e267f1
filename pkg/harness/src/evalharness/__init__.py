"""Benchmark JSONL builder: auxiliary reasoning chains, pairwise
preferences, and correctness predictions via LLM APIs."""

from .client import HttpChatClient, MockClient, RetryingClient
from .config import HarnessConfig, load_harness_config
from .errors import (BuildAbortedError, ClientError, GenerationError,
                     HarnessError, JudgeParseError, SchemaError, TauParseError)
from .parsing import (JudgeVerdict, extract_final_answer, extract_probability,
                      parse_judge_reply, verdict_to_v)
from .pipeline import (BuildStats, build_dataset, build_record,
                       generate_aux_pair, judge_preference, load_questions,
                       predict_tau)

__version__ = "0.1.0"
