"""Reply parsing: the judge's JSON verdict and the regressor's probability."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import JudgeParseError, TauParseError

_PREFERENCES = ("answer1", "answer2")


@dataclass(frozen=True)
class JudgeVerdict:
    preference: str  # exactly "answer1" or "answer2"
    reasoning: str

    def __post_init__(self):
        if self.preference not in _PREFERENCES:
            raise JudgeParseError(
                f"preference must be one of {_PREFERENCES}, got {self.preference!r}")


def _strip_to_json_object(text: str) -> str:
    # the one permitted repair: drop wrapper text around the outermost object
    start = text.find("{")
    end = text.rfind("}")
    if start == -1 or end == -1 or end <= start:
        raise JudgeParseError(f"no JSON object in judge reply: {text[:120]!r}")
    return text[start:end + 1]


def parse_judge_reply(text: str) -> JudgeVerdict:
    """Parse the judge's JSON verdict, allowing one repair attempt that
    strips non-JSON prefix/suffix text. Anything deeper is a parse error;
    a preference is never invented."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        try:
            obj = json.loads(_strip_to_json_object(text))
        except json.JSONDecodeError as exc:
            raise JudgeParseError(f"unparseable judge reply: {text[:120]!r}") from exc
    if not isinstance(obj, dict) or "preference" not in obj:
        raise JudgeParseError(f"judge reply missing 'preference': {text[:120]!r}")
    preference = obj["preference"]
    if preference not in _PREFERENCES:
        raise JudgeParseError(
            f"judge preference must be one of {_PREFERENCES}, got {preference!r}")
    return JudgeVerdict(preference=preference,
                        reasoning=str(obj.get("reasoning", "")))


def verdict_to_v(verdict: JudgeVerdict) -> int:
    return 1 if verdict.preference == "answer1" else 0


_NUMBER = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")


def extract_probability(text: str) -> tuple[float, bool]:
    """Last number in [0, 1] from the reply (models often restate the
    question's numbers first). If none is in range, the last number is
    clamped and flagged. Returns (value, clamped)."""
    numbers = [float(tok) for tok in _NUMBER.findall(text)]
    if not numbers:
        raise TauParseError(f"no number in regressor reply: {text[:120]!r}")
    in_range = [value for value in numbers if 0.0 <= value <= 1.0]
    if in_range:
        return in_range[-1], False
    return min(max(numbers[-1], 0.0), 1.0), True


def extract_final_answer(text: str) -> str:
    """The text after the last 'Final Answer:' marker, or the whole reply."""
    marker = "Final Answer:"
    idx = text.rfind(marker)
    tail = text[idx + len(marker):] if idx != -1 else text
    return tail.strip().rstrip(".")
