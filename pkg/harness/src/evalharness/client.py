"""Chat clients: the injectable interface, a deterministic mock, an
OpenAI-style HTTP client, and a retry wrapper with exponential backoff.

Tests must only ever touch mocks; the HTTP client is the one piece that
talks to the outside world.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

from .errors import ClientError, GenerationError

logger = logging.getLogger(__name__)

API_KEY_ENV = "EVALHARNESS_API_KEY"
BASE_URL_ENV = "EVALHARNESS_BASE_URL"


class ChatClient(Protocol):
    def complete(self, model: str, prompt: str, max_tokens: int,
                 temperature: float = 1.0) -> str: ...


@dataclass
class RecordedCall:
    model: str
    prompt: str
    max_tokens: int


@dataclass
class MockClient:
    """Deterministic offline client.

    With `script` set, replies are consumed in order (then it cycles);
    otherwise replies are synthesized from a stable hash of (model, prompt),
    shaped to whatever the prompt asks for, so full pipelines run
    byte-deterministically without fixtures.
    """

    script: list[str] | None = None
    calls: list[RecordedCall] = field(default_factory=list)
    _cursor: int = 0
    _seen: dict = field(default_factory=dict)

    def complete(self, model: str, prompt: str, max_tokens: int,
                 temperature: float = 1.0) -> str:
        self.calls.append(RecordedCall(model=model, prompt=prompt,
                                       max_tokens=max_tokens))
        if self.script is not None:
            reply = self.script[self._cursor % len(self.script)]
            self._cursor += 1
            return reply
        # repeated identical prompts get distinct (but reproducible) replies,
        # mimicking independent resamples
        key = (model, prompt)
        nth = self._seen.get(key, 0)
        self._seen[key] = nth + 1
        return self._synthesize(model, prompt, nth)

    @staticmethod
    def _synthesize(model: str, prompt: str, nth: int = 0) -> str:
        digest = hashlib.sha256(f"{model}\x00{nth}\x00{prompt}".encode()).digest()
        if '"preference"' in prompt:
            choice = "answer1" if digest[0] % 2 == 0 else "answer2"
            return json.dumps({"preference": choice,
                               "reasoning": "mock comparison of both chains"})
        if "probability" in prompt:
            return f"Mock analysis of the case. Probability: 0.{digest[1] % 100:02d}"
        number = int.from_bytes(digest[2:4], "big") % 1000
        return (f"Reasoning: mock derivation from {model} "
                f"(case {digest[4]:02x}).\nFinal Answer: {number}")


def mock_client_from_fixture(path) -> MockClient:
    """Recorded-fixture client: a JSON file with a list of replies."""
    with open(path, encoding="utf-8") as fh:
        script = json.load(fh)
    if not isinstance(script, list) or not all(isinstance(s, str) for s in script):
        raise ClientError(f"fixture {path} must hold a JSON list of reply strings")
    return MockClient(script=script)


@dataclass
class HttpChatClient:
    """Minimal OpenAI-style /chat/completions client. Credentials come from
    the environment; never hardcode them."""

    base_url: str | None = None
    api_key: str | None = None
    timeout: float = 120.0

    def complete(self, model: str, prompt: str, max_tokens: int,
                 temperature: float = 1.0) -> str:
        import httpx

        base_url = self.base_url or os.environ.get(BASE_URL_ENV)
        api_key = self.api_key or os.environ.get(API_KEY_ENV)
        if not base_url:
            raise ClientError(f"no API base url; set {BASE_URL_ENV}")
        if not api_key:
            raise ClientError(f"no API key; set {API_KEY_ENV}")
        payload = {
            "model": model,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": max_tokens,
            "temperature": temperature,
        }
        try:
            response = httpx.post(
                base_url.rstrip("/") + "/chat/completions",
                headers={"Authorization": f"Bearer {api_key}"},
                json=payload, timeout=self.timeout)
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise ClientError(str(exc)) from exc
        except (KeyError, IndexError, ValueError) as exc:
            raise ClientError(f"malformed completion response: {exc}") from exc


@dataclass
class RetryingClient:
    """Wraps a client with exponential backoff on transport errors."""

    inner: ChatClient
    retries: int = 3
    backoff: float = 1.0
    sleeper: Callable[[float], None] = time.sleep

    def complete(self, model: str, prompt: str, max_tokens: int,
                 temperature: float = 1.0) -> str:
        last: ClientError | None = None
        for attempt in range(self.retries + 1):
            try:
                return self.inner.complete(model, prompt, max_tokens, temperature)
            except ClientError as exc:
                last = exc
                if attempt < self.retries:
                    delay = self.backoff * (2 ** attempt)
                    logger.warning("completion failed (%s); retry %d/%d in %.1fs",
                                   exc, attempt + 1, self.retries, delay)
                    self.sleeper(delay)
        raise GenerationError(f"exhausted {self.retries} retries: {last}")
