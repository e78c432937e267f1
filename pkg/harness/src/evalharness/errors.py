"""Harness error types. Record-level failures are logged and skipped by the
dataset builder; build-level failures abort the file."""


class HarnessError(Exception):
    pass


class ClientError(HarnessError):
    """Transport-level failure from the chat client (retriable)."""


class GenerationError(HarnessError):
    """Completion could not be obtained after exhausting retries."""

    def __init__(self, message, question_id=None):
        if question_id is not None:
            message = f"question {question_id!r}: {message}"
        super().__init__(message)
        self.question_id = question_id


class JudgeParseError(HarnessError):
    """The judge reply did not match the JSON verdict contract."""


class TauParseError(HarnessError):
    """No probability could be extracted from the regressor reply."""


class SchemaError(HarnessError):
    """A built record violates the benchmark JSONL contract."""


class BuildAbortedError(HarnessError):
    """Too many records failed; no output file was written."""
