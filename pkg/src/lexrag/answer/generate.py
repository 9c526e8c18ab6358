"""Generation providers and the streamed-answer operation.

The stub provider is a fixed template that restates the query and cites
passage 1, so the whole ask pipeline is a deterministic function of its
inputs. The remote provider speaks newline-delimited JSON frames over a
streaming HTTP POST.
"""

from __future__ import annotations

import json
import time
from typing import Iterator, Optional, Protocol, Sequence

import httpx

from ..errors import EmptyQueryError, ProviderUnavailableError
from .events import AnswerEvent
from .prompts import Prompt

REFINEMENT_INSTRUCTION = (
    "Rewrite the user's question as a single precise legal research query. "
    "Keep the original intent, resolve vague references, and return only "
    "the rewritten query."
)


class GenerationProvider(Protocol):
    def stream(self, prompt: Prompt) -> Iterator[str]:
        """Yield raw answer-text deltas for the prompt."""
        ...

    def complete(self, instruction: str, text: str) -> str:
        """One-shot completion used for query refinement."""
        ...


class StubGenerator:
    """Deterministic template generator for tests and offline use."""

    def __init__(self, delta_size: int = 32):
        if delta_size < 1:
            raise ValueError("delta_size must be positive")
        self.delta_size = delta_size

    def answer_text(self, prompt: Prompt) -> str:
        query = " ".join(prompt.user_query.split())
        if prompt.passages:
            return (
                f'Regarding "{query}": the leading authority among the provided '
                f"passages addresses this directly [[cite:1]]. Review the cited "
                f"passage for the controlling language."
            )
        return (
            f'Regarding "{query}": no supporting passages were available, so '
            f"this response is unsourced and should be verified against "
            f"primary authorities."
        )

    def stream(self, prompt: Prompt) -> Iterator[str]:
        text = self.answer_text(prompt)
        for i in range(0, len(text), self.delta_size):
            yield text[i : i + self.delta_size]

    def complete(self, instruction: str, text: str) -> str:
        # Identity-like refinement: trim and collapse whitespace.
        return " ".join(text.split())


class RemoteGenerator:
    """Streaming HTTP generation client.

    Wire format: POST {system, context:[{ordinal,text}], query, stream:true};
    the response body is one JSON frame per line, each
    {type:"delta"|"done"|"error", ...}.
    """

    def __init__(
        self,
        endpoint: str,
        token: Optional[str] = None,
        timeout: float = 120.0,
        client: Optional[httpx.Client] = None,
    ):
        self.endpoint = endpoint
        self._headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = client or httpx.Client(timeout=timeout)

    def _request_body(self, system: str, context: Sequence[tuple[int, str]], query: str) -> dict:
        return {
            "system": system,
            "context": [{"ordinal": ordinal, "text": text} for ordinal, text in context],
            "query": query,
            "stream": True,
        }

    def _stream_frames(self, body: dict) -> Iterator[str]:
        try:
            with self._client.stream("POST", self.endpoint, json=body, headers=self._headers) as resp:
                resp.raise_for_status()
                for line in resp.iter_lines():
                    if not line.strip():
                        continue
                    try:
                        frame = json.loads(line)
                    except json.JSONDecodeError as exc:
                        raise ProviderUnavailableError(f"malformed stream frame: {exc}") from None
                    kind = frame.get("type")
                    if kind == "delta":
                        yield str(frame.get("text", ""))
                    elif kind == "done":
                        return
                    elif kind == "error":
                        raise ProviderUnavailableError(str(frame.get("message", "provider error")))
                    else:
                        raise ProviderUnavailableError(f"unknown stream frame type: {kind!r}")
        except httpx.HTTPError as exc:
            raise ProviderUnavailableError(f"generation provider failed: {exc}") from exc

    def stream(self, prompt: Prompt) -> Iterator[str]:
        body = self._request_body(
            prompt.system_instruction,
            [(p.ordinal, p.text) for p in prompt.passages],
            prompt.user_query,
        )
        return self._stream_frames(body)

    def complete(self, instruction: str, text: str) -> str:
        return "".join(self._stream_frames(self._request_body(instruction, [], text)))


def generate_stream(prompt: Prompt, provider: GenerationProvider) -> Iterator[AnswerEvent]:
    """Stream raw answer deltas, terminated by exactly one done or error.

    Concatenated delta texts equal the provider's full answer; done carries
    wall-clock latency and a whitespace token count.
    """
    start = time.perf_counter()
    parts: list[str] = []
    try:
        for delta in provider.stream(prompt):
            if delta:
                parts.append(delta)
                yield AnswerEvent.delta(delta)
    except ProviderUnavailableError as exc:
        yield AnswerEvent.error(str(exc))
        return
    latency_ms = int((time.perf_counter() - start) * 1000)
    yield AnswerEvent.done(latency_ms=latency_ms, token_count=len("".join(parts).split()))


def magic_query(raw: str, provider: GenerationProvider) -> str:
    """Refine a raw user query through the provider.

    Raises EmptyQueryError on blank input and propagates
    ProviderUnavailableError so callers can fall back to the raw query.
    """
    if not raw or not raw.strip():
        raise EmptyQueryError("cannot refine an empty query")
    refined = provider.complete(REFINEMENT_INSTRUCTION, raw).strip()
    return refined if refined else raw
