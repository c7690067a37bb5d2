"""Access to chat-completion and embedding endpoints, with caching and mocks.

Holds the three prompt templates used by the pipeline. Every exchange is
recorded through the cache store before a response is returned, keyed by
(endpoint, model, prompt, temperature, sample index), so warmed runs replay
without a backend.

The mock backend is scripted from a JSON file mapping (prompt kind,
paragraph-text hash, round index) to an ordered response list; "*" acts as a
paragraph/round wildcard. Lookup misses fall back to echoing the paragraph
(shorten kinds) or grading "A" (grammar kind), so scripts only describe the
rounds where cutting should happen and recursion ends in a refusal.
"""

from __future__ import annotations

import hashlib
import os
import random
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from math import sqrt
from pathlib import Path
from typing import Protocol, Sequence

import httpx

from .cache_store import CacheStore, cache_key, request_summary


class GatewayError(Exception):
    """Base for backend failures that abort the current paragraph."""


class TransportError(GatewayError):
    """Network or HTTP failure after bounded retries."""


class BackendError(GatewayError):
    """Provider-reported error."""


class OfflineCacheMiss(RuntimeError):
    """A request missed the cache while running offline; aborts the run."""


class PromptKind(Enum):
    SHORTEN_GP = "shorten_gp"
    SHORTEN_NGP = "shorten_ngp"
    GRAMMAR_GRADE = "grammar_grade"

    @property
    def template(self) -> str:
        return _TEMPLATES[self]

    def render(self, paragraph: str) -> str:
        return self.template.replace("{paragraph}", paragraph)


_TEMPLATES = {
    PromptKind.SHORTEN_GP: (
        "Delete spans of words or phrases from the following paragraph that don't "
        "contribute much to its meaning, but keep readability:\n{paragraph}\n"
        "Please do not add any new words or change words, only delete words."
    ),
    PromptKind.SHORTEN_NGP: (
        "Delete spans of words or phrases from the following paragraph that don't "
        "contribute much to its meaning. Don't worry about grammar:\n{paragraph}\n"
        "Please do not add any new words or change words, only delete words."
    ),
    PromptKind.GRAMMAR_GRADE: (
        "Score the following paragraph by how grammatical it is.\n{paragraph}\n"
        "Answer A for grammatically correct, B for moderately grammatical, and C "
        "for bad grammar. Only respond with one letter."
    ),
}

_GRADE_VALUES = {"a": 1.0, "b": 0.5, "c": 0.0}


def parse_grade(reply: str) -> float | None:
    """Map the first A/B/C (case-insensitive) in the reply to its score."""
    for char in reply:
        value = _GRADE_VALUES.get(char.lower())
        if value is not None:
            return value
    return None


@dataclass(frozen=True)
class ChatRequest:
    model: str
    prompt_text: str
    temperature: float
    sample_count: int
    kind: PromptKind
    paragraph_text: str
    round_index: int


class Backend(Protocol):
    def complete(self, req: ChatRequest, sample_indices: Sequence[int]) -> list[str]: ...

    def embed(self, model: str, text: str) -> list[float]: ...


def paragraph_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _mock_embedding(text: str, dim: int) -> list[float]:
    seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")
    rng = random.Random(seed)
    values = [rng.gauss(0.0, 1.0) for _ in range(dim)]
    norm = sqrt(sum(v * v for v in values)) or 1.0
    return [v / norm for v in values]


@dataclass
class MockBackend:
    """Deterministic scripted backend; with no script it echoes every paragraph."""

    script: dict[tuple[str, str, str], list[str]] = field(default_factory=dict)
    embedding_dim: int = 64

    @classmethod
    def from_file(cls, path: str | Path, embedding_dim: int = 64) -> "MockBackend":
        import json

        data = json.loads(Path(path).read_text(encoding="utf-8"))
        script: dict[tuple[str, str, str], list[str]] = {}
        for entry in data.get("completions", []):
            kind = entry["kind"]
            if "paragraph_text" in entry:
                paragraph = paragraph_digest(entry["paragraph_text"])
            else:
                paragraph = entry.get("paragraph_sha256", "*")
            round_key = str(entry.get("round", "*"))
            script[(kind, paragraph, round_key)] = list(entry["responses"])
        return cls(script=script, embedding_dim=embedding_dim)

    def _lookup(self, req: ChatRequest) -> list[str] | None:
        kind = req.kind.value
        digest = paragraph_digest(req.paragraph_text)
        round_key = str(req.round_index)
        for key in (
            (kind, digest, round_key),
            (kind, "*", round_key),
            (kind, digest, "*"),
            (kind, "*", "*"),
        ):
            if key in self.script:
                return self.script[key]
        return None

    def complete(self, req: ChatRequest, sample_indices: Sequence[int]) -> list[str]:
        scripted = self._lookup(req)
        if scripted is None:
            fallback = "A" if req.kind is PromptKind.GRAMMAR_GRADE else req.paragraph_text
            return [fallback for _ in sample_indices]
        return [scripted[i % len(scripted)] for i in sample_indices]

    def embed(self, model: str, text: str) -> list[float]:
        return _mock_embedding(text, self.embedding_dim)


@dataclass
class OfflineBackend:
    """Placeholder used with --offline; any call means the cache was cold."""

    cache_path: Path

    def complete(self, req: ChatRequest, sample_indices: Sequence[int]) -> list[str]:
        raise OfflineCacheMiss(
            f"offline mode: completion not in cache at {self.cache_path}"
        )

    def embed(self, model: str, text: str) -> list[float]:
        raise OfflineCacheMiss(
            f"offline mode: embedding not in cache at {self.cache_path}"
        )


class HttpBackend:
    """Chat-completions-style and embeddings-style JSON HTTP API client."""

    MAX_RETRIES = 2

    def __init__(
        self,
        base_url: str,
        api_key_env: str = "LLM_API_KEY",
        timeout: float = 60.0,
        retry_base_delay: float = 0.5,
        client: httpx.Client | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self.retry_base_delay = retry_base_delay
        self._client = client or httpx.Client(timeout=timeout)

    def _headers(self) -> dict[str, str]:
        api_key = os.environ.get(self.api_key_env)
        if not api_key:
            raise BackendError(
                f"API key environment variable {self.api_key_env} is not set"
            )
        return {"Authorization": f"Bearer {api_key}"}

    def _post(self, path: str, payload: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.MAX_RETRIES + 1):
            try:
                response = self._client.post(
                    f"{self.base_url}{path}", json=payload, headers=self._headers()
                )
            except httpx.HTTPError as exc:
                last_error = exc
                if attempt < self.MAX_RETRIES:
                    time.sleep(self.retry_base_delay * (2**attempt))
                continue
            if response.status_code >= 400:
                raise BackendError(
                    f"{path} returned {response.status_code}: {response.text[:200]}"
                )
            return response.json()
        raise TransportError(f"{path} failed after {self.MAX_RETRIES + 1} attempts: {last_error}")

    def complete(self, req: ChatRequest, sample_indices: Sequence[int]) -> list[str]:
        payload = {
            "model": req.model,
            "messages": [{"role": "user", "content": req.prompt_text}],
            "temperature": req.temperature,
            "n": len(sample_indices),
        }
        data = self._post("/chat/completions", payload)
        try:
            choices = [c["message"]["content"] for c in data["choices"]]
        except (KeyError, TypeError) as exc:
            raise BackendError(f"malformed chat response: {exc}") from exc
        if len(choices) < len(sample_indices):
            raise BackendError(
                f"requested {len(sample_indices)} samples, got {len(choices)}"
            )
        return choices[: len(sample_indices)]

    def embed(self, model: str, text: str) -> list[float]:
        data = self._post("/embeddings", {"model": model, "input": text})
        try:
            return list(data["data"][0]["embedding"])
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"malformed embedding response: {exc}") from exc


class Gateway:
    """Caching front end over a backend, safe for concurrent paragraph pipelines."""

    def __init__(
        self,
        backend: Backend,
        store: CacheStore | None = None,
        chat_model: str = "gpt-4",
        embed_model: str = "text-embedding-3-small",
        temperature: float = 0.7,
        max_inflight: int = 4,
    ):
        self.backend = backend
        self.store = store
        self.chat_model = chat_model
        self.embed_model = embed_model
        self.temperature = temperature
        self._inflight = threading.BoundedSemaphore(max_inflight)

    def _chat(
        self,
        kind: PromptKind,
        paragraph_text: str,
        round_index: int,
        sample_indices: Sequence[int],
    ) -> list[str]:
        req = ChatRequest(
            model=self.chat_model,
            prompt_text=kind.render(paragraph_text),
            temperature=self.temperature,
            sample_count=len(sample_indices),
            kind=kind,
            paragraph_text=paragraph_text,
            round_index=round_index,
        )
        summaries = {
            i: request_summary("chat", req.model, req.prompt_text, req.temperature, i)
            for i in sample_indices
        }
        responses: dict[int, str] = {}
        if self.store is not None:
            for i, summary in summaries.items():
                entry = self.store.get(cache_key(summary))
                if entry is not None:
                    responses[i] = entry.response
        missing = [i for i in sample_indices if i not in responses]
        if missing:
            with self._inflight:
                fresh = self.backend.complete(req, missing)
            for i, response in zip(missing, fresh):
                if self.store is not None:
                    self.store.put(summaries[i], response)
                responses[i] = response
        return [responses[i] for i in sample_indices]

    def shorten(
        self, paragraph_text: str, mode: str, round_index: int, sample_count: int
    ) -> list[str]:
        kind = PromptKind.SHORTEN_NGP if mode == "ngp" else PromptKind.SHORTEN_GP
        return self._chat(kind, paragraph_text, round_index, range(sample_count))

    def grade_text(self, text: str, round_index: int) -> float:
        """Grammar-grade ``text``; unparseable replies retry once, then score 0.5."""
        reply = self._chat(PromptKind.GRAMMAR_GRADE, text, round_index, [0])[0]
        grade = parse_grade(reply)
        if grade is None:
            reply = self._chat(PromptKind.GRAMMAR_GRADE, text, round_index, [1])[0]
            grade = parse_grade(reply)
        return 0.5 if grade is None else grade

    def embed_text(self, text: str) -> list[float]:
        summary = request_summary("embedding", self.embed_model, text, 0.0, 0)
        if self.store is not None:
            entry = self.store.get(cache_key(summary))
            if entry is not None:
                return list(entry.response)
        with self._inflight:
            vector = self.backend.embed(self.embed_model, text)
        if self.store is not None:
            self.store.put(summary, vector)
        return vector
