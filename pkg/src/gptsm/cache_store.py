"""Content-addressed persistence of LLM exchanges.

One append-only JSON-lines file plus an in-memory index. Keys are SHA-256
digests of the canonical request serialization; the sample index is part of
the key so multi-sample requests replay as distinct entries. A rerun against
a warmed store never touches the network.

Line format: {"k": <hex digest>, "req": {...}, "resp": <str or [float]>, "t": <ISO-8601>}
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path


class StorageError(Exception):
    """The store file is unreadable or corrupt."""


class VersionConflict(StorageError):
    """A key is being rewritten with a different value.

    Signals a misconfigured non-deterministic backend (e.g. temperature > 0
    without the sample index reaching the key).
    """


def request_summary(
    endpoint: str, model: str, prompt: str, temperature: float, sample_index: int
) -> dict:
    return {
        "endpoint": endpoint,
        "model": model,
        "prompt": prompt,
        "temperature": temperature,
        "sample": sample_index,
    }


def cache_key(req: dict) -> str:
    """SHA-256 hex digest of the canonical request serialization."""
    canonical = json.dumps(req, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    key: str
    request: dict
    response: str | list[float]
    created_at: str


class CacheStore:
    """Thread-safe within one process; cross-process use relies on
    identical-value idempotence only."""

    FILENAME = "exchanges.jsonl"

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.path = self.directory / self.FILENAME
        self._lock = threading.Lock()
        self._index: dict[str, CacheEntry] = {}
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        try:
            raw = self.path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageError(f"cannot read cache store {self.path}: {exc}") from exc
        for line_no, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                entry = CacheEntry(
                    key=record["k"],
                    request=record["req"],
                    response=record["resp"],
                    created_at=record["t"],
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise StorageError(f"{self.path}:{line_no}: corrupt entry: {exc}") from exc
            self._index[entry.key] = entry

    def __len__(self) -> int:
        return len(self._index)

    @property
    def size_bytes(self) -> int:
        return self.path.stat().st_size if self.path.exists() else 0

    def get(self, key: str) -> CacheEntry | None:
        with self._lock:
            return self._index.get(key)

    def put(self, req: dict, response: str | list[float]) -> CacheEntry:
        key = cache_key(req)
        entry = CacheEntry(
            key=key,
            request=req,
            response=response,
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            existing = self._index.get(key)
            if existing is not None:
                if existing.response != response:
                    raise VersionConflict(
                        f"key {key[:12]}... already stored with a different response"
                    )
                return existing
            self.directory.mkdir(parents=True, exist_ok=True)
            line = json.dumps(
                {"k": entry.key, "req": entry.request, "resp": entry.response, "t": entry.created_at},
                ensure_ascii=True,
            )
            try:
                with open(self.path, "a", encoding="utf-8") as handle:
                    handle.write(line + "\n")
                    handle.flush()
            except OSError as exc:
                raise StorageError(f"cannot append to cache store {self.path}: {exc}") from exc
            self._index[key] = entry
            return entry

    def verify(self) -> list[tuple[int, str]]:
        """Re-digest every line; return (line number, problem) for bad ones."""
        problems: list[tuple[int, str]] = []
        if not self.path.exists():
            return problems
        raw = self.path.read_text(encoding="utf-8")
        for line_no, line in enumerate(raw.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                problems.append((line_no, f"invalid JSON: {exc}"))
                continue
            if not isinstance(record, dict) or not {"k", "req", "resp", "t"} <= set(record):
                problems.append((line_no, "missing required fields"))
                continue
            expected = cache_key(record["req"])
            if record["k"] != expected:
                problems.append((line_no, f"digest mismatch: stored {record['k'][:12]}..., computed {expected[:12]}..."))
        return problems
