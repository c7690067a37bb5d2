"""Small shared utilities for building mock scripts in tests."""

from __future__ import annotations

from gptsm.llm_gateway import paragraph_digest


def entry(
    kind: str, round_no: int | str, responses: list[str], paragraph: str | None = None
) -> tuple[tuple[str, str, str], list[str]]:
    """One mock-script mapping: (kind, paragraph hash or '*', round) -> responses."""
    digest = "*" if paragraph is None else paragraph_digest(paragraph)
    return (kind, digest, str(round_no)), list(responses)


def script(*entries) -> dict[tuple[str, str, str], list[str]]:
    return dict(entries)
