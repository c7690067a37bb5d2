"""Per-paragraph recursive compression loop.

Each round asks the gateway for ``sample_count`` shortenings of the current
level, reverts insertions and substitutions, discards candidates that deleted
nothing, scores the rest, and keeps the best as the next level. Recursion
stops when every sample refuses to cut (or the round cap is reached), so the
number of levels adapts to the paragraph's complexity.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .diff_align import revert
from .llm_gateway import Gateway, GatewayError
from .scoring import CandidateScore, ScoringConfig, score_candidate, select_best
from .text_model import Document, Paragraph, split_words


@dataclass(frozen=True)
class EngineConfig:
    sample_count: int = 8
    max_rounds: int = 10
    mode: str = "gp"  # gp | ngp
    scoring: ScoringConfig = field(default_factory=ScoringConfig)
    parallel_paragraphs: int = 4

    def __post_init__(self) -> None:
        if self.mode not in ("gp", "ngp"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "ngp" and self.scoring.include_grammar:
            object.__setattr__(
                self, "scoring", ScoringConfig(self.scoring.target_length_ratio, False)
            )
        if self.sample_count < 1 or self.max_rounds < 1:
            raise ValueError("sample_count and max_rounds must be positive")


@dataclass
class LevelTrace:
    """Chosen post-reversion word lists per round; levels[0] is the original."""

    paragraph_index: int
    levels: list[list[str]]
    per_round_scores: list[CandidateScore] = field(default_factory=list)
    diagnostic: str | None = None

    @property
    def rounds(self) -> int:
        return len(self.levels) - 1


def compress_paragraph(
    paragraph: Paragraph, gateway: Gateway, cfg: EngineConfig
) -> LevelTrace:
    trace = LevelTrace(paragraph_index=paragraph.index, levels=[paragraph.words()])
    original_text = " ".join(trace.levels[0])
    for round_index in range(1, cfg.max_rounds + 1):
        current = trace.levels[-1]
        current_text = " ".join(current)
        responses = gateway.shorten(current_text, cfg.mode, round_index, cfg.sample_count)

        survivors: list[tuple[list[str], int]] = []
        for response in responses:
            result = revert(current, split_words(response))
            # A candidate that deleted nothing is a refusal; an empty one is
            # unusable as a display level. Neither is scored.
            if 0 < len(result.reverted_words) < len(current):
                survivors.append((result.reverted_words, result.paraphrase_count))
        if not survivors:
            break

        scored = [
            (
                words,
                score_candidate(
                    gateway,
                    original_text,
                    words,
                    len(current),
                    paraphrases,
                    round_index,
                    cfg.scoring,
                ),
            )
            for words, paraphrases in survivors
        ]
        best_words, best_score = select_best(scored)
        trace.levels.append(best_words)
        trace.per_round_scores.append(best_score)
    return trace


def compress_document(
    doc: Document, gateway: Gateway, cfg: EngineConfig
) -> list[LevelTrace]:
    """One trace per paragraph, in paragraph order.

    Blank paragraphs get a zero-round trace. A gateway failure degrades that
    paragraph to a zero-round trace with a diagnostic; other paragraphs
    proceed, so the document always renders (failed paragraphs fully opaque).
    """

    def run(paragraph: Paragraph) -> LevelTrace:
        if paragraph.is_blank:
            return LevelTrace(paragraph_index=paragraph.index, levels=[[]])
        try:
            return compress_paragraph(paragraph, gateway, cfg)
        except GatewayError as exc:
            return LevelTrace(
                paragraph_index=paragraph.index,
                levels=[paragraph.words()],
                diagnostic=f"{type(exc).__name__}: {exc}",
            )

    if cfg.parallel_paragraphs > 1 and len(doc.paragraphs) > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallel_paragraphs) as pool:
            return list(pool.map(run, doc.paragraphs))
    return [run(p) for p in doc.paragraphs]
