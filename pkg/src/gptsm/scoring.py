"""Four-component heuristic quality score for post-reversion candidates.

Components (each in [0, 1], averaged without weights): semantic fidelity to
the round-0 paragraph, closeness of the word count to the target ratio of the
previous level, inverse paraphrase count, and the LLM grammar grade. The
grammar component is dropped in non-grammar-preserving mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

from .llm_gateway import Gateway


@dataclass(frozen=True)
class ScoringConfig:
    target_length_ratio: float = 0.85
    include_grammar: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.target_length_ratio <= 1.0:
            raise ValueError("target_length_ratio must be in (0, 1]")


@dataclass(frozen=True)
class CandidateScore:
    semantic_fidelity: float
    length_score: float
    paraphrase_score: float
    grammar_score: float | None
    overall: float


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    dot = sum(a * b for a, b in zip(u, v))
    nu = sqrt(sum(a * a for a in u))
    nv = sqrt(sum(b * b for b in v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)


def semantic_fidelity(gateway: Gateway, original_text: str, candidate_text: str) -> float:
    """Embedding cosine between original and candidate, mapped from [-1,1] to [0,1]."""
    similarity = cosine(gateway.embed_text(original_text), gateway.embed_text(candidate_text))
    return (similarity + 1.0) / 2.0


def length_score(prev_word_count: int, cand_word_count: int, cfg: ScoringConfig) -> float:
    """Linear tent peaking where the candidate hits the target length ratio."""
    if prev_word_count < 1:
        raise ValueError("prev_word_count must be >= 1")
    ratio = cand_word_count / prev_word_count
    target = cfg.target_length_ratio
    return max(0.0, 1.0 - abs(ratio - target) / target)


def paraphrase_score(paraphrase_count: int) -> float:
    return 1.0 / (1.0 + paraphrase_count)


def overall_score(components: Sequence[float]) -> float:
    return sum(components) / len(components)


def score_candidate(
    gateway: Gateway,
    original_text: str,
    candidate_words: Sequence[str],
    prev_word_count: int,
    paraphrase_count: int,
    round_index: int,
    cfg: ScoringConfig,
) -> CandidateScore:
    candidate_text = " ".join(candidate_words)
    fidelity = semantic_fidelity(gateway, original_text, candidate_text)
    length = length_score(prev_word_count, len(candidate_words), cfg)
    paraphrase = paraphrase_score(paraphrase_count)
    grammar: float | None = None
    components = [fidelity, length, paraphrase]
    if cfg.include_grammar:
        grammar = gateway.grade_text(candidate_text, round_index)
        components.append(grammar)
    return CandidateScore(
        semantic_fidelity=fidelity,
        length_score=length,
        paraphrase_score=paraphrase,
        grammar_score=grammar,
        overall=overall_score(components),
    )


def select_best(
    candidates: Sequence[tuple[list[str], CandidateScore]]
) -> tuple[list[str], CandidateScore]:
    """Highest overall score; ties broken by fewer words, then first in list."""
    if not candidates:
        raise ValueError("select_best requires at least one candidate")
    return max(candidates, key=lambda item: (item[1].overall, -len(item[0])))
