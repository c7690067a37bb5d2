"""Per-word opacity from compression traces, plus the unigram-frequency baseline.

Words removed in earlier rounds render lighter; words never removed stay at
full opacity. The ladder is linear between the legibility floor and 1.0. The
word-frequency variant fades the most frequent words instead, matching a
target faded fraction as closely as the document's frequency classes allow.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .diff_align import align_levels
from .engine import LevelTrace
from .text_model import Document, word_core


@dataclass(frozen=True)
class OpacityConfig:
    floor: float = 0.30
    method: str = "gp"  # gp | ngp | wf
    wf_faded_fraction_target: float = 0.5
    wf_bands: int = 3
    wf_overshoot_tolerance: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.floor < 1.0:
            raise ValueError("floor must be in (0, 1)")
        if not 0.0 < self.wf_faded_fraction_target < 1.0:
            raise ValueError("wf_faded_fraction_target must be in (0, 1)")


@dataclass(frozen=True)
class WordSaliency:
    """Label and opacity for one token; round is None for words never removed."""

    round: int | None
    opacity: float


@dataclass
class SaliencyMap:
    paragraphs: list[list[WordSaliency]] = field(default_factory=list)

    @property
    def faded_fraction(self) -> float:
        total = sum(len(p) for p in self.paragraphs)
        if total == 0:
            return 0.0
        faded = sum(1 for p in self.paragraphs for w in p if w.opacity < 1.0)
        return faded / total


def opacity_for(round_label: int | None, total_rounds: int, cfg: OpacityConfig) -> float:
    """kept -> 1.0; removed at round r -> floor + (r-1) * (1-floor) / total_rounds."""
    if round_label is None:
        return 1.0
    if not 1 <= round_label <= total_rounds:
        raise ValueError(f"round {round_label} outside 1..{total_rounds}")
    return cfg.floor + (round_label - 1) * (1.0 - cfg.floor) / total_rounds


def map_gp(traces: list[LevelTrace], doc: Document, cfg: OpacityConfig) -> SaliencyMap:
    if len(traces) != len(doc.paragraphs):
        raise ValueError("trace list does not align with document paragraphs")
    saliency = SaliencyMap()
    for paragraph, trace in zip(doc.paragraphs, traces):
        if trace.rounds == 0:
            saliency.paragraphs.append(
                [WordSaliency(round=None, opacity=1.0) for _ in paragraph.tokens]
            )
            continue
        labels = align_levels(trace.levels)
        saliency.paragraphs.append(
            [
                WordSaliency(round=label, opacity=opacity_for(label, trace.rounds, cfg))
                for label in labels
            ]
        )
    return saliency


def _wf_counts(doc: Document) -> Counter[str]:
    counts: Counter[str] = Counter()
    for paragraph in doc.paragraphs:
        for token in paragraph.tokens:
            normalized = word_core(token.text).lower()
            if normalized:
                counts[normalized] += 1
    return counts


def _wf_faded_counts(doc: Document, cfg: OpacityConfig) -> set[int]:
    """Pick the set of frequency classes (distinct counts) to fade.

    Classes are added most-frequent first while the cumulative token fraction
    stays within the target plus tolerance; among feasible prefixes the one
    closest to the target wins. A class that would overshoot beyond the
    tolerance is never added, so all-distinct documents fade nothing.
    """
    counts = _wf_counts(doc)
    total = sum(counts.values())
    if total == 0:
        return set()
    class_tokens: Counter[int] = Counter()
    for word, count in counts.items():
        class_tokens[count] += count
    ordered = sorted(class_tokens, reverse=True)

    best: tuple[float, int] | None = None
    best_prefix = 0
    cumulative = 0
    for k, count_value in enumerate(ordered, start=1):
        cumulative += class_tokens[count_value]
        fraction = cumulative / total
        if fraction > cfg.wf_faded_fraction_target + cfg.wf_overshoot_tolerance:
            break
        distance = abs(fraction - cfg.wf_faded_fraction_target)
        if best is None or distance < best[0]:
            best = (distance, k)
            best_prefix = k
    return set(ordered[:best_prefix])


def map_wf(doc: Document, cfg: OpacityConfig) -> SaliencyMap:
    """Fade frequent words: higher document-level unigram count, lower opacity."""
    counts = _wf_counts(doc)
    faded_counts = _wf_faded_counts(doc, cfg)
    # Most frequent faded class -> band 0 (lightest); spread classes over bands.
    ordered = sorted(faded_counts, reverse=True)
    band_of_count = {
        count_value: (rank * cfg.wf_bands) // len(ordered)
        for rank, count_value in enumerate(ordered)
    }
    saliency = SaliencyMap()
    for paragraph in doc.paragraphs:
        entries: list[WordSaliency] = []
        for token in paragraph.tokens:
            normalized = word_core(token.text).lower()
            count_value = counts.get(normalized, 0) if normalized else 0
            if count_value in band_of_count:
                label = band_of_count[count_value] + 1
                entries.append(
                    WordSaliency(round=label, opacity=opacity_for(label, cfg.wf_bands, cfg))
                )
            else:
                entries.append(WordSaliency(round=None, opacity=1.0))
        saliency.paragraphs.append(entries)
    return saliency
