"""Grammar-preserving text saliency modulation.

Compresses each paragraph recursively through an LLM under delete-only
constraints, labels every word with the round it was cut, and renders the
original text with per-word opacity so that the fully-opaque words at any
threshold still read as grammatical sentences.
"""

from .diff_align import NestingViolation, OpcodeScript, ReversionResult, align_levels, diff, revert
from .engine import EngineConfig, LevelTrace, compress_document, compress_paragraph
from .llm_gateway import Gateway, MockBackend, PromptKind
from .pipeline import RunOptions, RunResult, run_compare, run_render
from .renderers import RenderPlan, Theme, render, render_html, render_ansi, render_json
from .saliency import OpacityConfig, SaliencyMap, WordSaliency, map_gp, map_wf, opacity_for
from .scoring import CandidateScore, ScoringConfig, length_score, paraphrase_score, select_best
from .text_model import Document, Paragraph, Token, reconstruct, segment

__all__ = [
    "NestingViolation",
    "OpcodeScript",
    "ReversionResult",
    "align_levels",
    "diff",
    "revert",
    "EngineConfig",
    "LevelTrace",
    "compress_document",
    "compress_paragraph",
    "Gateway",
    "MockBackend",
    "PromptKind",
    "RunOptions",
    "RunResult",
    "run_compare",
    "run_render",
    "RenderPlan",
    "Theme",
    "render",
    "render_html",
    "render_ansi",
    "render_json",
    "OpacityConfig",
    "SaliencyMap",
    "WordSaliency",
    "map_gp",
    "map_wf",
    "opacity_for",
    "CandidateScore",
    "ScoringConfig",
    "length_score",
    "paraphrase_score",
    "select_best",
    "Document",
    "Paragraph",
    "Token",
    "reconstruct",
    "segment",
]
