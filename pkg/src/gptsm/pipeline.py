"""End-to-end runs: segment, compress (or frequency-map), fade, render.

This is the single entry point shared by the CLI and the HTTP service, so
both surfaces behave identically for the same options.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .cache_store import CacheStore
from .engine import EngineConfig, LevelTrace, compress_document
from .llm_gateway import Gateway, HttpBackend, MockBackend, OfflineBackend
from .renderers import RenderPlan, Theme, render, render_compare_html
from .saliency import OpacityConfig, SaliencyMap, map_gp, map_wf
from .scoring import ScoringConfig
from .text_model import Document, segment


class OfflineCacheCold(RuntimeError):
    """Offline mode was requested but the cache has no entries."""


@dataclass(frozen=True)
class RunOptions:
    method: str = "gp"  # gp | ngp | wf
    output_format: str = "html"  # html | ansi | json
    sample_count: int = 8
    max_rounds: int = 10
    temperature: float = 0.7
    target_length_ratio: float = 0.85
    floor: float = 0.30
    wf_target: float = 0.5
    wf_bands: int = 3
    chat_model: str = "gpt-4"
    embed_model: str = "text-embedding-3-small"
    base_url: str = "https://api.openai.com/v1"
    api_key_env: str = "LLM_API_KEY"
    cache_dir: str = ".gptsm-cache"
    mock_script: str | None = None
    echo_backend: bool = False
    offline: bool = False
    max_inflight: int = 4
    parallel_paragraphs: int = 4
    foreground: str = "#000000"
    background: str = "#ffffff"
    font_family: str | None = None
    ansi_depth: str = "24bit"


@dataclass
class RunResult:
    output: str
    diagnostics: list[str] = field(default_factory=list)
    faded_fraction: float = 0.0
    rounds_per_paragraph: list[int] = field(default_factory=list)


def build_gateway(opts: RunOptions) -> Gateway:
    store = CacheStore(opts.cache_dir)
    if opts.offline:
        if len(store) == 0:
            raise OfflineCacheCold(
                f"offline mode needs a warmed cache; {store.path} has no entries"
            )
        backend = OfflineBackend(cache_path=store.path)
    elif opts.mock_script is not None:
        backend = MockBackend.from_file(opts.mock_script)
    elif opts.echo_backend:
        backend = MockBackend()
    else:
        backend = HttpBackend(base_url=opts.base_url, api_key_env=opts.api_key_env)
    return Gateway(
        backend=backend,
        store=store,
        chat_model=opts.chat_model,
        embed_model=opts.embed_model,
        temperature=opts.temperature,
        max_inflight=opts.max_inflight,
    )


def _opacity_config(opts: RunOptions) -> OpacityConfig:
    return OpacityConfig(
        floor=opts.floor,
        method=opts.method,
        wf_faded_fraction_target=opts.wf_target,
        wf_bands=opts.wf_bands,
    )


def _engine_config(opts: RunOptions, mode: str) -> EngineConfig:
    return EngineConfig(
        sample_count=opts.sample_count,
        max_rounds=opts.max_rounds,
        mode=mode,
        scoring=ScoringConfig(
            target_length_ratio=opts.target_length_ratio,
            include_grammar=(mode == "gp"),
        ),
        parallel_paragraphs=opts.parallel_paragraphs,
    )


def _theme(opts: RunOptions) -> Theme:
    return Theme(
        foreground=opts.foreground,
        background=opts.background,
        font_family=opts.font_family,
        ansi_depth=opts.ansi_depth,
    )


def compute_saliency(
    doc: Document, opts: RunOptions, gateway: Gateway | None = None
) -> tuple[SaliencyMap, list[LevelTrace]]:
    """Traces are empty for the wf method, which needs no model calls."""
    if opts.method == "wf":
        return map_wf(doc, _opacity_config(opts)), []
    if gateway is None:
        gateway = build_gateway(opts)
    traces = compress_document(doc, gateway, _engine_config(opts, opts.method))
    return map_gp(traces, doc, _opacity_config(opts)), traces


def run_render(text: str, opts: RunOptions, gateway: Gateway | None = None) -> RunResult:
    doc = segment(text)
    saliency, traces = compute_saliency(doc, opts, gateway)
    plan = RenderPlan(doc=doc, saliency=saliency, theme=_theme(opts))
    return RunResult(
        output=render(plan, opts.output_format),
        diagnostics=[
            f"paragraph {t.paragraph_index}: {t.diagnostic}"
            for t in traces
            if t.diagnostic
        ],
        faded_fraction=saliency.faded_fraction,
        rounds_per_paragraph=[t.rounds for t in traces],
    )


def run_compare(text: str, opts: RunOptions, gateway: Gateway | None = None) -> RunResult:
    """The same passage rendered side by side with and without grammar preservation."""
    doc = segment(text)
    if gateway is None:
        gateway = build_gateway(opts)
    diagnostics: list[str] = []
    plans = []
    for mode in ("gp", "ngp"):
        mode_opts = replace(opts, method=mode)
        saliency, traces = compute_saliency(doc, mode_opts, gateway)
        diagnostics.extend(
            f"{mode}: paragraph {t.paragraph_index}: {t.diagnostic}"
            for t in traces
            if t.diagnostic
        )
        plans.append(RenderPlan(doc=doc, saliency=saliency, theme=_theme(opts)))
    return RunResult(
        output=render_compare_html(plans[0], plans[1]),
        diagnostics=diagnostics,
    )


def cache_stats(cache_dir: str) -> dict:
    store = CacheStore(cache_dir)
    return {
        "path": str(store.path),
        "entries": len(store),
        "size_bytes": store.size_bytes,
    }


def cache_verify(cache_dir: str) -> list[tuple[int, str]]:
    return CacheStore(Path(cache_dir)).verify()
