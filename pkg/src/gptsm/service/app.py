"""FastAPI application factory.

Backend, cache location, and model ids are fixed when the app is created;
requests choose the method and format and may override tuning knobs. One
cache store and one backend are shared across requests.
"""

from __future__ import annotations

from dataclasses import asdict, replace

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..cache_store import CacheStore, StorageError
from ..engine import compress_document
from ..llm_gateway import Gateway, HttpBackend, MockBackend, OfflineBackend, OfflineCacheMiss
from ..pipeline import RunOptions, run_compare, run_render
from ..text_model import segment
from .schemas import (
    CacheProblem,
    CacheStatsResponse,
    CacheVerifyResponse,
    CompareRequest,
    CompareResponse,
    CompressRequest,
    CompressResponse,
    HealthResponse,
    RenderRequest,
    RenderResponse,
    ScoreModel,
    TraceModel,
    Tuning,
)


def _make_backend(opts: RunOptions, store: CacheStore):
    if opts.offline:
        return OfflineBackend(cache_path=store.path)
    if opts.mock_script is not None:
        return MockBackend.from_file(opts.mock_script)
    if opts.echo_backend:
        return MockBackend()
    return HttpBackend(base_url=opts.base_url, api_key_env=opts.api_key_env)


def _merge(opts: RunOptions, tuning: Tuning, **extra) -> RunOptions:
    overrides = {k: v for k, v in tuning.model_dump().items() if v is not None}
    overrides.update(extra)
    return replace(opts, **overrides)


def create_app(opts: RunOptions | None = None) -> FastAPI:
    opts = opts or RunOptions()
    app = FastAPI(title="gptsm", version="0.1.0")
    store = CacheStore(opts.cache_dir)
    backend = _make_backend(opts, store)

    def gateway_for(merged: RunOptions) -> Gateway:
        return Gateway(
            backend=backend,
            store=store,
            chat_model=merged.chat_model,
            embed_model=merged.embed_model,
            temperature=merged.temperature,
            max_inflight=merged.max_inflight,
        )

    @app.exception_handler(OfflineCacheMiss)
    async def offline_miss(request, exc):
        return JSONResponse(status_code=503, content={"detail": str(exc)})

    @app.exception_handler(StorageError)
    async def storage_error(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.get("/config")
    def config() -> dict:
        safe = asdict(opts)
        safe.pop("api_key_env", None)
        return safe

    @app.post("/render", response_model=RenderResponse)
    def render_endpoint(request: RenderRequest) -> RenderResponse:
        merged = _merge(
            opts, request.tuning, method=request.method, output_format=request.format
        )
        gateway = None if merged.method == "wf" else gateway_for(merged)
        result = run_render(request.text, merged, gateway)
        return RenderResponse(
            output=result.output,
            method=merged.method,
            format=merged.output_format,
            diagnostics=result.diagnostics,
            faded_fraction=result.faded_fraction,
            rounds_per_paragraph=result.rounds_per_paragraph,
        )

    @app.post("/compare", response_model=CompareResponse)
    def compare_endpoint(request: CompareRequest) -> CompareResponse:
        merged = _merge(opts, request.tuning)
        result = run_compare(request.text, merged, gateway_for(merged))
        return CompareResponse(output=result.output, diagnostics=result.diagnostics)

    @app.post("/compress", response_model=CompressResponse)
    def compress_endpoint(request: CompressRequest) -> CompressResponse:
        from ..pipeline import _engine_config  # shared construction rules

        merged = _merge(opts, request.tuning, method=request.mode)
        doc = segment(request.text)
        traces = compress_document(
            doc, gateway_for(merged), _engine_config(merged, request.mode)
        )
        return CompressResponse(
            traces=[
                TraceModel(
                    paragraph_index=t.paragraph_index,
                    rounds=t.rounds,
                    levels=t.levels,
                    per_round_scores=[
                        ScoreModel(
                            semantic_fidelity=s.semantic_fidelity,
                            length_score=s.length_score,
                            paraphrase_score=s.paraphrase_score,
                            grammar_score=s.grammar_score,
                            overall=s.overall,
                        )
                        for s in t.per_round_scores
                    ],
                    diagnostic=t.diagnostic,
                )
                for t in traces
            ]
        )

    @app.get("/cache/stats", response_model=CacheStatsResponse)
    def cache_stats_endpoint() -> CacheStatsResponse:
        return CacheStatsResponse(
            path=str(store.path), entries=len(store), size_bytes=store.size_bytes
        )

    @app.post("/cache/verify", response_model=CacheVerifyResponse)
    def cache_verify_endpoint() -> CacheVerifyResponse:
        problems = store.verify()
        return CacheVerifyResponse(
            ok=not problems,
            problems=[CacheProblem(line=line, message=message) for line, message in problems],
        )

    return app
