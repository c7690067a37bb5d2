"""Command-line interface.

Runs the pipeline in-process by default; with --server it becomes a thin
client for a running gptsm service. Exit codes: 0 success, 1 runtime or I/O
failure, 2 usage error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import httpx

from .cache_store import StorageError
from .llm_gateway import GatewayError, OfflineCacheMiss
from .pipeline import (
    OfflineCacheCold,
    RunOptions,
    cache_stats,
    cache_verify,
    run_compare,
    run_render,
)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc}") from exc


def _write_output(path: str, output: str) -> None:
    if path == "-":
        sys.stdout.write(output)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(output, encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc}") from exc


def _warn_diagnostics(diagnostics: list[str]) -> None:
    for line in diagnostics:
        click.echo(f"warning: {line}", err=True)


_PIPELINE_OPTIONS = [
    click.option("--sample-count", default=8, show_default=True, help="Shortenings requested per round."),
    click.option("--max-rounds", default=10, show_default=True, help="Safety cap on compression rounds."),
    click.option("--temperature", default=0.7, show_default=True),
    click.option("--target-length-ratio", default=0.85, show_default=True, help="Preferred candidate length as a fraction of the previous level."),
    click.option("--floor", default=0.30, show_default=True, help="Minimum rendering opacity."),
    click.option("--wf-target", default=0.5, show_default=True, help="Faded-token fraction target for --method wf."),
    click.option("--wf-bands", default=3, show_default=True, help="Opacity bands for --method wf."),
    click.option("--model", "chat_model", default="gpt-4", show_default=True),
    click.option("--embed-model", default="text-embedding-3-small", show_default=True),
    click.option("--base-url", default="https://api.openai.com/v1", show_default=True),
    click.option("--api-key-env", default="LLM_API_KEY", show_default=True, help="Environment variable holding the API key."),
    click.option("--cache", "cache_dir", default=".gptsm-cache", show_default=True, help="Cache directory for LLM exchanges."),
    click.option("--mock", "mock_script", type=click.Path(exists=True, dir_okay=False), default=None, help="Scripted mock backend (JSON file); no network."),
    click.option("--echo", "echo_backend", is_flag=True, help="Echo backend: every shortening refuses; renders fully opaque."),
    click.option("--offline", is_flag=True, help="Serve everything from the cache; fail on any miss."),
    click.option("--parallel", "parallel_paragraphs", default=4, show_default=True, help="Paragraphs compressed concurrently."),
    click.option("--fg", "foreground", default="#000000", show_default=True),
    click.option("--bg", "background", default="#ffffff", show_default=True),
    click.option("--font-family", default=None, help="CSS font-family for HTML output (browser default if unset)."),
    click.option("--ansi-depth", type=click.Choice(["24bit", "256"]), default="24bit", show_default=True),
]


def _pipeline_options(command):
    for option in reversed(_PIPELINE_OPTIONS):
        command = option(command)
    return command


def _options_from_kwargs(**kwargs) -> RunOptions:
    return RunOptions(**kwargs)


@click.group()
@click.version_option(package_name="gptsm")
def main() -> None:
    """Grammar-preserving text saliency modulation."""


@main.command("render")
@click.argument("input_path", metavar="INPUT", default="-")
@click.option("--method", type=click.Choice(["gp", "ngp", "wf"]), default="gp", show_default=True)
@click.option("--format", "output_format", type=click.Choice(["html", "ansi", "json"]), default="html", show_default=True)
@click.option("-o", "--out", default="-", show_default=True, help="Output path ('-' for stdout).")
@click.option("--server", default=None, help="Base URL of a gptsm service; run remotely instead of in-process.")
@_pipeline_options
def render_command(input_path: str, method: str, output_format: str, out: str, server: str | None, **kwargs) -> None:
    """Render INPUT (a file or '-' for stdin) with per-word opacity."""
    text = _read_input(input_path)
    if server is not None:
        output, diagnostics = _remote_render(server, text, method, output_format)
    else:
        opts = _options_from_kwargs(method=method, output_format=output_format, **kwargs)
        try:
            result = run_render(text, opts)
        except (OfflineCacheCold, OfflineCacheMiss, StorageError, GatewayError) as exc:
            raise click.ClickException(str(exc)) from exc
        output, diagnostics = result.output, result.diagnostics
    _warn_diagnostics(diagnostics)
    _write_output(out, output)


@main.command("compare")
@click.argument("input_path", metavar="INPUT", default="-")
@click.option("-o", "--out", default="-", show_default=True, help="Output path ('-' for stdout).")
@click.option("--server", default=None, help="Base URL of a gptsm service.")
@_pipeline_options
def compare_command(input_path: str, out: str, server: str | None, **kwargs) -> None:
    """Render INPUT side by side with and without grammar preservation."""
    text = _read_input(input_path)
    if server is not None:
        output, diagnostics = _remote_compare(server, text)
    else:
        opts = _options_from_kwargs(**kwargs)
        try:
            result = run_compare(text, opts)
        except (OfflineCacheCold, OfflineCacheMiss, StorageError, GatewayError) as exc:
            raise click.ClickException(str(exc)) from exc
        output, diagnostics = result.output, result.diagnostics
    _warn_diagnostics(diagnostics)
    _write_output(out, output)


@main.group("cache")
def cache_group() -> None:
    """Inspect the LLM exchange cache."""


@cache_group.command("stats")
@click.option("--cache", "cache_dir", default=".gptsm-cache", show_default=True)
def cache_stats_command(cache_dir: str) -> None:
    """Print entry count and size."""
    try:
        stats = cache_stats(cache_dir)
    except StorageError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"{stats['entries']} entries ({stats['size_bytes']} bytes) at {stats['path']}")


@cache_group.command("verify")
@click.option("--cache", "cache_dir", default=".gptsm-cache", show_default=True)
def cache_verify_command(cache_dir: str) -> None:
    """Re-digest every cache entry and report corruption."""
    try:
        problems = cache_verify(cache_dir)
    except StorageError as exc:
        raise click.ClickException(str(exc)) from exc
    if problems:
        for line, message in problems:
            click.echo(f"line {line}: {message}", err=True)
        raise click.ClickException(f"{len(problems)} corrupt entries")
    stats = cache_stats(cache_dir)
    click.echo(f"ok ({stats['entries']} entries)")


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@_pipeline_options
def serve_command(host: str, port: int, **kwargs) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    app = create_app(_options_from_kwargs(**kwargs))
    uvicorn.run(app, host=host, port=port)


def _remote_render(
    server: str,
    text: str,
    method: str,
    output_format: str,
    client: httpx.Client | None = None,
) -> tuple[str, list[str]]:
    payload = {"text": text, "method": method, "format": output_format}
    data = _remote_post(server, "/render", payload, client)
    return data["output"], data["diagnostics"]


def _remote_compare(
    server: str, text: str, client: httpx.Client | None = None
) -> tuple[str, list[str]]:
    data = _remote_post(server, "/compare", {"text": text}, client)
    return data["output"], data["diagnostics"]


def _remote_post(
    server: str, path: str, payload: dict, client: httpx.Client | None
) -> dict:
    close = client is None
    client = client or httpx.Client(timeout=600.0)
    try:
        response = client.post(server.rstrip("/") + path, json=payload)
        if response.status_code != 200:
            raise click.ClickException(
                f"service returned {response.status_code}: {response.text[:200]}"
            )
        return response.json()
    except httpx.HTTPError as exc:
        raise click.ClickException(f"cannot reach service at {server}: {exc}") from exc
    finally:
        if close:
            client.close()


if __name__ == "__main__":
    main()
