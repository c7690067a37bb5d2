from __future__ import annotations

import json


import pytest
from fastapi.testclient import TestClient

from gptsm.cli import _remote_compare, _remote_render
from gptsm.pipeline import RunOptions
from gptsm.renderers import extract_html_texts
from gptsm.service import create_app

from fig2_data import FIG2_LEVELS


@pytest.fixture
def echo_client(tmp_path):
    app = create_app(RunOptions(echo_backend=True, cache_dir=str(tmp_path / "cache")))
    with TestClient(app) as client:
        yield client


@pytest.fixture
def fig2_client(tmp_path, fig2_script_path):
    app = create_app(
        RunOptions(mock_script=str(fig2_script_path), cache_dir=str(tmp_path / "cache"))
    )
    with TestClient(app) as client:
        yield client


def test_health(echo_client):
    response = echo_client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_config_hides_api_key_env(echo_client):
    data = echo_client.get("/config").json()
    assert data["echo_backend"] is True
    assert "api_key_env" not in data


def test_render_wf_json(echo_client):
    response = echo_client.post(
        "/render",
        json={"text": "a a b c", "method": "wf", "format": "json"},
    )
    assert response.status_code == 200
    body = response.json()
    payload = json.loads(body["output"])
    assert [item["text"] for item in payload[0]] == ["a", "a", "b", "c"]
    assert body["faded_fraction"] == pytest.approx(0.5)
    assert body["method"] == "wf"


def test_render_gp_echo_html(echo_client):
    response = echo_client.post(
        "/render", json={"text": "hello world", "method": "gp", "format": "html"}
    )
    assert response.status_code == 200
    body = response.json()
    assert extract_html_texts(body["output"]) == ["hello world"]
    assert body["rounds_per_paragraph"] == [0]
    assert body["diagnostics"] == []


def test_render_validates_method(echo_client):
    response = echo_client.post("/render", json={"text": "x", "method": "nope"})
    assert response.status_code == 422


def test_render_accepts_tuning_overrides(echo_client):
    response = echo_client.post(
        "/render",
        json={
            "text": "a a b c",
            "method": "wf",
            "format": "json",
            "tuning": {"wf_target": 0.9, "floor": 0.5},
        },
    )
    assert response.status_code == 200
    payload = json.loads(response.json()["output"])
    assert {item["opacity"] for item in payload[0]} == {0.5, 1.0}


def test_compress_replays_fig2(fig2_client):
    response = fig2_client.post("/compress", json={"text": FIG2_LEVELS[0], "mode": "gp"})
    assert response.status_code == 200
    traces = response.json()["traces"]
    assert len(traces) == 1
    assert traces[0]["rounds"] == 4
    assert [len(level) for level in traces[0]["levels"]] == [60, 49, 38, 31, 29]
    assert len(traces[0]["per_round_scores"]) == 4
    assert traces[0]["diagnostic"] is None


def test_compare_echo_columns_identical(echo_client):
    response = echo_client.post("/compare", json={"text": "same text both sides"})
    assert response.status_code == 200
    texts = extract_html_texts(response.json()["output"])
    assert texts == ["same text both sides"] * 2


def test_cache_endpoints(echo_client):
    stats = echo_client.get("/cache/stats").json()
    assert stats["entries"] == 0
    echo_client.post("/render", json={"text": "warm me", "method": "gp"})
    stats = echo_client.get("/cache/stats").json()
    assert stats["entries"] > 0
    verify = echo_client.post("/cache/verify").json()
    assert verify == {"ok": True, "problems": []}


def test_offline_cold_cache_returns_503(tmp_path):
    app = create_app(RunOptions(offline=True, cache_dir=str(tmp_path / "cold")))
    with TestClient(app) as client:
        response = client.post("/render", json={"text": "x", "method": "gp"})
        assert response.status_code == 503
        assert "cache" in response.json()["detail"]


def test_offline_service_replays_warmed_cache(tmp_path, fig2_script_path):
    cache_dir = str(tmp_path / "cache")
    warm_app = create_app(RunOptions(mock_script=str(fig2_script_path), cache_dir=cache_dir))
    with TestClient(warm_app) as client:
        warmed = client.post(
            "/render", json={"text": FIG2_LEVELS[0], "method": "gp", "format": "json"}
        ).json()["output"]

    offline_app = create_app(RunOptions(offline=True, cache_dir=cache_dir))
    with TestClient(offline_app) as client:
        replayed = client.post(
            "/render", json={"text": FIG2_LEVELS[0], "method": "gp", "format": "json"}
        ).json()["output"]
    assert replayed == warmed


def test_thin_client_helpers_against_asgi_app(tmp_path):
    # TestClient is an httpx.Client, so it can stand in for the thin client's
    # HTTP session without opening a socket.
    app = create_app(RunOptions(echo_backend=True, cache_dir=str(tmp_path / "cache")))
    with TestClient(app) as client:
        output, diagnostics = _remote_render(
            "http://testserver", "hello there", "wf", "ansi", client=client
        )
        assert "hello" in output and diagnostics == []
        compared, _ = _remote_compare("http://testserver", "hello there", client=client)
        assert extract_html_texts(compared) == ["hello there"] * 2
