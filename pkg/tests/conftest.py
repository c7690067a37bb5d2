from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gptsm.cache_store import CacheStore
from gptsm.llm_gateway import Gateway, MockBackend

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fig2_script_path() -> Path:
    return FIXTURES / "fig2_script.json"


@pytest.fixture
def deforestation_path() -> Path:
    return FIXTURES / "deforestation.txt"


@pytest.fixture
def make_gateway(tmp_path):
    """Gateway factory over a scripted mock backend and a scratch cache."""

    def build(script: dict | None = None, script_path: Path | None = None, **kwargs) -> Gateway:
        if script_path is not None:
            backend = MockBackend.from_file(script_path)
        else:
            backend = MockBackend(script=script or {})
        store = CacheStore(tmp_path / "cache")
        return Gateway(backend=backend, store=store, **kwargs)

    return build
