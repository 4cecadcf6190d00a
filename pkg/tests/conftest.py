from __future__ import annotations

import json
import threading
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from crawlsim.fetch import PageSource
from crawlsim.urls import NormalizedUrl, doc_id_of

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def golden():
    def load(name: str):
        with open(GOLDEN_DIR / name, encoding="utf-8") as fp:
            return json.load(fp)

    return load


class RecordingSource(PageSource):
    """Wraps a source and logs every fetch the engine performs."""

    def __init__(self, inner: PageSource) -> None:
        self.inner = inner
        self.log: list[tuple[NormalizedUrl, float]] = []
        self._lock = threading.Lock()

    def fetch(self, url, at):
        with self._lock:
            self.log.append((url, at))
        return self.inner.fetch(url, at)

    def fetched_hosts(self) -> set[str]:
        return {url.host for url, _ in self.log}

    def fetched_doc_ids(self, skip_paths=("/robots.txt",)) -> list[int]:
        return [
            doc_id_of(url) for url, _ in self.log if url.path not in skip_paths
        ]


@pytest.fixture
def recording():
    return RecordingSource
