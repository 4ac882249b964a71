"""Shared fixtures: repo paths, mock providers, fake wiki transport."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from gapforge.corpus import FixtureRepository
from gapforge.providers import MockEmbeddingProvider, MockLlmProvider

TESTS_DIR = Path(__file__).resolve().parent
GOLDEN_DIR = TESTS_DIR / "golden"
DATA_DIR = TESTS_DIR / "data"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def fixture_repo() -> FixtureRepository:
    return FixtureRepository()


@pytest.fixture
def mock_llm() -> MockLlmProvider:
    return MockLlmProvider()


@pytest.fixture
def mock_embedder() -> MockEmbeddingProvider:
    return MockEmbeddingProvider()


class FakeResponse:
    def __init__(self, payload: dict, status_code: int = 200) -> None:
        self._payload = payload
        self.status_code = status_code

    def json(self) -> dict:
        return self._payload


class FakeWikiSession:
    """Canned wiki API transport: routes on (host language, action params)."""

    def __init__(self, routes: dict[tuple, dict]) -> None:
        self.routes = routes
        self.requests: list[tuple[str, dict]] = []

    def get(self, url: str, params: dict, timeout: float) -> FakeResponse:
        self.requests.append((url, dict(params)))
        lang = url.split("//", 1)[1].split(".", 1)[0]
        prop = params.get("prop", "")
        key = (lang, params.get("titles", ""), prop)
        if key not in self.routes:
            raise AssertionError(f"unexpected wiki request: {key}")
        return FakeResponse(self.routes[key])


def wiki_page_response(
    title: str,
    lang: str,
    extract: str,
    revid: int = 1234567,
    missing: bool = False,
) -> dict:
    if missing:
        return {"batchcomplete": True, "query": {"pages": [{"title": title, "missing": True}]}}
    slug = title.replace(" ", "_")
    return {
        "batchcomplete": True,
        "query": {
            "pages": [
                {
                    "pageid": 99,
                    "ns": 0,
                    "title": title,
                    "extract": extract,
                    "lastrevid": revid,
                    "fullurl": f"https://{lang}.wikipedia.org/wiki/{slug}",
                    "canonicalurl": f"https://{lang}.wikipedia.org/wiki/{slug}",
                }
            ]
        },
    }


def wiki_langlinks_response(title: str, links: dict[str, str]) -> dict:
    page: dict = {"pageid": 99, "ns": 0, "title": title}
    if links:
        page["langlinks"] = [{"lang": lang, "title": t} for lang, t in links.items()]
    return {"batchcomplete": True, "query": {"pages": [page]}}


# --- acceptance reporting: one line per criterion ---------------------------

_ACCEPTANCE_MODULE = "test_acceptance"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if _ACCEPTANCE_MODULE not in nodeid or report.when != "call":
                continue
            name = nodeid.split("::")[-1]
            rows.append((name, "PASS" if status == "passed" else "FAIL"))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(rows):
            terminalreporter.write_line(f"{outcome}  {name}")
