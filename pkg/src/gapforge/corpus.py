"""Article acquisition: wiki API client, on-disk cache, bundled fixtures.

The wiki client reads rendered plain text through the public query API
(``prop=extracts`` with wiki-style section markers) and pins the revision
id at fetch time so every downstream record can name the exact page
state it was computed from. Infoboxes, tables, references, and captions
never appear in the extract; the pipeline operates on prose paragraphs
only.

Cache layout: ``cache/<lang>/<title-slug>/<revision>.json`` (UTF-8).
A warm cache answers repeated fetches with no network access.
"""

from __future__ import annotations

import json
import logging
import os
import re
import threading
from importlib import resources
from pathlib import Path
from typing import Any, Protocol
from urllib.parse import quote, urlsplit

import requests

from .articles import Article, Paragraph, Section, Sentence
from .errors import NetworkError, NoLanglink, NotFound, ParseError
from .segmentation import segment, split_paragraph_blocks, split_sentences

__all__ = [
    "Article",
    "Section",
    "Paragraph",
    "Sentence",
    "ArticleRepository",
    "WikiRepository",
    "FixtureRepository",
    "segment",
    "fetch_article",
    "resolve_interlanguage",
    "parse_extract",
    "title_slug",
]

logger = logging.getLogger(__name__)

DEFAULT_LANGUAGES = ("en", "fr", "ru", "zh")
USER_AGENT = "gapforge/0.1 (knowledge-gap research pipeline)"

_HEADING = re.compile(r"^(={2,6})\s*(.*?)\s*\1\s*$")

# One lock per cache key so concurrent fetches serialize their writes.
_cache_locks: dict[str, threading.Lock] = {}
_cache_locks_guard = threading.Lock()


def _lock_for(key: str) -> threading.Lock:
    with _cache_locks_guard:
        lock = _cache_locks.get(key)
        if lock is None:
            lock = _cache_locks[key] = threading.Lock()
        return lock


def title_slug(title: str) -> str:
    """Filesystem-safe slug: spaces to underscores, everything risky escaped."""
    return quote(title.replace(" ", "_"), safe="")


def parse_extract(text: str, language_code: str) -> tuple[tuple[Section, ...], tuple[Paragraph, ...]]:
    """Turn a plain-text extract with ``== Heading ==`` markers into sections
    and globally indexed paragraphs."""
    sections: list[Section] = [Section(index=0, heading="", level=1)]
    section_texts: list[list[str]] = [[]]
    for line in text.split("\n"):
        m = _HEADING.match(line)
        if m:
            sections.append(
                Section(index=len(sections), heading=m.group(2), level=len(m.group(1)) - 1)
            )
            section_texts.append([])
        else:
            section_texts[-1].append(line)

    paragraphs: list[Paragraph] = []
    for section, lines in zip(sections, section_texts):
        for block in split_paragraph_blocks("\n".join(lines)):
            paragraphs.append(
                Paragraph(
                    index=len(paragraphs),
                    section_index=section.index,
                    text=block,
                    sentences=split_sentences(block, language_code),
                )
            )
    return tuple(sections), tuple(paragraphs)


class ArticleRepository(Protocol):
    """Read access to article corpora across language editions."""

    def fetch_article(self, title: str, language_code: str) -> Article: ...

    def resolve_interlanguage(self, title: str, source_lang: str, target_lang: str) -> str: ...


class WikiRepository:
    """Live wiki-backed repository with a revision-pinned on-disk cache."""

    def __init__(
        self,
        cache_dir: str | os.PathLike[str],
        languages: tuple[str, ...] = DEFAULT_LANGUAGES,
        session: Any | None = None,
        timeout: float = 30.0,
    ) -> None:
        self.cache_dir = Path(cache_dir)
        self.languages = tuple(languages)
        self.timeout = timeout
        if session is None:
            session = requests.Session()
            session.headers.update({"User-Agent": USER_AGENT})
        self._session = session

    # -- HTTP plumbing -------------------------------------------------

    def _api_url(self, language_code: str) -> str:
        return f"https://{language_code}.wikipedia.org/w/api.php"

    def _get_json(self, language_code: str, params: dict[str, Any]) -> dict[str, Any]:
        query = {"format": "json", "formatversion": 2, **params}
        try:
            resp = self._session.get(
                self._api_url(language_code), params=query, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise NetworkError(f"wiki API request failed: {exc}") from exc
        if getattr(resp, "status_code", 200) != 200:
            raise NetworkError(f"wiki API returned HTTP {resp.status_code}")
        try:
            return resp.json()
        except ValueError as exc:
            raise ParseError(f"wiki API returned non-JSON body: {exc}") from exc

    # -- cache ---------------------------------------------------------

    def _cache_key_dir(self, language_code: str, title: str) -> Path:
        return self.cache_dir / language_code / title_slug(title)

    def _cache_lookup(self, language_code: str, title: str) -> Article | None:
        key_dir = self._cache_key_dir(language_code, title)
        if not key_dir.is_dir():
            return None
        revisions = sorted(key_dir.glob("*.json"))
        if not revisions:
            return None

        def revision_order(path: Path) -> tuple[int, int | str]:
            stem = path.stem
            return (0, int(stem)) if stem.isdigit() else (1, stem)

        newest = max(revisions, key=revision_order)
        with newest.open(encoding="utf-8") as fh:
            return Article.from_json_obj(json.load(fh))

    def _cache_store(self, article: Article) -> None:
        key_dir = self._cache_key_dir(article.language_code, article.title)
        key = str(key_dir)
        with _lock_for(key):
            key_dir.mkdir(parents=True, exist_ok=True)
            target = key_dir / f"{title_slug(article.revision_id)}.json"
            tmp = target.with_suffix(".json.tmp")
            tmp.write_text(
                json.dumps(article.to_json_obj(), ensure_ascii=False, indent=2, sort_keys=True),
                encoding="utf-8",
            )
            os.replace(tmp, target)

    # -- operations ------------------------------------------------------

    def fetch_article(self, title: str, language_code: str) -> Article:
        if not title:
            raise NotFound("empty title")
        if language_code not in self.languages:
            raise ValueError(f"language {language_code!r} not in configured set {self.languages}")

        cached = self._cache_lookup(language_code, title)
        if cached is not None:
            return cached

        data = self._get_json(
            language_code,
            {
                "action": "query",
                "titles": title,
                "redirects": 1,
                "prop": "extracts|info",
                "explaintext": 1,
                "exsectionformat": "wiki",
                "exlimit": 1,
                "inprop": "url",
            },
        )
        pages = data.get("query", {}).get("pages", [])
        if not pages:
            raise NotFound(f"no such page: {title!r} ({language_code})")
        page = pages[0]
        if page.get("missing") or page.get("invalid"):
            raise NotFound(f"no such page: {title!r} ({language_code})")

        extract = page.get("extract")
        if not extract or not extract.strip():
            raise ParseError(f"page body unextractable: {title!r} ({language_code})")
        canonical_url = page.get("fullurl") or page.get("canonicalurl")
        if not canonical_url:
            raise ParseError(f"page has no canonical URL: {title!r}")
        host = urlsplit(canonical_url).netloc
        if not host.startswith(f"{language_code}."):
            raise ParseError(f"canonical URL host {host!r} does not match {language_code!r}")
        revision_id = str(page.get("lastrevid", ""))
        if not revision_id:
            raise ParseError(f"page has no revision id: {title!r}")

        sections, paragraphs = parse_extract(extract, language_code)
        article = Article(
            language_code=language_code,
            title=page.get("title", title),
            revision_id=revision_id,
            canonical_url=canonical_url,
            sections=sections,
            paragraphs=paragraphs,
        )
        self._cache_store(article)
        return article

    def resolve_interlanguage(self, title: str, source_lang: str, target_lang: str) -> str:
        if source_lang == target_lang:
            return title
        data = self._get_json(
            source_lang,
            {
                "action": "query",
                "titles": title,
                "redirects": 1,
                "prop": "langlinks",
                "lllang": target_lang,
                "lllimit": "max",
            },
        )
        pages = data.get("query", {}).get("pages", [])
        if not pages or pages[0].get("missing") or pages[0].get("invalid"):
            raise NotFound(f"no such page: {title!r} ({source_lang})")
        links = pages[0].get("langlinks") or []
        if not links:
            raise NoLanglink(f"{title!r} has no {target_lang} edition")
        return links[0]["title"]


class FixtureRepository:
    """Repository over the bundled demo corpus (used by mock-mode builds).

    Layout mirrors the cache: ``articles/<lang>/<title-slug>.json`` plus a
    ``langlinks.json`` interlanguage table.
    """

    def __init__(self, root: str | os.PathLike[str] | None = None) -> None:
        if root is None:
            root = Path(str(resources.files("gapforge").joinpath("fixtures")))
        self.root = Path(root)
        with (self.root / "langlinks.json").open(encoding="utf-8") as fh:
            self._langlinks: dict[str, dict[str, dict[str, str]]] = json.load(fh)

    def fetch_article(self, title: str, language_code: str) -> Article:
        if not title:
            raise NotFound("empty title")
        path = self.root / "articles" / language_code / f"{title_slug(title)}.json"
        if not path.is_file():
            raise NotFound(f"no bundled article: {title!r} ({language_code})")
        with path.open(encoding="utf-8") as fh:
            return Article.from_json_obj(json.load(fh))

    def resolve_interlanguage(self, title: str, source_lang: str, target_lang: str) -> str:
        if source_lang == target_lang:
            return title
        by_title = self._langlinks.get(source_lang, {})
        if title not in by_title:
            raise NotFound(f"no bundled article: {title!r} ({source_lang})")
        links = by_title[title]
        if target_lang not in links:
            raise NoLanglink(f"{title!r} has no {target_lang} edition")
        return links[target_lang]


def _default_repository() -> WikiRepository:
    cache_dir = os.environ.get("GAPFORGE_CACHE_DIR", "cache")
    return WikiRepository(cache_dir)


def fetch_article(
    title: str, language_code: str, repository: ArticleRepository | None = None
) -> Article:
    repo = repository or _default_repository()
    return repo.fetch_article(title, language_code)


def resolve_interlanguage(
    title: str,
    source_lang: str,
    target_lang: str,
    repository: ArticleRepository | None = None,
) -> str:
    repo = repository or _default_repository()
    return repo.resolve_interlanguage(title, source_lang, target_lang)
