"""Fact decomposition: paragraphs in, atomic factual statements out.

The provider returns one fact per line; parsing strips bullets and
numbering, enforces the single-statement rule (a fact re-segments to at
most one sentence), and retries once with a stricter reminder before
raising FormatError. Raw provider output is logged for audit instead of
being filtered heuristically.
"""

from __future__ import annotations

import hashlib
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .articles import Article, Paragraph
from .errors import FormatError, GapforgeError
from .providers import ChatLlmProvider, has_decompose_template
from .segmentation import split_sentences

logger = logging.getLogger(__name__)

_LINE_DECOR = re.compile(r"^\s*(?:[-*•–]|\d+[.)])\s+")


@dataclass(frozen=True)
class AtomicFact:
    """One self-contained factual statement decomposed from a paragraph."""

    id: str
    text: str
    language_code: str
    paragraph_index: int
    section_index: int
    ordinal: int
    source_sentence_index: int | None = None


def fact_id(language_code: str, paragraph_index: int, ordinal: int, text: str) -> str:
    """Stable id over (language, paragraph, ordinal, text)."""
    key = f"{language_code}\x1f{paragraph_index}\x1f{ordinal}\x1f{text}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def _parse_fact_lines(raw: str) -> list[str]:
    facts = []
    for line in raw.splitlines():
        cleaned = _LINE_DECOR.sub("", line).strip()
        if cleaned:
            facts.append(cleaned)
    return facts


def _single_statement(text: str, language_code: str) -> bool:
    return len(split_sentences(text, language_code)) <= 1


def _well_formed(texts: list[str], language_code: str) -> bool:
    return bool(texts) and all(_single_statement(t, language_code) for t in texts)


def _sentence_indices(texts: Sequence[str], paragraph: Paragraph) -> list[int | None]:
    """Match facts back to source sentences by exact text, order-preserving.

    Only the mock provider produces verbatim sentences, so live output
    simply yields None everywhere; downstream tolerates that.
    """
    indices: list[int | None] = []
    cursor = 0
    sentences = paragraph.sentences
    for text in texts:
        found = None
        for j in range(cursor, len(sentences)):
            if sentences[j].text == text:
                found = j
                cursor = j + 1
                break
        indices.append(found)
    return indices


def decompose_paragraph(
    paragraph: Paragraph, language_code: str, provider: ChatLlmProvider
) -> list[AtomicFact]:
    """Decompose one paragraph into atomic facts carrying its indices."""
    if not has_decompose_template(language_code):
        raise ValueError(f"no decomposition prompt template for {language_code!r}")
    if not paragraph.text.strip():
        return []

    raw = provider.decompose(paragraph.text, language_code)
    logger.debug("decompose raw output (p%d): %r", paragraph.index, raw)
    texts = _parse_fact_lines(raw)
    if not _well_formed(texts, language_code):
        raw = provider.decompose(paragraph.text, language_code, strict=True)
        logger.debug("decompose strict retry output (p%d): %r", paragraph.index, raw)
        texts = _parse_fact_lines(raw)
        if not _well_formed(texts, language_code):
            raise FormatError(
                f"provider output not one fact per line after retry: {raw[:200]!r}"
            )

    sentence_indices = _sentence_indices(texts, paragraph)
    return [
        AtomicFact(
            id=fact_id(language_code, paragraph.index, ordinal, text),
            text=text,
            language_code=language_code,
            paragraph_index=paragraph.index,
            section_index=paragraph.section_index,
            ordinal=ordinal,
            source_sentence_index=sentence_indices[ordinal],
        )
        for ordinal, text in enumerate(texts)
    ]


def decompose_article(
    article: Article, provider: ChatLlmProvider, max_concurrency: int = 1
) -> list[AtomicFact]:
    """Decompose every paragraph, in paragraph order.

    Per-paragraph errors propagate with the paragraph index attached;
    there is no partial output.
    """

    def worker(paragraph: Paragraph) -> list[AtomicFact]:
        return decompose_paragraph(paragraph, article.language_code, provider)

    results: list[list[AtomicFact]] = []
    if max_concurrency > 1 and len(article.paragraphs) > 1:
        with ThreadPoolExecutor(max_workers=max_concurrency) as pool:
            futures = [pool.submit(worker, p) for p in article.paragraphs]
            for paragraph, future in zip(article.paragraphs, futures):
                try:
                    results.append(future.result())
                except GapforgeError as exc:
                    raise exc.__class__(f"paragraph {paragraph.index}: {exc}") from exc
    else:
        for paragraph in article.paragraphs:
            try:
                results.append(worker(paragraph))
            except GapforgeError as exc:
                raise exc.__class__(f"paragraph {paragraph.index}: {exc}") from exc

    facts = [fact for chunk in results for fact in chunk]
    seen: set[str] = set()
    for fact in facts:
        if fact.id in seen:
            raise GapforgeError(f"fact id collision: {fact.id}")
        seen.add(fact.id)
    return facts
