"""Enrichment of selected gap facts for presentation.

Each selected gap fact gets an English translation, the most
semantically related English sentence as its in-text anchor, and a
link-to-highlight URL that scrolls the original article to the fact's
source sentence via a ``#:~:text=`` text fragment. Text fragments are
the standardized browser mechanism for jumping to an exact sentence in
context, which is exactly the traceability the fact cards need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence
from urllib.parse import quote, urlsplit, urlunsplit

from .align import NeighborSet, cosine, embed
from .articles import Article, Sentence
from .decompose import AtomicFact
from .errors import FormatError, GapforgeError, InvalidUrl, MissingParagraph
from .gapselect import GapEntry
from .providers import ChatLlmProvider, EmbeddingProvider

FULL_FRAGMENT_MAX_BYTES = 300
PREFIX_MAX_BYTES = 150


@dataclass(frozen=True)
class PresentedFact:
    """A gap fact ready for the fact-card UI."""

    id: str
    language_code: str
    text_en: str
    text_src: str
    source_title: str
    source_link_url: str
    anchor_sentence_en: str
    anchor_paragraph_index: int
    similarity: float
    section_index: int

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "language_code": self.language_code,
            "text_en": self.text_en,
            "text_src": self.text_src,
            "source_title": self.source_title,
            "source_link_url": self.source_link_url,
            "anchor_sentence_en": self.anchor_sentence_en,
            "anchor_paragraph_index": self.anchor_paragraph_index,
            "similarity": self.similarity,
            "section_index": self.section_index,
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "PresentedFact":
        return cls(
            id=obj["id"],
            language_code=obj["language_code"],
            text_en=obj["text_en"],
            text_src=obj["text_src"],
            source_title=obj["source_title"],
            source_link_url=obj["source_link_url"],
            anchor_sentence_en=obj["anchor_sentence_en"],
            anchor_paragraph_index=obj["anchor_paragraph_index"],
            similarity=obj["similarity"],
            section_index=obj["section_index"],
        )


def translate(text: str, source_lang: str, provider: ChatLlmProvider) -> str:
    """English rendering of the text, retrying once on empty output."""
    if not text:
        raise ValueError("text must be nonempty")
    result = provider.translate(text, source_lang).strip()
    if not result:
        result = provider.translate(text, source_lang, strict=True).strip()
        if not result:
            raise FormatError("translation provider returned empty output twice")
    return result


def _closest_sentence(
    reference_text: str, sentences: Sequence[Sentence], embedder: EmbeddingProvider
) -> Sentence:
    """Sentence with maximal embedding cosine to the reference; ties earlier."""
    if len(sentences) == 1:
        return sentences[0]
    vectors = embed([reference_text] + [s.text for s in sentences], embedder)
    reference, rest = vectors[0], vectors[1:]
    best = sentences[0]
    best_score = None
    for sentence, vec in zip(sentences, rest):
        score = cosine(reference, vec)
        if best_score is None or score > best_score:
            best, best_score = sentence, score
    return best


def anchor_for(
    gap: GapEntry,
    english_article: Article,
    english_facts: Sequence[AtomicFact],
    embedder: EmbeddingProvider,
) -> tuple[str, int]:
    """The most semantically related English sentence for a gap fact.

    Takes the rank-1 neighbor fact and picks, within that fact's
    paragraph, the sentence closest to the gap fact by cosine. With no
    neighbors at all the anchor falls back to the first lead sentence.
    """
    fact, neighbor_set = gap
    if not neighbor_set.neighbors:
        if not english_article.paragraphs or not english_article.paragraphs[0].sentences:
            raise MissingParagraph("article has no lead sentence to anchor to")
        lead = english_article.paragraphs[0]
        return lead.sentences[0].text, lead.index

    rank1_id = neighbor_set.neighbors[0].source_fact_id
    by_id = {f.id: f for f in english_facts}
    if rank1_id not in by_id:
        raise ValueError(f"rank-1 neighbor {rank1_id} not among the English facts")
    neighbor_fact = by_id[rank1_id]
    if not 0 <= neighbor_fact.paragraph_index < len(english_article.paragraphs):
        raise MissingParagraph(
            f"paragraph {neighbor_fact.paragraph_index} missing from pinned revision"
        )
    paragraph = english_article.paragraphs[neighbor_fact.paragraph_index]
    if not paragraph.sentences:
        raise MissingParagraph(f"paragraph {paragraph.index} has no sentences")
    sentence = _closest_sentence(fact.text, paragraph.sentences, embedder)
    return sentence.text, paragraph.index


def _prefix_on_word_boundary(sentence: str, max_bytes: int = PREFIX_MAX_BYTES) -> str:
    """Longest prefix within max_bytes ending on a word boundary.

    Word boundary means the next original character is whitespace; for
    unspaced scripts (no whitespace inside the prefix) any codepoint
    boundary counts.
    """
    data = sentence.encode("utf-8")
    cut = max_bytes
    while cut > 0 and (data[cut] & 0xC0) == 0x80:
        cut -= 1
    prefix = data[:cut].decode("utf-8")
    if prefix and len(prefix) < len(sentence) and not sentence[len(prefix)].isspace():
        last_ws = None
        for i, ch in enumerate(prefix):
            if ch.isspace():
                last_ws = i
        if last_ws is not None and prefix[:last_ws].strip():
            prefix = prefix[:last_ws]
    stripped = prefix.rstrip()
    return stripped if stripped else prefix


def build_highlight_link(base_url: str, src_sentence: str) -> str:
    """Append a scroll-to-text fragment for the sentence to the base URL.

    Everything outside the unreserved set is percent-escaped (commas and
    ampersands included, since they are fragment syntax). Sentences over
    300 UTF-8 bytes use a prefix of at most 150 bytes on a word boundary
    to stay within practical URL limits.
    """
    if not src_sentence:
        raise ValueError("sentence must be nonempty")
    parts = urlsplit(base_url)
    if parts.scheme not in ("http", "https") or not parts.netloc:
        raise InvalidUrl(f"not an absolute http(s) URL: {base_url!r}")
    base = urlunsplit((parts.scheme, parts.netloc, parts.path, parts.query, ""))

    text = src_sentence
    if len(text.encode("utf-8")) > FULL_FRAGMENT_MAX_BYTES:
        text = _prefix_on_word_boundary(text)
    return f"{base}#:~:text={quote(text, safe='')}"


def enrich_selection(
    selected: Mapping[str, Sequence[GapEntry]],
    english_article: Article,
    english_facts: Sequence[AtomicFact],
    target_articles: Mapping[str, Article],
    llm: ChatLlmProvider,
    embedder: EmbeddingProvider,
) -> dict[str, list[PresentedFact]]:
    """Turn each selected gap into a PresentedFact, preserving order."""
    enriched: dict[str, list[PresentedFact]] = {}
    for language, entries in selected.items():
        article = target_articles[language]
        presented = []
        for fact, neighbor_set in entries:
            try:
                presented.append(
                    _present(fact, neighbor_set, article, english_article, english_facts, llm, embedder)
                )
            except GapforgeError as exc:
                raise exc.__class__(f"fact {fact.id}: {exc}") from exc
        enriched[language] = presented
    return enriched


def _present(
    fact: AtomicFact,
    neighbor_set: NeighborSet,
    source_article: Article,
    english_article: Article,
    english_facts: Sequence[AtomicFact],
    llm: ChatLlmProvider,
    embedder: EmbeddingProvider,
) -> PresentedFact:
    text_en = translate(fact.text, fact.language_code, llm)
    anchor_sentence, anchor_paragraph = anchor_for(
        (fact, neighbor_set), english_article, english_facts, embedder
    )
    if not 0 <= fact.paragraph_index < len(source_article.paragraphs):
        raise MissingParagraph(
            f"paragraph {fact.paragraph_index} missing from pinned revision"
        )
    paragraph = source_article.paragraphs[fact.paragraph_index]
    if not paragraph.sentences:
        raise MissingParagraph(f"paragraph {paragraph.index} has no sentences")
    # The fact's own source sentence when known (mock provider), else the
    # closest sentence of its paragraph.
    if fact.source_sentence_index is not None and fact.source_sentence_index < len(
        paragraph.sentences
    ):
        src_sentence = paragraph.sentences[fact.source_sentence_index]
    else:
        src_sentence = _closest_sentence(fact.text, paragraph.sentences, embedder)
    link = build_highlight_link(source_article.canonical_url, src_sentence.text)
    similarity = neighbor_set.neighbors[0].cosine if neighbor_set.neighbors else 0.0
    return PresentedFact(
        id=fact.id,
        language_code=fact.language_code,
        text_en=text_en,
        text_src=fact.text,
        source_title=source_article.title,
        source_link_url=link,
        anchor_sentence_en=anchor_sentence,
        anchor_paragraph_index=anchor_paragraph,
        similarity=similarity,
        section_index=fact.section_index,
    )
