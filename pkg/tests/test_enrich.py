"""Enrichment tests: translation, anchoring, highlight links, composition."""

from __future__ import annotations

from urllib.parse import unquote

import pytest

from gapforge.align import Neighbor, NeighborSet, classify_article_pair
from gapforge.decompose import decompose_article
from gapforge.enrich import (
    anchor_for,
    build_highlight_link,
    enrich_selection,
    translate,
)
from gapforge.errors import InvalidUrl, MissingParagraph
from gapforge.gapselect import GapInventory, select_for_topic

MING_SENTENCE = (
    "The Peking roast duck that came to be associated with the term was "
    "fully developed during the later Ming dynasty."
)

# Derived once with an independent byte-loop percent encoder.
EXPECTED_ZH_URL = (
    "https://zh.wikipedia.org/wiki/%E5%8C%97%E4%BA%AC%E7%83%A4%E9%B8%AD"
    "#:~:text=%E4%BC%A0%E7%BB%9F%E5%90%83%E6%B3%95%E6%98%AF%E5%9C%A8"
    "%E8%82%89%E4%B9%8B%E5%90%8E%E4%B8%8A%E4%B8%80%E9%81%93%E7%99%BD"
    "%E8%8F%9C%E6%B1%A4%E3%80%82"
)


def run_mock_pipeline(fixture_repo, mock_llm, mock_embedder, topic="Peking duck", cap=10):
    english = fixture_repo.fetch_article(topic, "en")
    english_facts = decompose_article(english, mock_llm)
    inventories = {}
    target_articles = {}
    for lang in ("fr", "ru", "zh"):
        title = fixture_repo.resolve_interlanguage(topic, "en", lang)
        article = fixture_repo.fetch_article(title, lang)
        facts = decompose_article(article, mock_llm)
        _, gap_verdicts = classify_article_pair(english_facts, facts, mock_llm, mock_embedder)
        by_id = {f.id: f for f in facts}
        gaps = tuple((by_id[v.target_fact_id], v.neighbor_set) for v in gap_verdicts)
        inventories[lang] = GapInventory(language_code=lang, topic=topic, gaps=gaps)
        target_articles[lang] = article
    selected = select_for_topic(inventories, cap=cap)
    return english, english_facts, selected, target_articles


class TestTranslate:
    def test_mock_marker(self, mock_llm):
        assert translate("Already English.", "en", mock_llm) == "[en] Already English."

    def test_empty_rejected(self, mock_llm):
        with pytest.raises(ValueError):
            translate("", "fr", mock_llm)

    def test_french_fixture_sentence_reference(self, mock_llm):
        sentence = "Le canard laqué est un plat célèbre."
        assert translate(sentence, "fr", mock_llm) == f"[fr] {sentence}"


class TestAnchorFor:
    def test_cixi_fact_anchors_to_ming_sentence(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, _ = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder
        )
        (cixi,) = [entry for entry in selected["fr"] if "Cixi" in entry[0].text]
        anchor, paragraph_index = anchor_for(cixi, english, english_facts, mock_embedder)
        assert anchor == MING_SENTENCE
        assert english.paragraphs[paragraph_index].text == MING_SENTENCE

    def test_single_sentence_paragraph_is_forced(self, mock_llm, mock_embedder):
        from gapforge.articles import Article, Section
        from gapforge.segmentation import segment

        english = Article(
            language_code="en",
            title="T",
            revision_id="1",
            canonical_url="https://en.wikipedia.org/wiki/T",
            sections=(Section(index=0, heading="", level=1),),
            paragraphs=segment("First paragraph opener. Second thought.\n\nA lone sentence.", "en"),
        )
        english_facts = decompose_article(english, mock_llm)
        lone = [f for f in english_facts if f.text == "A lone sentence."][0]
        gap_fact = english_facts[0].__class__(
            id="gap1",
            text="Une phrase exclusive.",
            language_code="fr",
            paragraph_index=0,
            section_index=0,
            ordinal=0,
        )
        entry = (
            gap_fact,
            NeighborSet(
                target_fact_id="gap1",
                neighbors=(Neighbor(source_fact_id=lone.id, cosine=0.5),),
            ),
        )
        anchor, index = anchor_for(entry, english, english_facts, mock_embedder)
        assert anchor == "A lone sentence."
        assert index == 1

    def test_empty_neighbors_fall_back_to_lead(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, _ = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder
        )
        fact, _ = selected["fr"][0]
        empty = (fact, NeighborSet(target_fact_id=fact.id, neighbors=()))
        anchor, paragraph_index = anchor_for(empty, english, english_facts, mock_embedder)
        assert anchor == english.paragraphs[0].sentences[0].text
        assert paragraph_index == 0

    def test_stale_paragraph_index(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, _ = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder
        )
        fact, nset = selected["fr"][0]
        truncated = english.__class__(
            language_code=english.language_code,
            title=english.title,
            revision_id="other",
            canonical_url=english.canonical_url,
            sections=english.sections,
            paragraphs=english.paragraphs[:1],
        )
        stale = [f for f in english_facts if f.paragraph_index > 0]
        rank1 = stale[0]
        bad = (
            fact,
            NeighborSet(
                target_fact_id=fact.id,
                neighbors=(Neighbor(source_fact_id=rank1.id, cosine=1.0),),
            ),
        )
        with pytest.raises(MissingParagraph):
            anchor_for(bad, truncated, english_facts, mock_embedder)


class TestBuildHighlightLink:
    def test_simple_sentence(self):
        url = build_highlight_link("https://fr.wikipedia.org/wiki/X", "Bonjour le monde")
        assert url == "https://fr.wikipedia.org/wiki/X#:~:text=Bonjour%20le%20monde"

    def test_round_trip(self):
        sentence = "Ce plat, servi chaud & froid, coûte 12€ !"
        url = build_highlight_link("https://fr.wikipedia.org/wiki/X", sentence)
        fragment = url.split("#:~:text=", 1)[1]
        assert unquote(fragment) == sentence
        assert "," not in fragment
        assert "&" not in fragment

    def test_chinese_sentence_committed_oracle(self):
        url = build_highlight_link(
            "https://zh.wikipedia.org/wiki/%E5%8C%97%E4%BA%AC%E7%83%A4%E9%B8%AD",
            "传统吃法是在肉之后上一道白菜汤。",
        )
        assert url == EXPECTED_ZH_URL

    def test_long_sentence_prefix_form(self):
        sentence = " ".join(["word"] * 120)  # ~599 bytes
        url = build_highlight_link("https://en.wikipedia.org/wiki/X", sentence)
        decoded = unquote(url.split("#:~:text=", 1)[1])
        assert sentence.startswith(decoded)
        assert 0 < len(decoded.encode("utf-8")) <= 150
        assert sentence[len(decoded)].isspace()

    def test_long_unspaced_sentence(self):
        sentence = "烤" * 200  # 600 bytes, no whitespace anywhere
        url = build_highlight_link("https://zh.wikipedia.org/wiki/X", sentence)
        decoded = unquote(url.split("#:~:text=", 1)[1])
        assert sentence.startswith(decoded)
        assert 0 < len(decoded.encode("utf-8")) <= 150

    def test_invalid_url(self):
        with pytest.raises(InvalidUrl):
            build_highlight_link("not a url", "hello")
        with pytest.raises(InvalidUrl):
            build_highlight_link("ftp://example.org/x", "hello")

    def test_empty_sentence(self):
        with pytest.raises(ValueError):
            build_highlight_link("https://en.wikipedia.org/wiki/X", "")


class TestEnrichSelection:
    def test_injera_selection_yields_28(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, target_articles = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder, topic="Injera"
        )
        enriched = enrich_selection(
            selected, english, english_facts, target_articles, mock_llm, mock_embedder
        )
        assert sum(len(v) for v in enriched.values()) == 28
        assert {lang: len(v) for lang, v in enriched.items()} == {"fr": 10, "ru": 10, "zh": 8}

    def test_empty_selection(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, _, _ = run_mock_pipeline(fixture_repo, mock_llm, mock_embedder)
        assert enrich_selection({}, english, english_facts, {}, mock_llm, mock_embedder) == {}

    def test_deterministic_across_runs(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, target_articles = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder
        )
        first = enrich_selection(
            selected, english, english_facts, target_articles, mock_llm, mock_embedder
        )
        second = enrich_selection(
            selected, english, english_facts, target_articles, mock_llm, mock_embedder
        )
        assert first == second

    def test_presented_fact_invariants(self, fixture_repo, mock_llm, mock_embedder):
        english, english_facts, selected, target_articles = run_mock_pipeline(
            fixture_repo, mock_llm, mock_embedder
        )
        enriched = enrich_selection(
            selected, english, english_facts, target_articles, mock_llm, mock_embedder
        )
        english_sentences = {
            s.text for p in english.paragraphs for s in p.sentences
        }
        for lang, facts in enriched.items():
            source_text = "\n\n".join(p.text for p in target_articles[lang].paragraphs)
            assert [f.id for f in facts] == [entry[0].id for entry in selected[lang]]
            for fact in facts:
                assert fact.text_en
                assert fact.anchor_sentence_en in english_sentences
                assert english.paragraphs[fact.anchor_paragraph_index]
                fragment = fact.source_link_url.split("#:~:text=", 1)[1]
                assert unquote(fragment) in source_text
