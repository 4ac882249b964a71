"""Paragraph and sentence segmentation for en, fr, ru, and zh text.

Paragraphs split on blank lines. Sentence terminators are language
dependent: Chinese uses the full-width set 。！？； plus newline, the
alphabetic languages use period/!/? followed by whitespace with a static
per-language abbreviation guard list (unlisted abbreviations may
over-split; that is accepted and documented).

Segmentation is total and deterministic, and sentence texts are exact
slices of the paragraph at their char spans.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .articles import Paragraph, Sentence

ZH_TERMINATORS = "。！？；"

_BLANK_LINE = re.compile(r"\n[ \t\r\f\v]*\n")
_TERMINATOR_RUN = re.compile(r"[.!?]+")
# Opening quotes/brackets that may precede the abbreviation token.
_TOKEN_LEAD = "([\"'«„“‘¿¡"


@lru_cache(maxsize=None)
def _abbreviations(language_code: str) -> frozenset[str]:
    """Guard tokens (lowercase, no trailing dot) that never end a sentence."""
    path = resources.files("gapforge").joinpath("data", f"abbrev_{language_code}.txt")
    try:
        raw = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        return frozenset()
    entries = set()
    for line in raw.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            entries.add(line.casefold().rstrip("."))
    return frozenset(entries)


def split_paragraph_blocks(raw_text: str) -> list[str]:
    """Split text on blank-line boundaries, dropping empty blocks."""
    return [block.strip() for block in _BLANK_LINE.split(raw_text) if block.strip()]


def _trim_spans(spans: list[tuple[int, int]], text: str) -> list[tuple[int, int]]:
    trimmed = []
    for a, b in spans:
        while a < b and text[a].isspace():
            a += 1
        while b > a and text[b - 1].isspace():
            b -= 1
        if a < b:
            trimmed.append((a, b))
    return trimmed


def _spans_zh(text: str) -> list[tuple[int, int]]:
    spans = []
    start = 0
    for i, ch in enumerate(text):
        if ch in ZH_TERMINATORS or ch == "\n":
            spans.append((start, i + 1))
            start = i + 1
    if start < len(text):
        spans.append((start, len(text)))
    return _trim_spans(spans, text)


def _guarded_abbreviation(text: str, dot_pos: int, guards: frozenset[str]) -> bool:
    j = dot_pos
    while j > 0 and not text[j - 1].isspace():
        j -= 1
    token = text[j:dot_pos].lstrip(_TOKEN_LEAD)
    return token.casefold() in guards


def _spans_western(text: str, guards: frozenset[str]) -> list[tuple[int, int]]:
    breaks = []
    for m in _TERMINATOR_RUN.finditer(text):
        end = m.end()
        if end < len(text) and not text[end].isspace():
            continue  # mid-token, e.g. "3.5" or "U.S.A"
        if m.group() == "." and _guarded_abbreviation(text, m.start(), guards):
            continue
        breaks.append(end)
    spans = []
    start = 0
    for b in breaks:
        spans.append((start, b))
        start = b
    if start < len(text):
        spans.append((start, len(text)))
    return _trim_spans(spans, text)


def split_sentences(text: str, language_code: str) -> tuple[Sentence, ...]:
    """Sentence-split one paragraph's text, keeping exact char spans."""
    if language_code == "zh":
        spans = _spans_zh(text)
    else:
        spans = _spans_western(text, _abbreviations(language_code))
    return tuple(
        Sentence(index=i, text=text[a:b], char_span=(a, b))
        for i, (a, b) in enumerate(spans)
    )


def segment(raw_text: str, language_code: str) -> tuple[Paragraph, ...]:
    """Segment raw prose into paragraphs with sentences.

    Paragraphs are indexed 0..n-1 in document order; callers embedding
    the result into an article re-derive section indices themselves
    (everything here lands in section 0).
    """
    paragraphs = []
    for i, block in enumerate(split_paragraph_blocks(raw_text)):
        paragraphs.append(
            Paragraph(
                index=i,
                section_index=0,
                text=block,
                sentences=split_sentences(block, language_code),
            )
        )
    return tuple(paragraphs)
