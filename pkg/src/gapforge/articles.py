"""Immutable article model shared by the fetching and segmentation code.

An article is one language edition's page broken into sections and
globally indexed paragraphs; each paragraph carries its sentences with
character spans back into the paragraph text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    char_span: tuple[int, int]


@dataclass(frozen=True)
class Paragraph:
    index: int
    section_index: int
    text: str
    sentences: tuple[Sentence, ...]


@dataclass(frozen=True)
class Section:
    index: int
    heading: str
    level: int


@dataclass(frozen=True)
class Article:
    language_code: str
    title: str
    revision_id: str
    canonical_url: str
    sections: tuple[Section, ...]
    paragraphs: tuple[Paragraph, ...]

    def to_json_obj(self) -> dict[str, Any]:
        return {
            "language_code": self.language_code,
            "title": self.title,
            "revision_id": self.revision_id,
            "canonical_url": self.canonical_url,
            "sections": [
                {"index": s.index, "heading": s.heading, "level": s.level}
                for s in self.sections
            ],
            "paragraphs": [
                {
                    "index": p.index,
                    "section_index": p.section_index,
                    "text": p.text,
                    "sentences": [
                        {
                            "index": s.index,
                            "text": s.text,
                            "char_span": list(s.char_span),
                        }
                        for s in p.sentences
                    ],
                }
                for p in self.paragraphs
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict[str, Any]) -> "Article":
        sections = tuple(
            Section(index=s["index"], heading=s["heading"], level=s["level"])
            for s in obj["sections"]
        )
        paragraphs = tuple(
            Paragraph(
                index=p["index"],
                section_index=p["section_index"],
                text=p["text"],
                sentences=tuple(
                    Sentence(
                        index=s["index"],
                        text=s["text"],
                        char_span=(s["char_span"][0], s["char_span"][1]),
                    )
                    for s in p["sentences"]
                ),
            )
            for p in obj["paragraphs"]
        )
        return cls(
            language_code=obj["language_code"],
            title=obj["title"],
            revision_id=obj["revision_id"],
            canonical_url=obj["canonical_url"],
            sections=sections,
            paragraphs=paragraphs,
        )
