#!/usr/bin/env python3
"""Regenerate extension/tests/fixtures/peking_duck.html from the bundled
English fixture article.

The page mimics the wiki DOM the content script sees: #firstHeading,
#mw-content-text > .mw-parser-output with <h2> section headings and <p>
paragraphs. One phrase is deliberately wrapped in an inline link so the
highlighter's cross-node matching is exercised by the tests.
"""

from __future__ import annotations

import html
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
OUT = REPO / "extension" / "tests" / "fixtures" / "peking_duck.html"

INLINE_PHRASE = "Ming dynasty"


def main() -> None:
    article_path = REPO / "src" / "gapforge" / "fixtures" / "articles" / "en" / "Peking_duck.json"
    article = json.loads(article_path.read_text(encoding="utf-8"))

    body: list[str] = []
    emitted_sections: set[int] = set()
    sections = {s["index"]: s for s in article["sections"]}
    for paragraph in article["paragraphs"]:
        section = sections[paragraph["section_index"]]
        if section["index"] not in emitted_sections and section["heading"]:
            emitted_sections.add(section["index"])
            body.append(f'<h2><span class="mw-headline">{html.escape(section["heading"])}</span></h2>')
        text = html.escape(paragraph["text"])
        escaped_phrase = html.escape(INLINE_PHRASE)
        if escaped_phrase in text:
            text = text.replace(
                escaped_phrase, f'<a href="/wiki/Ming_dynasty">{escaped_phrase}</a>', 1
            )
        body.append(f"<p>{text}</p>")

    page = f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{html.escape(article["title"])} - Wikipedia</title>
</head>
<body>
<h1 id="firstHeading">{html.escape(article["title"])}</h1>
<div id="mw-content-text"><div class="mw-parser-output">
{chr(10).join(body)}
</div></div>
</body>
</html>
"""
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(page, encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    sys.exit(main())
