import { beforeEach, describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";

import { initializeOverlay } from "../src/content.js";
import {
  ANCHOR_ATTR,
  renderHighlights,
  unwrapHighlights,
  visibleUnderlineLanguages,
} from "../src/highlights.js";
import { TopicDataset, allFacts, validateDataset } from "../src/types.js";

const PAGE_HTML = readFileSync("tests/fixtures/peking_duck.html", "utf-8");
const goldenRaw = readFileSync("tests/fixtures/Peking_duck.json", "utf-8");

function loadPage(): void {
  const body = PAGE_HTML.split("<body>")[1].split("</body>")[0];
  document.body.innerHTML = body;
}

function dataset(): TopicDataset {
  return validateDataset(JSON.parse(goldenRaw));
}

function visibleCards(): HTMLElement[] {
  return Array.from(document.querySelectorAll("#gapforge-sidebar .gapforge-card"));
}

function chip(language: string): HTMLElement {
  return document.querySelector(`.gapforge-chip[data-lang="${language}"]`) as HTMLElement;
}

beforeEach(() => {
  loadPage();
});

describe("fixture page rendering", () => {
  it("shows three language groups of ten", () => {
    initializeOverlay(document, dataset());
    const groups = Array.from(document.querySelectorAll("#gapforge-sidebar .gapforge-group"));
    expect(groups.map((g) => g.getAttribute("data-lang"))).toEqual(["fr", "ru", "zh"]);
    for (const group of groups) {
      expect(group.querySelectorAll(".gapforge-card")).toHaveLength(10);
    }
  });

  it("anchors every fact on the pinned fixture page", () => {
    const overlay = initializeOverlay(document, dataset());
    expect(overlay.anchoredFactCount).toBe(30);
  });

  it("drops to fact count minus one when an anchor sentence is missing", () => {
    const data = dataset();
    const victim = data.facts.ru[0];
    victim.anchor_sentence_en = "This sentence does not appear on the page.";
    const overlay = initializeOverlay(document, data);
    expect(overlay.anchoredFactCount).toBe(29);
  });

  it("facts sharing an anchor share one underline", () => {
    const data = dataset();
    initializeOverlay(document, data);
    const spans = Array.from(
      document.querySelectorAll(`#mw-content-text [${ANCHOR_ATTR}]`),
    );
    const anchorTexts = new Set(
      allFacts(data).map((f) => f.anchor_sentence_en.replace(/\s+/g, " ").trim()),
    );
    expect(spans.length).toBe(anchorTexts.size);
    const shared = spans.filter(
      (s) => (s.getAttribute(ANCHOR_ATTR) ?? "").split(" ").length > 1,
    );
    expect(shared.length).toBeGreaterThan(0); // the golden data does share anchors
  });

  it("finds anchors spanning inline elements", () => {
    const data = dataset();
    initializeOverlay(document, data);
    // The Ming-dynasty sentence holds an inline <a> in the fixture page
    // and anchors the French empress fact.
    const cixi = allFacts(data).find((f) => f.text_src.includes("Cixi"))!;
    const span = Array.from(
      document.querySelectorAll(`#mw-content-text [${ANCHOR_ATTR}]`),
    ).find((s) => (s.getAttribute(ANCHOR_ATTR) ?? "").split(" ").includes(cixi.id));
    expect(span).toBeDefined();
    expect(span!.textContent).toContain("Ming dynasty");
    expect(span!.querySelector("a")).not.toBeNull();
  });

  it("disabling French hides all blue-badged cards and underlines", () => {
    initializeOverlay(document, dataset());
    chip("fr").click();
    const cards = visibleCards();
    expect(cards).toHaveLength(20);
    expect(cards.every((c) => c.getAttribute("data-lang") !== "fr")).toBe(true);
    for (const languages of visibleUnderlineLanguages(
      document.querySelector("#mw-content-text")!,
    )) {
      expect(languages.includes("fr") && languages.length === 1).toBe(false);
    }
    // No remaining underline is colored for French only.
    const offSpans = Array.from(
      document.querySelectorAll("#mw-content-text .gapforge-anchor-off"),
    );
    expect(offSpans.length).toBeGreaterThan(0);
  });

  it("searching Cixi leaves exactly the matching cards", () => {
    const data = dataset();
    initializeOverlay(document, data);
    const search = document.querySelector(".gapforge-search") as HTMLInputElement;
    search.value = "Cixi";
    search.dispatchEvent(new Event("input", { bubbles: true }));
    const expected = allFacts(data)
      .filter((f) => f.text_en.toLowerCase().includes("cixi"))
      .map((f) => f.id)
      .sort();
    const shown = visibleCards()
      .map((c) => c.getAttribute("data-fact-id"))
      .sort();
    expect(shown).toEqual(expected);
    expect(shown.length).toBeGreaterThan(0);
  });

  it("card links equal the dataset URLs byte-exactly", () => {
    const data = dataset();
    initializeOverlay(document, data);
    const byId = new Map(allFacts(data).map((f) => [f.id, f]));
    const cards = visibleCards();
    expect(cards).toHaveLength(30);
    for (const card of cards) {
      const fact = byId.get(card.getAttribute("data-fact-id")!)!;
      const link = card.querySelector("a.gapforge-card-link")!;
      expect(link.getAttribute("href")).toBe(fact.source_link_url);
      expect(link.getAttribute("target")).toBe("_blank");
      expect(link.textContent).toContain("Wikipedia");
    }
  });

  it("clicking a card pins it as the active fact", () => {
    const overlay = initializeOverlay(document, dataset());
    const card = visibleCards()[0];
    const id = card.getAttribute("data-fact-id")!;
    card.click();
    expect(overlay.state.activeFactId).toBe(id);
    expect(
      document.querySelector(`.gapforge-card[data-fact-id="${id}"]`)!.classList.contains(
        "gapforge-card-active",
      ),
    ).toBe(true);
  });

  it("sidebar hide/pin modes round-trip", () => {
    const overlay = initializeOverlay(document, dataset());
    (document.querySelector(".gapforge-collapse") as HTMLElement).click();
    expect(overlay.state.sidebar).toBe("hidden");
    expect(document.querySelectorAll(".gapforge-card")).toHaveLength(0);
    (document.querySelector(".gapforge-collapse") as HTMLElement).click();
    expect(overlay.state.sidebar).toBe("open");
    (document.querySelector(".gapforge-pin") as HTMLElement).click();
    expect(overlay.state.sidebar).toBe("pinned");
  });
});

describe("DOM text preservation", () => {
  it("wrapping never changes the article text; unwrapping restores it byte-exactly", () => {
    const root = document.querySelector("#mw-content-text")!;
    const before = root.textContent;
    const count = renderHighlights(dataset(), root);
    expect(count).toBe(30);
    expect(root.textContent).toBe(before);
    unwrapHighlights(root);
    expect(root.textContent).toBe(before);
    expect(root.querySelectorAll(`[${ANCHOR_ATTR}]`)).toHaveLength(0);
  });
});
