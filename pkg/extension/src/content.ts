/** Content-script entry: detect the topic, load its dataset, render. */

import { ColorScheme, DEFAULT_COLOR_SCHEME, loadColorScheme } from "./colors.js";
import { loadDataset } from "./dataset.js";
import { applyHighlightState, renderHighlights } from "./highlights.js";
import { renderSidebar } from "./sidebar.js";
import {
  UiState,
  initialState,
  setActiveFact,
  setSearch,
  setSidebar,
  toggleLanguage,
} from "./state.js";
import { TopicDataset } from "./types.js";
import { detectTopic } from "./topic.js";

export interface Overlay {
  state: UiState;
  anchoredFactCount: number;
}

/**
 * Wire the whole overlay onto a document. All state transitions are
 * serialized through one `update` function; the DOM re-renders from
 * state, never the other way around.
 */
export function initializeOverlay(
  doc: Document,
  dataset: TopicDataset,
  scheme: ColorScheme = DEFAULT_COLOR_SCHEME,
): Overlay {
  const contentRoot = doc.querySelector("#mw-content-text") ?? doc.body;
  const overlay: Overlay = { state: initialState(dataset), anchoredFactCount: 0 };

  const rerender = (): void => {
    renderSidebar(dataset, overlay.state, doc, handlers, scheme);
    applyHighlightState(contentRoot, dataset, overlay.state, scheme);
  };
  const update = (next: UiState): void => {
    overlay.state = next;
    rerender();
  };

  const handlers = {
    onToggleLanguage: (code: string) => update(toggleLanguage(dataset, overlay.state, code)),
    onSearch: (query: string) => update(setSearch(dataset, overlay.state, query)),
    onCardClick: (factId: string) => update(setActiveFact(dataset, overlay.state, factId)),
    onSidebarMode: (mode: "hidden" | "open" | "pinned") =>
      update(setSidebar(overlay.state, mode)),
  };

  overlay.anchoredFactCount = renderHighlights(dataset, contentRoot, {
    onHover: () => undefined,
    onClick: (factIds) => {
      // Click pins the first fact of the group and opens the sidebar.
      let next = overlay.state;
      if (next.sidebar === "hidden") next = setSidebar(next, "open");
      update(setActiveFact(dataset, next, factIds[0] ?? null));
      const card = doc.querySelector(`[data-fact-id="${factIds[0]}"]`);
      (card as HTMLElement | null)?.scrollIntoView?.({ block: "nearest" });
    },
  }, scheme);
  rerender();
  return overlay;
}

async function main(): Promise<void> {
  const topic = detectTopic(location.href);
  if (!topic) return;
  const dataset = await loadDataset(topic);
  if (!dataset) return;
  const scheme = await loadColorScheme();
  initializeOverlay(document, dataset, scheme);
}

// Only auto-run inside a real page; tests import the pieces directly.
if (typeof location !== "undefined" && typeof document !== "undefined" && !("vitest" in globalThis)) {
  void main();
}
