/** Margin-anchored sidebar: search box, language chips, grouped fact cards.
 *
 * Collapsible, pinnable, and hideable. Each card shows the English
 * translation, a color-coded badge with the language name, and a
 * "View on [Language] Wikipedia" link opening the original sentence in
 * context in a new tab.
 */

import { ColorScheme, DEFAULT_COLOR_SCHEME, colorFor, languageLabel } from "./colors.js";
import { UiState, isVisible } from "./state.js";
import { PresentedFact, TopicDataset } from "./types.js";

export const SIDEBAR_ID = "gapforge-sidebar";

export interface SidebarHandlers {
  onToggleLanguage?: (code: string) => void;
  onSearch?: (query: string) => void;
  onCardClick?: (factId: string) => void;
  onSidebarMode?: (mode: "hidden" | "open" | "pinned") => void;
}

function card(
  doc: Document,
  fact: PresentedFact,
  state: UiState,
  scheme: ColorScheme,
  handlers: SidebarHandlers,
): HTMLElement {
  const article = doc.createElement("article");
  article.className = "gapforge-card";
  article.setAttribute("data-fact-id", fact.id);
  article.setAttribute("data-lang", fact.language_code);
  if (state.activeFactId === fact.id) article.classList.add("gapforge-card-active");

  const badge = doc.createElement("span");
  badge.className = "gapforge-badge";
  badge.textContent = languageLabel(fact.language_code);
  badge.style.setProperty("background-color", colorFor(fact.language_code, scheme));
  article.appendChild(badge);

  const text = doc.createElement("p");
  text.className = "gapforge-card-text";
  text.textContent = fact.text_en;
  article.appendChild(text);

  const link = doc.createElement("a");
  link.className = "gapforge-card-link";
  link.setAttribute("href", fact.source_link_url);
  link.setAttribute("target", "_blank");
  link.setAttribute("rel", "noopener noreferrer");
  link.textContent = `View on ${languageLabel(fact.language_code)} Wikipedia`;
  article.appendChild(link);

  article.addEventListener("click", (event) => {
    if ((event.target as Element | null)?.closest("a")) return; // let the link navigate
    handlers.onCardClick?.(fact.id);
  });
  return article;
}

/**
 * (Re)build the sidebar for the current state; returns the container.
 * Cards appear grouped by language in dataset order, filtered by the
 * visibility equation.
 */
export function renderSidebar(
  dataset: TopicDataset,
  state: UiState,
  doc: Document,
  handlers: SidebarHandlers = {},
  scheme: ColorScheme = DEFAULT_COLOR_SCHEME,
): HTMLElement {
  let container = doc.getElementById(SIDEBAR_ID);
  if (!container) {
    container = doc.createElement("aside");
    container.id = SIDEBAR_ID;
    doc.body.appendChild(container);
  }
  container.innerHTML = "";
  container.setAttribute("data-mode", state.sidebar);

  const header = doc.createElement("header");
  header.className = "gapforge-header";
  const title = doc.createElement("strong");
  title.textContent = "Facts from other Wikipedias";
  header.appendChild(title);

  const pin = doc.createElement("button");
  pin.className = "gapforge-pin";
  pin.textContent = state.sidebar === "pinned" ? "Unpin" : "Pin";
  pin.addEventListener("click", () =>
    handlers.onSidebarMode?.(state.sidebar === "pinned" ? "open" : "pinned"),
  );
  header.appendChild(pin);

  const collapse = doc.createElement("button");
  collapse.className = "gapforge-collapse";
  collapse.textContent = state.sidebar === "hidden" ? "Show" : "Hide";
  collapse.addEventListener("click", () =>
    handlers.onSidebarMode?.(state.sidebar === "hidden" ? "open" : "hidden"),
  );
  header.appendChild(collapse);
  container.appendChild(header);

  if (state.sidebar === "hidden") return container;

  const search = doc.createElement("input");
  search.className = "gapforge-search";
  search.setAttribute("type", "search");
  search.setAttribute("placeholder", "Search facts…");
  search.value = state.searchQuery;
  search.addEventListener("input", () => handlers.onSearch?.(search.value));
  container.appendChild(search);

  const chips = doc.createElement("div");
  chips.className = "gapforge-chips";
  for (const language of dataset.languages) {
    const chip = doc.createElement("button");
    chip.className = "gapforge-chip";
    chip.setAttribute("data-lang", language);
    const enabled = state.enabledLanguages.has(language);
    chip.setAttribute("aria-pressed", String(enabled));
    chip.classList.toggle("gapforge-chip-off", !enabled);
    const dot = doc.createElement("span");
    dot.className = "gapforge-chip-dot";
    dot.style.setProperty("background-color", colorFor(language, scheme));
    chip.appendChild(dot);
    chip.appendChild(doc.createTextNode(` ${languageLabel(language)}`));
    chip.addEventListener("click", () => handlers.onToggleLanguage?.(language));
    chips.appendChild(chip);
  }
  container.appendChild(chips);

  const groups = doc.createElement("div");
  groups.className = "gapforge-groups";
  let visibleTotal = 0;
  for (const language of dataset.languages) {
    const facts = dataset.facts[language].filter((fact) => isVisible(fact, state));
    if (facts.length === 0) continue;
    visibleTotal += facts.length;
    const section = doc.createElement("section");
    section.className = "gapforge-group";
    section.setAttribute("data-lang", language);
    const heading = doc.createElement("h3");
    heading.textContent = `${languageLabel(language)} (${facts.length})`;
    section.appendChild(heading);
    for (const fact of facts) {
      section.appendChild(card(doc, fact, state, scheme, handlers));
    }
    groups.appendChild(section);
  }
  container.appendChild(groups);

  if (visibleTotal === 0) {
    const hint = doc.createElement("p");
    hint.className = "gapforge-empty-hint";
    hint.textContent = "No facts to show. Enable a language or clear the search.";
    container.appendChild(hint);
  }
  return container;
}
