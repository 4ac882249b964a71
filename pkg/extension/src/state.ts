/** UI state container: one source of truth for card/highlight visibility.
 *
 * The visibility equation: a card is visible iff its language is enabled
 * AND it matches the search query (case-insensitive substring over the
 * English text and the language label; empty query matches everything).
 * The active fact, when set, always names a visible card.
 */

import { languageLabel } from "./colors.js";
import { PresentedFact, TopicDataset, allFacts } from "./types.js";

export type SidebarMode = "hidden" | "open" | "pinned";

export interface UiState {
  topic: string;
  enabledLanguages: ReadonlySet<string>;
  searchQuery: string;
  sidebar: SidebarMode;
  activeFactId: string | null;
}

export function initialState(dataset: TopicDataset): UiState {
  return {
    topic: dataset.topic,
    enabledLanguages: new Set(dataset.languages),
    searchQuery: "",
    sidebar: "open",
    activeFactId: null,
  };
}

export function matchesQuery(fact: PresentedFact, query: string): boolean {
  const needle = query.trim().toLowerCase();
  if (!needle) return true;
  if (fact.text_en.toLowerCase().includes(needle)) return true;
  return languageLabel(fact.language_code).toLowerCase().includes(needle);
}

export function isVisible(fact: PresentedFact, state: UiState): boolean {
  return state.enabledLanguages.has(fact.language_code) && matchesQuery(fact, state.searchQuery);
}

export function visibleFactIds(dataset: TopicDataset, state: UiState): string[] {
  return allFacts(dataset)
    .filter((fact) => isVisible(fact, state))
    .map((fact) => fact.id);
}

function withInvariant(dataset: TopicDataset, state: UiState): UiState {
  if (state.activeFactId === null) return state;
  const visible = new Set(visibleFactIds(dataset, state));
  return visible.has(state.activeFactId) ? state : { ...state, activeFactId: null };
}

/** Flip one language; unknown codes are ignored. */
export function toggleLanguage(dataset: TopicDataset, state: UiState, code: string): UiState {
  if (!dataset.languages.includes(code)) return state;
  const enabled = new Set(state.enabledLanguages);
  if (enabled.has(code)) {
    enabled.delete(code);
  } else {
    enabled.add(code);
  }
  return withInvariant(dataset, { ...state, enabledLanguages: enabled });
}

export function setSearch(dataset: TopicDataset, state: UiState, query: string): UiState {
  return withInvariant(dataset, { ...state, searchQuery: query });
}

/** Activate a card; refused (cleared) when the card is not visible. */
export function setActiveFact(
  dataset: TopicDataset,
  state: UiState,
  factId: string | null,
): UiState {
  if (factId === null) return { ...state, activeFactId: null };
  const visible = new Set(visibleFactIds(dataset, state));
  return { ...state, activeFactId: visible.has(factId) ? factId : null };
}

export function setSidebar(state: UiState, mode: SidebarMode): UiState {
  return { ...state, sidebar: mode };
}
