/** In-text gap anchors: colored underlines over anchor sentences.
 *
 * Matching is whitespace-normalized exact text search within paragraph
 * nodes; no fuzzy matching. Facts whose anchor is not found on the live
 * page (revision drift) stay sidebar-only. Article text is never
 * mutated, only wrapped; unwrapping restores the DOM text byte-exactly.
 */

import { ColorScheme, DEFAULT_COLOR_SCHEME, colorFor } from "./colors.js";
import { UiState, isVisible } from "./state.js";
import { PresentedFact, TopicDataset, allFacts } from "./types.js";

export const ANCHOR_CLASS = "gapforge-anchor";
export const ANCHOR_ATTR = "data-gapforge-facts";

export interface AnchorHandlers {
  onHover?: (factIds: string[]) => void;
  onClick?: (factIds: string[]) => void;
}

interface TextIndex {
  normalized: string;
  /** normalized index -> (text node, offset in node) */
  positions: { node: Text; offset: number }[];
}

function collectTextNodes(root: Node): Text[] {
  const nodes: Text[] = [];
  const walk = (node: Node): void => {
    if (node.nodeType === 3) {
      nodes.push(node as Text);
      return;
    }
    for (const child of Array.from(node.childNodes)) walk(child);
  };
  walk(root);
  return nodes;
}

function normalizeText(text: string): string {
  return text.replace(/\s+/g, " ").trim();
}

/** Concatenate a paragraph's text nodes, collapsing whitespace but
 * remembering where every kept character came from. */
function buildIndex(paragraph: Element): TextIndex {
  let normalized = "";
  const positions: { node: Text; offset: number }[] = [];
  let pendingSpace = false;
  for (const node of collectTextNodes(paragraph)) {
    const data = node.data;
    for (let i = 0; i < data.length; i += 1) {
      if (/\s/.test(data[i])) {
        if (normalized.length > 0) pendingSpace = true;
        continue;
      }
      if (pendingSpace) {
        normalized += " ";
        positions.push({ node, offset: i }); // space maps to the char after it
        pendingSpace = false;
      }
      normalized += data[i];
      positions.push({ node, offset: i });
    }
  }
  return { normalized, positions };
}

function wrapRange(
  doc: Document,
  start: { node: Text; offset: number },
  end: { node: Text; offset: number },
): HTMLElement {
  // Split the boundary text nodes, then move everything between the two
  // split points into a span. Handles anchors spanning inline elements
  // as long as both ends sit in text nodes under the same paragraph.
  const startNode = start.node.splitText(start.offset);
  const endNode = end.node === start.node ? startNode : end.node;
  const endOffset = end.node === start.node ? end.offset - start.offset : end.offset;
  endNode.splitText(endOffset);

  const span = doc.createElement("span");
  span.className = ANCHOR_CLASS;
  startNode.parentNode?.insertBefore(span, startNode);

  let cursor: Node | null = startNode;
  while (cursor) {
    const next: Node | null = cursor === endNode ? null : nextInOrder(cursor, span);
    span.appendChild(cursor);
    cursor = next;
  }
  return span;
}

/** Next node in document order after `node`, never descending into `skip`. */
function nextInOrder(node: Node, skip: Node): Node | null {
  let current: Node | null = node;
  while (current) {
    if (current.nextSibling) return current.nextSibling;
    current = current.parentNode;
    if (current === skip || current === null || current.nodeType === 9) return null;
  }
  return null;
}

function findInParagraph(
  index: TextIndex,
  needle: string,
): { start: { node: Text; offset: number }; end: { node: Text; offset: number } } | null {
  const at = index.normalized.indexOf(needle);
  if (at < 0) return null;
  const startPos = index.positions[at];
  const lastPos = index.positions[at + needle.length - 1];
  return {
    start: startPos,
    end: { node: lastPos.node, offset: lastPos.offset + 1 },
  };
}

/**
 * Wrap every located anchor sentence and return the number of anchored
 * facts. Facts sharing one anchor sentence share one underline.
 */
export function renderHighlights(
  dataset: TopicDataset,
  contentRoot: Element,
  handlers: AnchorHandlers = {},
  scheme: ColorScheme = DEFAULT_COLOR_SCHEME,
): number {
  const doc = contentRoot.ownerDocument;
  if (!doc) return 0;

  const groups = new Map<string, PresentedFact[]>();
  for (const fact of allFacts(dataset)) {
    const key = normalizeText(fact.anchor_sentence_en);
    if (!key) continue;
    const group = groups.get(key);
    if (group) {
      group.push(fact);
    } else {
      groups.set(key, [fact]);
    }
  }

  const paragraphs = Array.from(contentRoot.querySelectorAll("p"));
  let anchoredFacts = 0;
  for (const [needle, facts] of groups) {
    let placed = false;
    for (const paragraph of paragraphs) {
      if (paragraph.closest(`.${ANCHOR_CLASS}`)) continue;
      const index = buildIndex(paragraph);
      const match = findInParagraph(index, needle);
      if (!match) continue;
      const span = wrapRange(doc, match.start, match.end);
      span.setAttribute(ANCHOR_ATTR, facts.map((f) => f.id).join(" "));
      span.setAttribute("data-gapforge-langs", facts.map((f) => f.language_code).join(" "));
      const ids = facts.map((f) => f.id);
      span.addEventListener("mouseenter", () => {
        span.classList.add("gapforge-anchor-hover");
        handlers.onHover?.(ids);
      });
      span.addEventListener("mouseleave", () => span.classList.remove("gapforge-anchor-hover"));
      span.addEventListener("click", () => handlers.onClick?.(ids));
      placed = true;
      break;
    }
    if (placed) anchoredFacts += facts.length;
  }
  applyHighlightState(contentRoot, dataset, null, scheme);
  return anchoredFacts;
}

/** Re-color and show/hide underlines from the current UI state. */
export function applyHighlightState(
  contentRoot: Element,
  dataset: TopicDataset,
  state: UiState | null,
  scheme: ColorScheme = DEFAULT_COLOR_SCHEME,
): void {
  const byId = new Map(allFacts(dataset).map((fact) => [fact.id, fact]));
  for (const span of Array.from(contentRoot.querySelectorAll(`.${ANCHOR_CLASS}`))) {
    const ids = (span.getAttribute(ANCHOR_ATTR) ?? "").split(" ").filter(Boolean);
    const facts = ids
      .map((id) => byId.get(id))
      .filter((fact): fact is PresentedFact => fact !== undefined);
    const shown = state === null ? facts : facts.filter((fact) => isVisible(fact, state));
    const element = span as HTMLElement;
    if (shown.length === 0) {
      element.classList.add("gapforge-anchor-off");
      element.style.removeProperty("text-decoration-color");
      continue;
    }
    element.classList.remove("gapforge-anchor-off");
    element.style.setProperty("text-decoration-color", colorFor(shown[0].language_code, scheme));
    const active = state?.activeFactId && ids.includes(state.activeFactId);
    element.classList.toggle("gapforge-anchor-active", Boolean(active));
  }
}

/** Remove every wrapper, restoring the original DOM text byte-exactly. */
export function unwrapHighlights(contentRoot: Element): void {
  for (const span of Array.from(contentRoot.querySelectorAll(`.${ANCHOR_CLASS}`))) {
    const parent = span.parentNode;
    if (!parent) continue;
    while (span.firstChild) parent.insertBefore(span.firstChild, span);
    parent.removeChild(span);
  }
  contentRoot.normalize();
}

export function visibleUnderlineLanguages(contentRoot: Element): string[][] {
  return Array.from(contentRoot.querySelectorAll(`.${ANCHOR_CLASS}:not(.gapforge-anchor-off)`)).map(
    (span) => (span.getAttribute("data-gapforge-langs") ?? "").split(" ").filter(Boolean),
  );
}
