/** Topic detection from the current page URL. */

const NAMESPACES = new Set(
  [
    "special",
    "talk",
    "user",
    "user talk",
    "wikipedia",
    "wikipedia talk",
    "file",
    "file talk",
    "mediawiki",
    "help",
    "category",
    "category talk",
    "portal",
    "draft",
    "template",
    "template talk",
    "module",
    "timedtext",
  ],
);

/**
 * Normalized article title for an English-wiki article URL, or null when
 * the page is not an article (the extension stays dormant then).
 */
export function detectTopic(url: string): string | null {
  let parsed: URL;
  try {
    parsed = new URL(url);
  } catch {
    return null;
  }
  if (parsed.hostname !== "en.wikipedia.org" && parsed.hostname !== "en.m.wikipedia.org") {
    return null;
  }
  if (!parsed.pathname.startsWith("/wiki/")) return null;
  const rawTitle = parsed.pathname.slice("/wiki/".length);
  if (!rawTitle) return null;
  let decoded: string;
  try {
    decoded = decodeURIComponent(rawTitle);
  } catch {
    return null;
  }
  const title = decoded.replace(/_/g, " ").trim();
  if (!title) return null;
  const colon = title.indexOf(":");
  if (colon > 0 && NAMESPACES.has(title.slice(0, colon).toLowerCase())) {
    return null;
  }
  return title;
}
