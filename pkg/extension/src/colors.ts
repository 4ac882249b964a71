/** Language color coding, consistent across underlines, badges, and chips. */

export type ColorScheme = Record<string, string>;

// Red for Chinese, blue for French, green for Russian.
export const DEFAULT_COLOR_SCHEME: ColorScheme = {
  zh: "#c0392b",
  fr: "#2e6fd8",
  ru: "#1e8e4e",
};

export const LANGUAGE_LABELS: Record<string, string> = {
  fr: "French",
  ru: "Russian",
  zh: "Chinese",
  en: "English",
};

export function colorFor(language: string, scheme: ColorScheme = DEFAULT_COLOR_SCHEME): string {
  return scheme[language] ?? "#777777";
}

export function languageLabel(language: string): string {
  return LANGUAGE_LABELS[language] ?? language;
}

/**
 * The default scheme can be overridden from extension storage (some
 * readers read red/green as right/wrong); falls back silently outside
 * an extension context.
 */
export async function loadColorScheme(): Promise<ColorScheme> {
  try {
    const chromeApi = (globalThis as { chrome?: any }).chrome;
    if (chromeApi?.storage?.sync?.get) {
      const stored = await chromeApi.storage.sync.get("gapforgeColors");
      if (stored && typeof stored.gapforgeColors === "object" && stored.gapforgeColors) {
        return { ...DEFAULT_COLOR_SCHEME, ...stored.gapforgeColors };
      }
    }
  } catch {
    // storage unavailable: use defaults
  }
  return DEFAULT_COLOR_SCHEME;
}
