/** Dataset wire types mirrored from the pipeline's JSON schema. */

export interface PresentedFact {
  id: string;
  language_code: string;
  text_en: string;
  text_src: string;
  source_title: string;
  source_link_url: string;
  anchor_sentence_en: string;
  anchor_paragraph_index: number;
  similarity: number;
  section_index: number;
}

export interface TopicDataset {
  schema_version: number;
  topic: string;
  english_revision: string;
  generated_at: string;
  languages: string[];
  facts: Record<string, PresentedFact[]>;
  provenance: Record<string, string>;
}

export const SCHEMA_VERSION = 1;

export class DatasetValidationError extends Error {}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function checkFact(value: unknown, language: string): PresentedFact {
  if (!isRecord(value)) throw new DatasetValidationError("fact is not an object");
  const stringFields = [
    "id",
    "language_code",
    "text_en",
    "text_src",
    "source_title",
    "source_link_url",
    "anchor_sentence_en",
  ] as const;
  for (const field of stringFields) {
    if (typeof value[field] !== "string") {
      throw new DatasetValidationError(`fact field ${field} must be a string`);
    }
  }
  if (
    typeof value.anchor_paragraph_index !== "number" ||
    typeof value.similarity !== "number" ||
    typeof value.section_index !== "number"
  ) {
    throw new DatasetValidationError("fact numeric fields malformed");
  }
  if (value.language_code !== language) {
    throw new DatasetValidationError(
      `fact ${String(value.id)} has language ${String(value.language_code)} under ${language}`,
    );
  }
  return value as unknown as PresentedFact;
}

/** Validate the raw JSON body; throws DatasetValidationError on any violation. */
export function validateDataset(raw: unknown): TopicDataset {
  if (!isRecord(raw)) throw new DatasetValidationError("dataset is not an object");
  if (raw.schema_version !== SCHEMA_VERSION) {
    throw new DatasetValidationError(`unsupported schema_version ${String(raw.schema_version)}`);
  }
  if (typeof raw.topic !== "string" || !raw.topic) {
    throw new DatasetValidationError("missing topic");
  }
  if (typeof raw.english_revision !== "string" || typeof raw.generated_at !== "string") {
    throw new DatasetValidationError("missing revision or timestamp");
  }
  if (!Array.isArray(raw.languages) || !raw.languages.every((l) => typeof l === "string")) {
    throw new DatasetValidationError("languages must be a string array");
  }
  if (!isRecord(raw.facts)) throw new DatasetValidationError("facts must be an object");
  const factKeys = Object.keys(raw.facts);
  if (
    raw.languages.length !== factKeys.length ||
    !raw.languages.every((l: string) => factKeys.includes(l))
  ) {
    throw new DatasetValidationError("languages list does not match fact groups");
  }
  const seen = new Set<string>();
  for (const language of raw.languages as string[]) {
    const group = (raw.facts as Record<string, unknown>)[language];
    if (!Array.isArray(group)) throw new DatasetValidationError("fact group must be an array");
    for (const entry of group) {
      const fact = checkFact(entry, language);
      if (seen.has(fact.id)) throw new DatasetValidationError(`duplicate fact id ${fact.id}`);
      seen.add(fact.id);
    }
  }
  if (!isRecord(raw.provenance)) throw new DatasetValidationError("provenance must be an object");
  return raw as unknown as TopicDataset;
}

export function allFacts(dataset: TopicDataset): PresentedFact[] {
  return dataset.languages.flatMap((language) => dataset.facts[language]);
}
