/** Dataset loading: local service first, bundled file fallback. */

import { TopicDataset, validateDataset } from "./types.js";

export const DEFAULT_SERVICE_URL = "http://127.0.0.1:8571";

export interface LoadOptions {
  serviceUrl?: string;
  fetchFn?: typeof fetch;
  /** Maps a dataset file name to a bundled-resource URL, when one exists. */
  bundledUrl?: (fileName: string) => string | null;
}

export function datasetFileName(topic: string): string {
  return `${topic.replace(/ /g, "_")}.json`;
}

function defaultBundledUrl(fileName: string): string | null {
  const chromeApi = (globalThis as { chrome?: any }).chrome;
  if (chromeApi?.runtime?.getURL) {
    return chromeApi.runtime.getURL(`fixtures/${fileName}`);
  }
  return null;
}

async function fetchDataset(url: string, fetchFn: typeof fetch): Promise<TopicDataset | null> {
  let response: Response;
  try {
    response = await fetchFn(url);
  } catch {
    return null;
  }
  if (!response.ok) return null;
  let body: unknown;
  try {
    body = await response.json();
  } catch {
    return null;
  }
  return validateDataset(body); // validation errors propagate to the caller
}

/**
 * Load and validate the topic's dataset. Returns null (dormant mode)
 * when neither the service nor a bundled file can supply a valid one;
 * schema violations are logged, never rendered.
 */
export async function loadDataset(
  topic: string,
  options: LoadOptions = {},
): Promise<TopicDataset | null> {
  const fetchFn = options.fetchFn ?? fetch;
  const serviceUrl = options.serviceUrl ?? DEFAULT_SERVICE_URL;
  const bundledUrl = options.bundledUrl ?? defaultBundledUrl;
  const fileName = datasetFileName(topic);

  const sources: string[] = [`${serviceUrl}/api/datasets/${encodeURIComponent(fileName.slice(0, -5))}`];
  const bundled = bundledUrl(fileName);
  if (bundled) sources.push(bundled);

  for (const url of sources) {
    try {
      const dataset = await fetchDataset(url, fetchFn);
      if (dataset) return dataset;
    } catch (error) {
      console.warn(`gapforge: invalid dataset from ${url}:`, error);
      return null;
    }
  }
  console.info(`gapforge: no dataset for ${topic}; staying dormant`);
  return null;
}
