import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";

import { detectTopic } from "../src/topic.js";

const goldenTopic = JSON.parse(
  readFileSync("tests/fixtures/Peking_duck.json", "utf-8"),
).topic as string;

describe("detectTopic", () => {
  it("normalizes underscores to spaces", () => {
    expect(detectTopic("https://en.wikipedia.org/wiki/Peking_duck")).toBe("Peking duck");
  });

  it("decodes percent-encoded titles", () => {
    expect(detectTopic("https://en.wikipedia.org/wiki/Caf%C3%A9")).toBe("Café");
  });

  it("rejects non-article namespaces", () => {
    expect(detectTopic("https://en.wikipedia.org/wiki/Special:Search")).toBeNull();
    expect(detectTopic("https://en.wikipedia.org/wiki/Talk:Peking_duck")).toBeNull();
    expect(detectTopic("https://en.wikipedia.org/wiki/Category:Food")).toBeNull();
  });

  it("keeps titles with non-namespace colons", () => {
    expect(detectTopic("https://en.wikipedia.org/wiki/Star_Trek:_Generations")).toBe(
      "Star Trek: Generations",
    );
  });

  it("rejects other hosts and paths", () => {
    expect(detectTopic("https://fr.wikipedia.org/wiki/Injera")).toBeNull();
    expect(detectTopic("https://en.wikipedia.org/w/index.php?title=X")).toBeNull();
    expect(detectTopic("https://example.com/wiki/Peking_duck")).toBeNull();
    expect(detectTopic("not a url")).toBeNull();
    expect(detectTopic("https://en.wikipedia.org/wiki/")).toBeNull();
  });

  it("matches the golden dataset topic on the fixture page URL", () => {
    expect(detectTopic("https://en.wikipedia.org/wiki/Peking_duck")).toBe(goldenTopic);
  });

  it("accepts the mobile host", () => {
    expect(detectTopic("https://en.m.wikipedia.org/wiki/Peking_duck")).toBe("Peking duck");
  });
});
