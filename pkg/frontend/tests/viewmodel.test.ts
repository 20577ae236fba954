import { describe, expect, it } from "vitest";

import { buildPaneModel, itemLabel, sharerHighlight, whyEntries } from "../src/viewmodel.js";
import { detailDefault, detailL1Only } from "./helpers.js";

describe("pane model", () => {
  it("shows exactly 3 recommendations and 3 random articles", () => {
    const model = buildPaneModel(detailDefault);
    expect(model.recommendations).toHaveLength(3);
    expect(model.baseline).toHaveLength(3);
  });

  it("carries the profile link and polarity through", () => {
    const model = buildPaneModel(detailDefault);
    expect(model.profileUrl).toContain(model.user);
    expect(Math.abs(model.rho)).toBeLessThan(1);
  });

  it("keeps at most three sampled tweets", () => {
    const model = buildPaneModel(detailDefault);
    expect(model.tweets.length).toBeLessThanOrEqual(3);
  });
});

describe("why popup", () => {
  it("five normalized weights summing to 1 within display rounding", () => {
    for (const detail of [detailDefault, detailL1Only]) {
      for (const rec of detail.recommendations) {
        const entries = whyEntries(rec);
        expect(entries).toHaveLength(5);
        const total = entries.reduce((acc, e) => acc + e.weight, 0);
        expect(Math.abs(total - 1)).toBeLessThanOrEqual(0.01);
        for (const entry of entries) {
          expect(entry.weight).toBeGreaterThanOrEqual(0);
          expect(entry.name.length).toBeGreaterThan(0);
        }
      }
    }
  });

  it("positions are ranks or null when the item misses a list", () => {
    for (const rec of detailDefault.recommendations) {
      for (const entry of whyEntries(rec)) {
        if (entry.position !== null) {
          expect(entry.position).toBeGreaterThanOrEqual(1);
        }
      }
    }
  });
});

describe("sharer highlighting", () => {
  it("equals the payload sharers of a recommendation, exactly", () => {
    for (const rec of detailDefault.recommendations) {
      expect(sharerHighlight(detailDefault, rec.item)).toEqual(new Set(rec.sharers));
    }
  });

  it("also covers baseline items", () => {
    for (const entry of detailDefault.random_baseline) {
      expect(sharerHighlight(detailDefault, entry.item)).toEqual(new Set(entry.sharers));
    }
  });

  it("unknown items highlight nothing", () => {
    expect(sharerHighlight(detailDefault, "http://nope/x")).toEqual(new Set());
  });
});

describe("item labels", () => {
  it("shortens URLs to host/path", () => {
    expect(itemLabel("http://news.example/x/article-003")).toBe(
      "news.example/x/article-003",
    );
  });

  it("falls back to the raw string for non-URLs", () => {
    expect(itemLabel("not a url")).toBe("not a url");
  });
});
