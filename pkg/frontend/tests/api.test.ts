import { afterEach, describe, expect, it, vi } from "vitest";

import { HttpApiClient, HttpError, detailQuery } from "../src/api.js";
import { SchemaError } from "../src/schema.js";
import { detailDefault, graphFixture, topicsFixture } from "./helpers.js";

function stubFetch(payloads: Record<string, { status?: number; body: unknown }>) {
  return vi.fn(async (url: string) => {
    const key = Object.keys(payloads).find((k) => url.includes(k));
    if (!key) throw new Error(`unstubbed url ${url}`);
    const { status = 200, body } = payloads[key];
    return {
      ok: status < 400,
      status,
      json: async () => structuredClone(body),
    } as Response;
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("query building", () => {
  it("serializes five weights and the seed", () => {
    expect(detailQuery({ weights: [1, 0, 0.5, 0, 0], seed: 7 })).toBe(
      "?w1=1&w2=0&w3=0.5&w4=0&w5=0&seed=7",
    );
  });

  it("is empty when nothing is customized", () => {
    expect(detailQuery()).toBe("");
    expect(detailQuery({})).toBe("");
  });

  it("sends the seed alone when weights are defaulted", () => {
    expect(detailQuery({ seed: 3 })).toBe("?seed=3");
  });
});

describe("http client", () => {
  it("fetches and validates the three endpoints", async () => {
    vi.stubGlobal(
      "fetch",
      stubFetch({
        "/users/": { body: detailDefault },
        "/graph": { body: graphFixture },
        "/topics": { body: topicsFixture },
      }),
    );
    const client = new HttpApiClient("http://api");
    expect((await client.topics())[0].id).toBe(topicsFixture[0].id);
    expect((await client.graph("t")).nodes.length).toBe(graphFixture.nodes.length);
    const detail = await client.userDetail("t", "u00", { seed: 0 });
    expect(detail.recommendations).toHaveLength(3);
  });

  it("raises HttpError with the server's code and message", async () => {
    vi.stubGlobal(
      "fetch",
      stubFetch({
        "/graph": { status: 404, body: { code: "not_found", message: "unknown topic" } },
      }),
    );
    const client = new HttpApiClient("http://api");
    await expect(client.graph("nope")).rejects.toMatchObject({
      status: 404,
      code: "not_found",
    });
    await expect(client.graph("nope")).rejects.toBeInstanceOf(HttpError);
  });

  it("raises SchemaError on malformed payloads", async () => {
    vi.stubGlobal("fetch", stubFetch({ "/topics": { body: { nope: 1 } } }));
    const client = new HttpApiClient("http://api");
    await expect(client.topics()).rejects.toBeInstanceOf(SchemaError);
  });
});
