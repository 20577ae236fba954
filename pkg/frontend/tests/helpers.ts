import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient, DetailOptions } from "../src/api.js";
import { GraphPayload, TopicSummary, UserDetail } from "../src/schema.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8")) as T;
}

export const topicsFixture = fixture<TopicSummary[]>("topics.json");
export const graphFixture = fixture<GraphPayload>("graph.json");
export const detailDefault = fixture<UserDetail>("detail_default.json");
export const detailL1Only = fixture<UserDetail>("detail_l1only.json");
export const detailMixed = fixture<UserDetail>("detail_mixed.json");
export const detailSeed7 = fixture<UserDetail>("detail_seed7.json");

export function weightsKey(weights?: readonly number[]): string {
  if (!weights) return "default";
  const total = weights.reduce((acc, w) => acc + w, 0);
  return weights.map((w) => (w / total).toFixed(3)).join(",");
}

const KNOWN: Record<string, UserDetail> = {
  default: detailDefault,
  [weightsKey([0.2, 0.2, 0.2, 0.2, 0.2])]: detailDefault,
  [weightsKey([1, 0, 0, 0, 0])]: detailL1Only,
  [weightsKey([0.1, 0.3, 0.2, 0.2, 0.2])]: detailMixed,
};

function rotated(base: UserDetail, shift: number): UserDetail {
  const recs = base.recommendations;
  const turned = recs.map((_, i) => recs[(i + shift) % recs.length]);
  return { ...base, recommendations: turned.map((r, i) => ({ ...r, rank: i + 1 })) };
}

/**
 * Deterministic fake service over the recorded fixtures. Known weight
 * configurations return the recorded payload; anything else returns a
 * payload derived deterministically from the weights, so "same weights in,
 * same list out" holds exactly like on the real server.
 */
export class FakeApiClient implements ApiClient {
  calls: { user: string; weights?: readonly number[]; seed?: number }[] = [];

  async topics(): Promise<TopicSummary[]> {
    return topicsFixture;
  }

  async graph(): Promise<GraphPayload> {
    return graphFixture;
  }

  async userDetail(
    _topic: string,
    user: string,
    opts?: DetailOptions,
  ): Promise<UserDetail> {
    this.calls.push({ user, weights: opts?.weights, seed: opts?.seed });
    return this.lookup(opts);
  }

  lookup(opts?: DetailOptions): UserDetail {
    const key = weightsKey(opts?.weights);
    const uniform = key === "default" || key === weightsKey([1, 1, 1, 1, 1]);
    if ((opts?.seed ?? 0) > 0 && uniform) {
      return detailSeed7;
    }
    const known = KNOWN[key];
    if (known) return known;
    let hash = 0;
    for (const ch of key) hash = (hash * 31 + ch.charCodeAt(0)) % 997;
    return rotated(detailDefault, hash % detailDefault.recommendations.length);
  }
}

/** Fake whose responses resolve only when the test releases them. */
export class DeferredApiClient extends FakeApiClient {
  private pending: { resolve: (d: UserDetail) => void; opts?: DetailOptions }[] = [];

  override userDetail(
    _topic: string,
    user: string,
    opts?: DetailOptions,
  ): Promise<UserDetail> {
    this.calls.push({ user, weights: opts?.weights, seed: opts?.seed });
    return new Promise((resolve) => {
      this.pending.push({ resolve, opts });
    });
  }

  release(index: number): void {
    const entry = this.pending[index];
    entry.resolve(this.lookup(entry.opts));
  }
}
