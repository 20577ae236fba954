/**
 * Pure projections from service payloads to what the pane renders.
 * No score is ever recomputed client-side; values come from the server.
 */

import { FACTOR_LABELS, FactorLabel, RecommendationEntry, UserDetail } from "./schema.js";

export const FACTOR_NAMES: Record<FactorLabel, string> = {
  L1: "Depolarization",
  L2: "Opposite-side exclusivity",
  L3: "Acceptance",
  L4: "Topic diversity",
  L5: "Popularity",
};

export interface WhyEntry {
  label: FactorLabel;
  name: string;
  weight: number;
  position: number | null;
}

export interface RecommendationView {
  rank: number;
  item: string;
  rho: number;
  sharers: string[];
  why: WhyEntry[];
}

export interface PaneModel {
  user: string;
  side: "X" | "Y";
  rho: number;
  profileUrl: string;
  seed: number;
  tweets: { author: string; tweetId: string; item: string }[];
  recommendations: RecommendationView[];
  baseline: { item: string; sharers: string[] }[];
  shortPool: boolean;
}

/** The five normalized weights shown in a recommendation's "why" popup. */
export function whyEntries(rec: RecommendationEntry): WhyEntry[] {
  return FACTOR_LABELS.map((label) => ({
    label,
    name: FACTOR_NAMES[label],
    weight: rec.breakdown[label].weight,
    position: rec.breakdown[label].position,
  }));
}

export function buildPaneModel(detail: UserDetail): PaneModel {
  return {
    user: detail.user,
    side: detail.side,
    rho: detail.rho,
    profileUrl: detail.profile_url,
    seed: detail.seed,
    tweets: detail.endorsed_tweets.map((t) => ({
      author: t.author,
      tweetId: t.tweet_id,
      item: t.item,
    })),
    recommendations: detail.recommendations.map((rec) => ({
      rank: rec.rank,
      item: rec.item,
      rho: rec.rho,
      sharers: rec.sharers,
      why: whyEntries(rec),
    })),
    baseline: detail.random_baseline.map((b) => ({ item: b.item, sharers: b.sharers })),
    shortPool: detail.short_pool,
  };
}

/**
 * Nodes to highlight when hovering an item in the pane: exactly the sharers
 * the server reported for that item (recommendation or baseline).
 */
export function sharerHighlight(detail: UserDetail, item: string): Set<string> {
  for (const rec of detail.recommendations) {
    if (rec.item === item) {
      return new Set(rec.sharers);
    }
  }
  for (const entry of detail.random_baseline) {
    if (entry.item === item) {
      return new Set(entry.sharers);
    }
  }
  return new Set();
}

/** Short display form of an item URL (path only, host kept for foreign hosts). */
export function itemLabel(item: string): string {
  try {
    const url = new URL(item);
    const path = url.pathname.replace(/^\/+/, "");
    return path ? `${url.hostname}/${path}` : url.hostname;
  } catch {
    return item;
  }
}
