/**
 * Payload types for the three service endpoints, with runtime validators.
 * Responses are checked at the fetch boundary so a schema mismatch surfaces
 * as a visible error banner instead of a broken render.
 */

export const FACTOR_LABELS = ["L1", "L2", "L3", "L4", "L5"] as const;
export type FactorLabel = (typeof FACTOR_LABELS)[number];

export interface TopicSummary {
  id: string;
  name: string;
  vertices: number;
  edges: number;
  side_x: number;
  side_y: number;
}

export interface GraphNode {
  user: string;
  x: number;
  y: number;
  side: "X" | "Y";
  rho: number;
  degree: number;
  hub: boolean;
}

export interface GraphEdge {
  source: string;
  target: string;
  weight: number;
}

export interface GraphPayload {
  topic: string;
  name: string;
  description: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface FactorContribution {
  weight: number;
  position: number | null;
  contribution: number;
}

export interface RecommendationEntry {
  rank: number;
  item: string;
  rho: number;
  phi: number;
  breakdown: Record<FactorLabel, FactorContribution>;
  sharers: string[];
}

export interface BaselineEntry {
  item: string;
  sharers: string[];
}

export interface EndorsedTweet {
  author: string;
  tweet_id: string;
  item: string;
  retweet_count: number;
}

export interface UserDetail {
  topic: string;
  user: string;
  side: "X" | "Y";
  rho: number;
  profile_url: string;
  seed: number;
  weights: Record<FactorLabel, number>;
  endorsed_tweets: EndorsedTweet[];
  recommendations: RecommendationEntry[];
  random_baseline: BaselineEntry[];
  short_pool: boolean;
}

export class SchemaError extends Error {
  constructor(endpoint: string, detail: string) {
    super(`unexpected ${endpoint} payload: ${detail}`);
    this.name = "SchemaError";
  }
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function isString(value: unknown): value is string {
  return typeof value === "string";
}

function isSide(value: unknown): value is "X" | "Y" {
  return value === "X" || value === "Y";
}

function isStringArray(value: unknown): value is string[] {
  return Array.isArray(value) && value.every(isString);
}

export function parseTopics(payload: unknown): TopicSummary[] {
  if (!Array.isArray(payload)) {
    throw new SchemaError("/topics", "expected an array");
  }
  for (const entry of payload) {
    if (
      !isRecord(entry) ||
      !isString(entry.id) ||
      !isString(entry.name) ||
      !isNumber(entry.vertices) ||
      !isNumber(entry.edges) ||
      !isNumber(entry.side_x) ||
      !isNumber(entry.side_y)
    ) {
      throw new SchemaError("/topics", "bad topic summary entry");
    }
  }
  return payload as TopicSummary[];
}

export function parseGraph(payload: unknown): GraphPayload {
  if (!isRecord(payload) || !isString(payload.topic) || !isString(payload.name)) {
    throw new SchemaError("graph", "missing topic metadata");
  }
  if (!Array.isArray(payload.nodes) || !Array.isArray(payload.edges)) {
    throw new SchemaError("graph", "nodes/edges must be arrays");
  }
  for (const node of payload.nodes) {
    if (
      !isRecord(node) ||
      !isString(node.user) ||
      !isNumber(node.x) ||
      !isNumber(node.y) ||
      !isSide(node.side) ||
      !isNumber(node.rho)
    ) {
      throw new SchemaError("graph", "bad node entry");
    }
  }
  for (const edge of payload.edges) {
    if (
      !isRecord(edge) ||
      !isString(edge.source) ||
      !isString(edge.target) ||
      !isNumber(edge.weight)
    ) {
      throw new SchemaError("graph", "bad edge entry");
    }
  }
  return payload as unknown as GraphPayload;
}

function checkBreakdown(value: unknown): value is Record<FactorLabel, FactorContribution> {
  if (!isRecord(value)) return false;
  for (const label of FACTOR_LABELS) {
    const entry = value[label];
    if (!isRecord(entry) || !isNumber(entry.weight) || !isNumber(entry.contribution)) {
      return false;
    }
    if (entry.position !== null && !isNumber(entry.position)) return false;
  }
  return true;
}

export function parseUserDetail(payload: unknown): UserDetail {
  if (
    !isRecord(payload) ||
    !isString(payload.user) ||
    !isSide(payload.side) ||
    !isNumber(payload.rho) ||
    !isString(payload.profile_url) ||
    !isNumber(payload.seed) ||
    typeof payload.short_pool !== "boolean"
  ) {
    throw new SchemaError("user detail", "missing user fields");
  }
  const weights = payload.weights;
  if (!isRecord(weights) || !FACTOR_LABELS.every((l) => isNumber(weights[l]))) {
    throw new SchemaError("user detail", "bad weights");
  }
  if (!Array.isArray(payload.endorsed_tweets)) {
    throw new SchemaError("user detail", "endorsed_tweets must be an array");
  }
  for (const tweet of payload.endorsed_tweets) {
    if (!isRecord(tweet) || !isString(tweet.author) || !isString(tweet.tweet_id)) {
      throw new SchemaError("user detail", "bad endorsed tweet");
    }
  }
  if (!Array.isArray(payload.recommendations)) {
    throw new SchemaError("user detail", "recommendations must be an array");
  }
  for (const rec of payload.recommendations) {
    if (
      !isRecord(rec) ||
      !isNumber(rec.rank) ||
      !isString(rec.item) ||
      !isNumber(rec.rho) ||
      !isNumber(rec.phi) ||
      !checkBreakdown(rec.breakdown) ||
      !isStringArray(rec.sharers)
    ) {
      throw new SchemaError("user detail", "bad recommendation entry");
    }
  }
  if (!Array.isArray(payload.random_baseline)) {
    throw new SchemaError("user detail", "random_baseline must be an array");
  }
  for (const entry of payload.random_baseline) {
    if (!isRecord(entry) || !isString(entry.item) || !isStringArray(entry.sharers)) {
      throw new SchemaError("user detail", "bad baseline entry");
    }
  }
  return payload as unknown as UserDetail;
}
