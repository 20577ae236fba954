import { describe, expect, it } from "vitest";

import {
  RequestSequencer,
  WeightVector,
  initialState,
  normalizeWeights,
  selectUser,
  setWeight,
} from "../src/state.js";

describe("weight rules", () => {
  it("normalizes to sum one", () => {
    const normalized = normalizeWeights([2, 1, 1, 0, 0]);
    expect(normalized.reduce((a, b) => a + b, 0)).toBeCloseTo(1, 10);
    expect(normalized[0]).toBeCloseTo(0.5);
  });

  it("rejects an all-zero vector", () => {
    expect(() => normalizeWeights([0, 0, 0, 0, 0])).toThrow();
  });

  it("clamps negative slider values to zero", () => {
    const weights: WeightVector = [0.2, 0.2, 0.2, 0.2, 0.2];
    expect(setWeight(weights, 2, -5)[2]).toBe(0);
  });

  it("refuses the move that would zero out every weight", () => {
    const weights: WeightVector = [0, 0, 0.4, 0, 0];
    const next = setWeight(weights, 2, 0);
    expect(next).toEqual(weights); // unchanged: at least one weight stays positive
  });

  it("keeps other entries untouched", () => {
    const weights: WeightVector = [0.1, 0.2, 0.3, 0.2, 0.2];
    const next = setWeight(weights, 0, 0.9);
    expect(next.slice(1)).toEqual(weights.slice(1));
  });
});

describe("selection", () => {
  it("a fresh selection starts at seed zero", () => {
    const state = selectUser({ ...initialState(), sampleSeed: 9 }, "u01");
    expect(state.selectedUser).toBe("u01");
    expect(state.sampleSeed).toBe(0);
  });

  it("re-clicking the selected node bumps the seed (resample)", () => {
    let state = selectUser(initialState(), "u01");
    state = selectUser(state, "u01");
    expect(state.sampleSeed).toBe(1);
    state = selectUser(state, "u01");
    expect(state.sampleSeed).toBe(2);
  });
});

describe("stale-response discarding", () => {
  it("only the latest issued token may apply", () => {
    const seq = new RequestSequencer();
    const first = seq.begin();
    const second = seq.begin();
    expect(seq.shouldApply(first)).toBe(false); // superseded while in flight
    expect(seq.shouldApply(second)).toBe(true);
  });

  it("a token stays valid until a newer request begins", () => {
    const seq = new RequestSequencer();
    const only = seq.begin();
    expect(seq.shouldApply(only)).toBe(true);
    expect(seq.shouldApply(only)).toBe(true); // idempotent check
    const newer = seq.begin();
    expect(seq.shouldApply(only)).toBe(false);
    expect(seq.shouldApply(newer)).toBe(true);
  });
});
