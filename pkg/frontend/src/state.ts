/**
 * View state and the pure rules that govern it: slider weights stay
 * non-negative with at least one positive, re-clicking a node bumps the
 * sample seed, and only the latest in-flight response may render.
 */

export type WeightVector = [number, number, number, number, number];

export const DEFAULT_WEIGHTS: WeightVector = [0.2, 0.2, 0.2, 0.2, 0.2];

export interface ViewState {
  topicId: string | null;
  selectedUser: string | null;
  hoverUser: string | null;
  hoverItem: string | null;
  weights: WeightVector;
  sampleSeed: number;
}

export function initialState(): ViewState {
  return {
    topicId: null,
    selectedUser: null,
    hoverUser: null,
    hoverItem: null,
    weights: [...DEFAULT_WEIGHTS],
    sampleSeed: 0,
  };
}

/** Normalize for display; weights are guaranteed not all zero. */
export function normalizeWeights(weights: readonly number[]): number[] {
  const total = weights.reduce((acc, w) => acc + w, 0);
  if (total <= 0) {
    throw new Error("weights must not all be zero");
  }
  return weights.map((w) => w / total);
}

/**
 * Apply one slider move. Negative values clamp to zero; a move that would
 * zero out every weight is rejected (the previous vector is returned).
 */
export function setWeight(
  weights: WeightVector,
  index: number,
  value: number,
): WeightVector {
  const next = [...weights] as WeightVector;
  next[index] = Math.max(0, value);
  if (next.every((w) => w === 0)) {
    return weights;
  }
  return next;
}

/**
 * Selecting a node: a new user resets the sample seed, re-clicking the
 * already-selected user resamples by bumping it.
 */
export function selectUser(state: ViewState, user: string): ViewState {
  if (state.selectedUser === user) {
    return { ...state, sampleSeed: state.sampleSeed + 1 };
  }
  return { ...state, selectedUser: user, sampleSeed: 0 };
}

export function clearSelection(state: ViewState): ViewState {
  return { ...state, selectedUser: null, hoverItem: null };
}

/**
 * Stale-response guard: every request takes a token; only a response whose
 * token is still the newest issued one may be applied.
 */
export class RequestSequencer {
  private latest = -1;

  begin(): number {
    this.latest += 1;
    return this.latest;
  }

  shouldApply(token: number): boolean {
    return token === this.latest;
  }
}
