/** Criterion weight sliders with proportional renormalization.
 *
 * The engine requires weights in [0, 1] summing to 1, so the sliders
 * enforce that invariant client-side: moving one slider rescales all
 * untouched sliders proportionally into the remaining mass. The
 * criterion order comes from the catalog endpoint — the console defines
 * no criteria of its own.
 */

export interface WeightState {
  /** Criterion ids in catalog order. */
  readonly order: readonly string[];
  /** Current value per criterion; always sums to 1 within float noise. */
  readonly values: Readonly<Record<string, number>>;
}

export function uniformWeights(order: readonly string[]): WeightState {
  if (order.length === 0) {
    throw new Error("weight state needs at least one criterion");
  }
  const values: Record<string, number> = {};
  for (const criterion of order) {
    values[criterion] = 1.0 / order.length;
  }
  return { order: [...order], values };
}

/** Set one slider and rescale the untouched ones into the remaining mass.
 *
 * When the untouched sliders are all at zero there is no proportion to
 * preserve, so the remaining mass spreads equally across them.
 */
export function setWeight(
  state: WeightState,
  criterion: string,
  newValue: number,
): WeightState {
  if (!(criterion in state.values)) {
    throw new Error(`unknown criterion '${criterion}'`);
  }
  const others = state.order.filter((id) => id !== criterion);
  // a lone slider has nowhere to shed mass, so it stays pinned at 1
  const value =
    others.length === 0 ? 1.0 : Math.min(1.0, Math.max(0.0, newValue));
  const rest = others.reduce((sum, id) => sum + (state.values[id] ?? 0), 0);
  const remaining = 1.0 - value;

  const values: Record<string, number> = { [criterion]: value };
  for (const id of others) {
    values[id] =
      rest > 0 ? (state.values[id] ?? 0) * (remaining / rest) : remaining / others.length;
  }
  return { order: state.order, values };
}

export function weightSum(state: WeightState): number {
  return state.order.reduce((sum, id) => sum + (state.values[id] ?? 0), 0);
}

/** The sum indicator shown next to the sliders; renormalization keeps it at "1.00". */
export function displayedSum(state: WeightState): string {
  return weightSum(state).toFixed(2);
}

/** The weights object sent in analyze/sensitivity request bodies. */
export function toRequestWeights(state: WeightState): Record<string, number> {
  return { ...state.values };
}
