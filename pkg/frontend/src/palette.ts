/** Categorical palettes and marker styling ramps. */

export const DEFAULT_PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
] as const;

// Okabe-Ito set, distinguishable under the common color vision deficiencies
export const COLORBLIND_PALETTE = [
  "#E69F00", "#56B4E9", "#009E73", "#F0E442", "#0072B2",
  "#D55E00", "#CC79A7", "#000000",
] as const;

export const SYMBOLS = [
  "circle", "square", "triangle", "diamond", "cross", "star",
] as const;
export type Symbol = (typeof SYMBOLS)[number];

export function colorFor(index: number, colorblind: boolean): string {
  const palette = colorblind ? COLORBLIND_PALETTE : DEFAULT_PALETTE;
  return palette[index % palette.length];
}

export function symbolFor(index: number): Symbol {
  return SYMBOLS[index % SYMBOLS.length];
}

/** Marker radius in px for the i-th of n ordered size-channel values. */
export function sizeFor(index: number, count: number): number {
  if (count <= 1) return 5;
  return 3 + (index / (count - 1)) * 6;
}

/** Transparency rides along with size so small markers stay readable. */
export function opacityFor(index: number, count: number): number {
  if (count <= 1) return 0.9;
  return 0.55 + (index / (count - 1)) * 0.35;
}
