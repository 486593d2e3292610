/** Plot configuration: which metric to plot and how hyperparameters map
 * onto visual channels. */
import type { MetricId } from "./types.js";
import { METRIC_IDS } from "./types.js";

export const CHANNELS = ["color", "symbol", "size"] as const;
export type Channel = (typeof CHANNELS)[number];

/** A channel is driven by a hyperparameter name or by "family". */
export interface PlotSpec {
  metric: MetricId;
  grouping: "per_family" | "all_families";
  mode: "weak" | "strict";
  channels: Partial<Record<Channel, string>>;
  colorblind: boolean;
  showDominated: boolean;
}

export function defaultSpec(metric: MetricId = "statistical_parity"): PlotSpec {
  return {
    metric,
    grouping: "all_families",
    mode: "weak",
    channels: { color: "family" },
    colorblind: false,
    showDominated: false,
  };
}

/** Returns violation messages; empty means the PlotSpec is usable. */
export function validatePlotSpec(spec: PlotSpec): string[] {
  const violations: string[] = [];
  if (!METRIC_IDS.includes(spec.metric)) {
    violations.push(`unknown metric: ${spec.metric}`);
  }
  const used = new Map<string, Channel>();
  for (const channel of CHANNELS) {
    const field = spec.channels[channel];
    if (field === undefined) continue;
    const prior = used.get(field);
    if (prior !== undefined) {
      violations.push(
        `${field} is mapped to both ${prior} and ${channel}; ` +
          "a hyperparameter may drive at most one channel",
      );
    } else {
      used.set(field, channel);
    }
  }
  return violations;
}
