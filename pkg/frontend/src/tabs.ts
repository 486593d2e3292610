/** The explorer's view tabs and what each one fetches and draws. */
import type { PlotSpec } from "./plotspec.js";
import type { Scene } from "./scene.js";
import { buildScene } from "./scene.js";
import type { Family, MemberJson, MetricId, ParetoSetJson } from "./types.js";

export const TABS = [
  "individual",
  "multi_model",
  "superimposed",
  "multi_metric",
  "table",
] as const;
export type Tab = (typeof TABS)[number];

export interface FetchPlanItem {
  metric: MetricId;
  grouping: "per_family" | "all_families";
}

/** Which frontier queries a tab needs. individual and superimposed use
 * the per-family response; multi_model pools everything into one set;
 * multi_metric repeats the pooled query per selected metric. */
export function fetchPlan(
  tab: Tab,
  metric: MetricId,
  metrics: MetricId[],
): FetchPlanItem[] {
  switch (tab) {
    case "individual":
    case "superimposed":
      return [{ metric, grouping: "per_family" }];
    case "multi_model":
    case "table":
      return [{ metric, grouping: "all_families" }];
    case "multi_metric":
      return metrics.map((m) => ({ metric: m, grouping: "all_families" }));
  }
}

export interface TabScene {
  title: string;
  scene: Scene;
}

export function individualScenes(
  perFamily: ParetoSetJson[],
  family: Family,
  spec: PlotSpec,
  hidden: ReadonlySet<string>,
  dominated: MemberJson[] = [],
): TabScene[] {
  const match = perFamily.filter((p) => p.family === family);
  return match.map((p) => ({
    title: family,
    scene: buildScene([p], spec, hidden, undefined, dominated),
  }));
}

/** All family frontiers overlaid in one plot, colored by family. */
export function superimposedScene(
  perFamily: ParetoSetJson[],
  spec: PlotSpec,
  hidden: ReadonlySet<string>,
): TabScene {
  const familySpec: PlotSpec = {
    ...spec,
    channels: { ...spec.channels, color: "family" },
  };
  return {
    title: "all families, one plot per family frontier",
    scene: buildScene(perFamily, familySpec, hidden),
  };
}

export function multiMetricScenes(
  pooledByMetric: Map<MetricId, ParetoSetJson>,
  spec: PlotSpec,
  hidden: ReadonlySet<string>,
): TabScene[] {
  return [...pooledByMetric.entries()].map(([metric, payload]) => ({
    title: metric,
    scene: buildScene([payload], { ...spec, metric }, hidden),
  }));
}
