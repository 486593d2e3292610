/** JSON shapes served by the sweep service, mirrored for the browser. */

export const METRIC_IDS = [
  "statistical_parity",
  "equal_opportunity",
  "predictive_parity",
  "predictive_equality",
  "accuracy_equality",
  "equalized_odds",
] as const;
export type MetricId = (typeof METRIC_IDS)[number];

export const FAMILIES = [
  "decision_tree",
  "random_forest",
  "logistic_regression",
  "svc",
] as const;
export type Family = (typeof FAMILIES)[number];

/** Hyperparameter declaration order per family, matching service payloads. */
export const HYPERPARAM_ORDER: Record<Family, readonly string[]> = {
  decision_tree: [
    "criterion", "max_features", "min_samples_split", "min_samples_leaf",
    "class_weight",
  ],
  random_forest: [
    "criterion", "max_features", "min_samples_split", "min_samples_leaf",
    "class_weight", "bootstrap",
  ],
  logistic_regression: ["C", "penalty"],
  svc: ["C", "kernel"],
};

export type HyperparamValue = string | number | boolean;

export interface ObjectiveStatsJson {
  mean: number;
  variance: number;
}

export interface MetricAggregateJson {
  gap_mean: number | null;
  score_mean: number | null;
  variance: number | null;
  undefined_splits: number;
}

export interface RecordJson {
  family: Family;
  assignment: Record<string, HyperparamValue>;
  n_splits: number;
  usable: boolean;
  failed_splits: number[];
  accuracy: ObjectiveStatsJson | null;
  balanced_accuracy: ObjectiveStatsJson | null;
  metrics: Record<string, MetricAggregateJson>;
  group_rates: Record<string, Record<string, number | null>>;
}

/** Frontier member: a record plus its plotted coordinates. */
export interface MemberJson extends RecordJson {
  x: number;
  y: number;
}

export interface ParetoSetJson {
  pair: { x: string; y: string };
  mode: "weak" | "strict";
  grouping: "per_family" | "all_families";
  family: Family | null;
  excluded_undefined: number;
  members: MemberJson[];
}

export interface DatasetSummaryJson {
  id: string;
  n_rows: number;
  columns: { name: string; kind: string }[];
  feature_columns: string[];
  class_counts: { positive: number; negative: number };
  group_counts: { group0: number; group1: number };
  target: string;
}

export type JobState = "pending" | "running" | "finished" | "failed";

export interface ProgressJson {
  state: JobState;
  fraction: number;
  completed: number;
  total: number;
  error?: string;
}
