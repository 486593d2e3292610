/** Canned service payloads used across the UI tests. */
import type {
  Family,
  HyperparamValue,
  MemberJson,
  MetricId,
  ParetoSetJson,
} from "../src/types.js";

export function member(
  x: number,
  y: number,
  family: Family = "logistic_regression",
  assignment?: Record<string, HyperparamValue>,
  metric: MetricId = "statistical_parity",
): MemberJson {
  const defaults: Record<Family, Record<string, HyperparamValue>> = {
    decision_tree: {
      criterion: "gini", max_features: "none", min_samples_split: 2,
      min_samples_leaf: 1, class_weight: "none",
    },
    random_forest: {
      criterion: "gini", max_features: "sqrt", min_samples_split: 2,
      min_samples_leaf: 1, class_weight: "none", bootstrap: true,
    },
    logistic_regression: { C: 1, penalty: "l2" },
    svc: { C: 1, kernel: "linear" },
  };
  return {
    family,
    assignment: assignment ?? defaults[family],
    n_splits: 3,
    usable: true,
    failed_splits: [],
    accuracy: { mean: x, variance: 0.0001 },
    balanced_accuracy: { mean: x - 0.01, variance: 0.0001 },
    metrics: {
      [metric]: {
        gap_mean: 1 - y, score_mean: y, variance: 0.0002, undefined_splits: 0,
      },
    },
    group_rates: { "0": { selection: 0.4 }, "1": { selection: 0.6 } },
    x,
    y,
  };
}

export function paretoSet(
  members: MemberJson[],
  family: Family | null = null,
  metric: MetricId = "statistical_parity",
): ParetoSetJson {
  return {
    pair: { x: "accuracy", y: metric },
    mode: "weak",
    grouping: family === null ? "all_families" : "per_family",
    family,
    excluded_undefined: 0,
    members,
  };
}

/** The canonical 3-point frontier: ascending accuracy, descending score. */
export function threePointFrontier(): ParetoSetJson {
  return paretoSet([
    member(0.85, 0.9, "logistic_regression", { C: 0.01, penalty: "l2" }),
    member(0.9, 0.7, "logistic_regression", { C: 1, penalty: "l2" }),
    member(0.95, 0.65, "logistic_regression", { C: 100, penalty: "none" }),
  ]);
}

export function fourFamilyFrontiers(): ParetoSetJson[] {
  return [
    paretoSet([member(0.8, 0.95, "decision_tree"), member(0.9, 0.7, "decision_tree")], "decision_tree"),
    paretoSet([member(0.82, 0.93, "random_forest"), member(0.92, 0.68, "random_forest")], "random_forest"),
    paretoSet([member(0.78, 0.97, "logistic_regression"), member(0.88, 0.75, "logistic_regression")], "logistic_regression"),
    paretoSet([member(0.81, 0.94, "svc"), member(0.91, 0.69, "svc")], "svc"),
  ];
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
