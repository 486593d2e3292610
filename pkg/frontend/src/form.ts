/** Run configuration form model: turn the form's text fields into an
 * exploration request, and route server-side violations back to the
 * fields they name. */
import type { Family, MetricId } from "./types.js";
import { HYPERPARAM_ORDER } from "./types.js";

export interface FormModel {
  datasetId: string;
  families: Family[];
  /** per family, per hyperparameter: comma-separated value text */
  spaces: Partial<Record<Family, Record<string, string>>>;
  metrics: MetricId[];
  nSplits: number;
  seed: number;
  mode: "weak" | "strict";
  workers: number;
}

export function defaultForm(datasetId = ""): FormModel {
  return {
    datasetId,
    families: ["logistic_regression"],
    spaces: {},
    metrics: ["statistical_parity"],
    nSplits: 5,
    seed: 0,
    mode: "weak",
    workers: 1,
  };
}

/** "0.01, 1, 100" -> [0.01, 1, 100]; "true,false" -> booleans;
 * anything non-numeric stays a string. */
export function parseValueList(text: string): (string | number | boolean)[] {
  return text
    .split(",")
    .map((t) => t.trim())
    .filter((t) => t.length > 0)
    .map((t) => {
      if (t === "true") return true;
      if (t === "false") return false;
      const n = Number(t);
      return Number.isFinite(n) && t !== "" ? n : t;
    });
}

export function buildExplorationBody(model: FormModel): object {
  const spaces: Record<string, Record<string, unknown[]>> = {};
  for (const family of model.families) {
    const texts = model.spaces[family];
    if (!texts) continue;
    const space: Record<string, unknown[]> = {};
    for (const name of HYPERPARAM_ORDER[family]) {
      const text = texts[name];
      if (text !== undefined && text.trim() !== "") {
        space[name] = parseValueList(text);
      }
    }
    if (Object.keys(space).length > 0) spaces[family] = space;
  }
  const body: Record<string, unknown> = {
    dataset_id: model.datasetId,
    families: model.families,
    metrics: model.metrics,
    split: { n_splits: model.nSplits },
    seed: model.seed,
    mode: model.mode,
    workers: model.workers,
  };
  if (Object.keys(spaces).length > 0) body.spaces = spaces;
  return body;
}

/** Server violations look like "logistic_regression.C: C must be > 0".
 * The prefix before the first ": " names the offending field; the rest
 * is the message shown inline next to it. */
export function violationsByField(
  violations: string[],
): Map<string, string[]> {
  const byField = new Map<string, string[]>();
  for (const v of violations) {
    const sep = v.indexOf(": ");
    const field = sep > 0 ? v.slice(0, sep) : "";
    const message = sep > 0 ? v.slice(sep + 2) : v;
    const bucket = byField.get(field) ?? [];
    bucket.push(message);
    byField.set(field, bucket);
  }
  return byField;
}
