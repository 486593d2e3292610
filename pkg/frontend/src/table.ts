/** Frontier table view: same column layout as the service's CSV export,
 * built client-side from the frontier payload. */
import type { MetricId, ParetoSetJson } from "./types.js";
import { FAMILIES, HYPERPARAM_ORDER } from "./types.js";

export interface FrontierTable {
  columns: string[];
  rows: (string | number | boolean | null)[][];
}

function hyperparamUnion(psets: ParetoSetJson[]): string[] {
  const present = new Set<string>();
  for (const p of psets) {
    for (const m of p.members) {
      for (const name of Object.keys(m.assignment)) present.add(name);
    }
  }
  const ordered: string[] = [];
  for (const family of FAMILIES) {
    for (const name of HYPERPARAM_ORDER[family]) {
      if (present.has(name) && !ordered.includes(name)) ordered.push(name);
    }
  }
  return ordered;
}

export function frontierTable(
  psets: ParetoSetJson[],
  metricIds: MetricId[],
): FrontierTable {
  const hyperparams = hyperparamUnion(psets);
  const columns = [
    "accuracy",
    ...metricIds.map((m) => `${m}_score`),
    ...hyperparams,
    "family",
  ];
  const rows: FrontierTable["rows"] = [];
  for (const p of psets) {
    for (const m of p.members) {
      const row: (string | number | boolean | null)[] = [
        m.accuracy?.mean ?? null,
      ];
      for (const metric of metricIds) {
        row.push(m.metrics[metric]?.score_mean ?? null);
      }
      for (const name of hyperparams) {
        const v = m.assignment[name];
        row.push(v === undefined ? null : v);
      }
      row.push(m.family);
      rows.push(row);
    }
  }
  return { columns, rows };
}
