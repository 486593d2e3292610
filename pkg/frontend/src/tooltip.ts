/** Hover card content: the full hyperparameter assignment plus every
 * aggregated objective of the record. */
import type { MemberJson } from "./types.js";

function num(v: number | null | undefined): string {
  return v === null || v === undefined ? "undefined" : v.toFixed(4);
}

export function tooltipLines(member: MemberJson): string[] {
  const lines: string[] = [member.family];
  for (const [name, value] of Object.entries(member.assignment)) {
    lines.push(`${name} = ${value}`);
  }
  lines.push(`accuracy = ${num(member.accuracy?.mean)}`);
  lines.push(`balanced_accuracy = ${num(member.balanced_accuracy?.mean)}`);
  for (const [metric, agg] of Object.entries(member.metrics)) {
    lines.push(`${metric} score = ${num(agg.score_mean)}`);
  }
  if (member.failed_splits.length > 0) {
    lines.push(`failed splits: ${member.failed_splits.join(", ")}`);
  }
  return lines;
}

export function tooltipHtml(member: MemberJson): string {
  return tooltipLines(member)
    .map((l, i) => (i === 0 ? `<strong>${l}</strong>` : l))
    .join("<br>");
}
