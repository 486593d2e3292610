/** Pure scene construction: frontier payloads + plot spec + legend state
 * in, drawable markers/staircases/legend out. No DOM, no fetching. */
import { colorFor, opacityFor, sizeFor, symbolFor } from "./palette.js";
import type { Symbol } from "./palette.js";
import type { Channel, PlotSpec } from "./plotspec.js";
import { CHANNELS } from "./plotspec.js";
import type { MemberJson, ParetoSetJson, RecordJson } from "./types.js";

export interface SceneDims {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_DIMS: SceneDims = {
  width: 640,
  height: 420,
  margin: { top: 16, right: 16, bottom: 40, left: 52 },
};

export interface Marker {
  /** data coordinates */
  x: number;
  y: number;
  /** pixel coordinates */
  px: number;
  py: number;
  color: string;
  symbol: Symbol;
  size: number;
  opacity: number;
  /** legend keys this marker belongs to, one per active channel */
  keys: string[];
  visible: boolean;
  dominated: boolean;
  member: MemberJson;
}

export interface Staircase {
  seriesKey: string | null;
  color: string;
  /** data coordinates of the step polyline */
  points: [number, number][];
  /** pixel coordinates, same order */
  pixels: [number, number][];
  visible: boolean;
}

export interface LegendEntry {
  channel: Channel;
  field: string;
  value: string;
  key: string;
  color: string | null;
  symbol: Symbol | null;
  size: number | null;
  visible: boolean;
}

export interface Scene {
  markers: Marker[];
  staircases: Staircase[];
  legend: LegendEntry[];
  xDomain: [number, number];
  yDomain: [number, number];
  xTicks: number[];
  yTicks: number[];
  xLabel: string;
  yLabel: string;
  dims: SceneDims;
}

function channelValue(record: RecordJson, field: string): string {
  if (field === "family") return record.family;
  const v = record.assignment[field];
  return v === undefined ? "n/a" : String(v);
}

export function legendKey(field: string, value: string): string {
  return `${field}=${value}`;
}

/** Step polyline through frontier points sorted by ascending x: move
 * right at the previous height, then drop to the next point. */
export function staircasePoints(
  coords: [number, number][],
): [number, number][] {
  if (coords.length === 0) return [];
  const sorted = [...coords].sort((a, b) => a[0] - b[0] || b[1] - a[1]);
  const out: [number, number][] = [sorted[0]];
  for (let i = 1; i < sorted.length; i++) {
    const [x, y] = sorted[i];
    const prev = out[out.length - 1];
    if (x !== prev[0]) out.push([x, prev[1]]);
    if (y !== out[out.length - 1][1]) out.push([x, y]);
  }
  return out;
}

function ticks(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) return [lo];
  const out: number[] = [];
  for (let i = 0; i < count; i++) out.push(lo + ((hi - lo) * i) / (count - 1));
  return out;
}

interface ChannelScale {
  field: string;
  values: string[];
}

function collectChannelValues(
  spec: PlotSpec,
  records: RecordJson[],
): Partial<Record<Channel, ChannelScale>> {
  const scales: Partial<Record<Channel, ChannelScale>> = {};
  for (const channel of CHANNELS) {
    const field = spec.channels[channel];
    if (!field) continue;
    const values: string[] = [];
    for (const r of records) {
      const v = channelValue(r, field);
      if (!values.includes(v)) values.push(v);
    }
    scales[channel] = { field, values };
  }
  return scales;
}

/** Build the full drawable scene.
 *
 * Domains come from every frontier member regardless of legend state, so
 * toggling a series never moves the axes. Optional `dominated` records
 * are drawn faded and do not join the staircase.
 */
export function buildScene(
  payloads: ParetoSetJson[],
  spec: PlotSpec,
  hidden: ReadonlySet<string> = new Set(),
  dims: SceneDims = DEFAULT_DIMS,
  dominated: MemberJson[] = [],
): Scene {
  const members = payloads.flatMap((p) => p.members);
  const cloud = spec.showDominated ? dominated : [];
  const everyRecord: RecordJson[] = [...members, ...cloud];
  const scales = collectChannelValues(spec, everyRecord);

  const xs = [...members, ...cloud].map((m) => m.x);
  const ys = [...members, ...cloud].map((m) => m.y);
  let [xLo, xHi] = xs.length ? [Math.min(...xs), Math.max(...xs)] : [0, 1];
  let [yLo, yHi] = ys.length ? [Math.min(...ys), Math.max(...ys)] : [0, 1];
  if (xLo === xHi) [xLo, xHi] = [xLo - 0.05, xHi + 0.05];
  if (yLo === yHi) [yLo, yHi] = [yLo - 0.05, yHi + 0.05];
  const padX = (xHi - xLo) * 0.06;
  const padY = (yHi - yLo) * 0.06;
  const xDomain: [number, number] = [xLo - padX, xHi + padX];
  const yDomain: [number, number] = [yLo - padY, yHi + padY];

  const innerW = dims.width - dims.margin.left - dims.margin.right;
  const innerH = dims.height - dims.margin.top - dims.margin.bottom;
  const toPx = (x: number) =>
    dims.margin.left + ((x - xDomain[0]) / (xDomain[1] - xDomain[0])) * innerW;
  const toPy = (y: number) =>
    dims.margin.top +
    innerH -
    ((y - yDomain[0]) / (yDomain[1] - yDomain[0])) * innerH;

  const styleFor = (record: RecordJson, seriesIndex: number) => {
    let color = colorFor(seriesIndex, spec.colorblind);
    let symbol: Symbol = "circle";
    let size = 5;
    let opacity = 0.9;
    const keys: string[] = [];
    const colorScale = scales.color;
    if (colorScale) {
      const v = channelValue(record, colorScale.field);
      color = colorFor(colorScale.values.indexOf(v), spec.colorblind);
      keys.push(legendKey(colorScale.field, v));
    }
    const symbolScale = scales.symbol;
    if (symbolScale) {
      const v = channelValue(record, symbolScale.field);
      symbol = symbolFor(symbolScale.values.indexOf(v));
      keys.push(legendKey(symbolScale.field, v));
    }
    const sizeScale = scales.size;
    if (sizeScale) {
      const v = channelValue(record, sizeScale.field);
      const i = sizeScale.values.indexOf(v);
      size = sizeFor(i, sizeScale.values.length);
      opacity = opacityFor(i, sizeScale.values.length);
      keys.push(legendKey(sizeScale.field, v));
    }
    return { color, symbol, size, opacity, keys };
  };

  const markers: Marker[] = [];
  payloads.forEach((payload, seriesIndex) => {
    for (const member of payload.members) {
      const style = styleFor(member, seriesIndex);
      markers.push({
        x: member.x,
        y: member.y,
        px: toPx(member.x),
        py: toPy(member.y),
        ...style,
        visible: style.keys.every((k) => !hidden.has(k)),
        dominated: false,
        member,
      });
    }
  });
  for (const member of cloud) {
    const style = styleFor(member, 0);
    markers.push({
      x: member.x,
      y: member.y,
      px: toPx(member.x),
      py: toPy(member.y),
      ...style,
      opacity: 0.25,
      visible: style.keys.every((k) => !hidden.has(k)),
      dominated: true,
      member,
    });
  }

  const staircases: Staircase[] = payloads.map((payload, seriesIndex) => {
    const coords = payload.members.map(
      (m) => [m.x, m.y] as [number, number],
    );
    const points = staircasePoints(coords);
    const familyKey =
      payload.family !== null ? legendKey("family", payload.family) : null;
    let color = colorFor(seriesIndex, spec.colorblind);
    const colorScale = scales.color;
    if (colorScale && colorScale.field === "family" && payload.family) {
      color = colorFor(
        colorScale.values.indexOf(payload.family),
        spec.colorblind,
      );
    }
    return {
      seriesKey: familyKey,
      color,
      points,
      pixels: points.map(
        ([x, y]) => [toPx(x), toPy(y)] as [number, number],
      ),
      visible: familyKey === null || !hidden.has(familyKey),
    };
  });

  const legend: LegendEntry[] = [];
  for (const channel of CHANNELS) {
    const scale = scales[channel];
    if (!scale) continue;
    scale.values.forEach((value, i) => {
      legend.push({
        channel,
        field: scale.field,
        value,
        key: legendKey(scale.field, value),
        color: channel === "color" ? colorFor(i, spec.colorblind) : null,
        symbol: channel === "symbol" ? symbolFor(i) : null,
        size: channel === "size" ? sizeFor(i, scale.values.length) : null,
        visible: !hidden.has(legendKey(scale.field, value)),
      });
    });
  }

  return {
    markers,
    staircases,
    legend,
    xDomain,
    yDomain,
    xTicks: ticks(xDomain[0], xDomain[1]),
    yTicks: ticks(yDomain[0], yDomain[1]),
    xLabel: payloads[0]?.pair.x ?? "accuracy",
    yLabel: payloads[0] ? `${payloads[0].pair.y} score` : "fairness score",
    dims,
  };
}
