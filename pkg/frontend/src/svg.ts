/** Render a scene to an SVG string. Pure: identical scenes give
 * byte-identical markup, which keeps the view snapshot-testable. */
import type { Marker, Scene } from "./scene.js";

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

function markerShape(m: Marker, index: number): string {
  const common =
    `fill="${m.color}" fill-opacity="${m.opacity.toFixed(2)}" ` +
    `data-marker="${index}" class="marker${m.dominated ? " dominated" : ""}"`;
  const { px, py, size: r } = m;
  switch (m.symbol) {
    case "circle":
      return `<circle cx="${fmt(px)}" cy="${fmt(py)}" r="${fmt(r)}" ${common}/>`;
    case "square":
      return (
        `<rect x="${fmt(px - r)}" y="${fmt(py - r)}" ` +
        `width="${fmt(2 * r)}" height="${fmt(2 * r)}" ${common}/>`
      );
    case "triangle":
      return (
        `<polygon points="${fmt(px)},${fmt(py - r)} ${fmt(px - r)},` +
        `${fmt(py + r)} ${fmt(px + r)},${fmt(py + r)}" ${common}/>`
      );
    case "diamond":
      return (
        `<polygon points="${fmt(px)},${fmt(py - r)} ${fmt(px + r)},${fmt(py)} ` +
        `${fmt(px)},${fmt(py + r)} ${fmt(px - r)},${fmt(py)}" ${common}/>`
      );
    case "cross":
      return (
        `<path d="M${fmt(px - r)} ${fmt(py)}H${fmt(px + r)}M${fmt(px)} ` +
        `${fmt(py - r)}V${fmt(py + r)}" stroke="${m.color}" ` +
        `stroke-width="2" fill="none" data-marker="${index}" class="marker"/>`
      );
    case "star":
      return (
        `<path d="M${fmt(px - r)} ${fmt(py - r)}L${fmt(px + r)} ${fmt(py + r)}` +
        `M${fmt(px - r)} ${fmt(py + r)}L${fmt(px + r)} ${fmt(py - r)}` +
        `M${fmt(px - r)} ${fmt(py)}H${fmt(px + r)}" stroke="${m.color}" ` +
        `stroke-width="1.5" fill="none" data-marker="${index}" class="marker"/>`
      );
  }
}

/** Scale multiplies the on-screen size; the coordinate system is fixed
 * by the viewBox so geometry is identical at 1x, 2x and 4x export. */
export function renderSceneSvg(scene: Scene, scale: 1 | 2 | 4 = 1): string {
  const { width, height, margin } = scene.dims;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width * scale}" ` +
      `height="${height * scale}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="sans-serif" font-size="11">`,
  );
  if (scene.markers.length === 0) {
    parts.push(
      `<text x="${width / 2}" y="${height / 2}" text-anchor="middle" ` +
        `class="empty-state">empty frontier: no records to plot</text>`,
    );
    parts.push("</svg>");
    return parts.join("");
  }

  const innerBottom = height - margin.bottom;
  parts.push(
    `<line x1="${margin.left}" y1="${innerBottom}" ` +
      `x2="${width - margin.right}" y2="${innerBottom}" stroke="#444"/>`,
  );
  parts.push(
    `<line x1="${margin.left}" y1="${margin.top}" ` +
      `x2="${margin.left}" y2="${innerBottom}" stroke="#444"/>`,
  );
  const innerW = width - margin.left - margin.right;
  const innerH = height - margin.top - margin.bottom;
  scene.xTicks.forEach((t) => {
    const px =
      margin.left +
      ((t - scene.xDomain[0]) / (scene.xDomain[1] - scene.xDomain[0])) * innerW;
    parts.push(
      `<text x="${fmt(px)}" y="${innerBottom + 16}" text-anchor="middle" ` +
        `class="tick">${t.toFixed(3)}</text>`,
    );
  });
  scene.yTicks.forEach((t) => {
    const py =
      margin.top +
      innerH -
      ((t - scene.yDomain[0]) / (scene.yDomain[1] - scene.yDomain[0])) * innerH;
    parts.push(
      `<text x="${margin.left - 6}" y="${fmt(py + 3)}" text-anchor="end" ` +
        `class="tick">${t.toFixed(3)}</text>`,
    );
  });
  parts.push(
    `<text x="${margin.left + innerW / 2}" y="${height - 6}" ` +
      `text-anchor="middle" class="axis-label">${esc(scene.xLabel)}</text>`,
  );
  parts.push(
    `<text x="12" y="${margin.top + innerH / 2}" text-anchor="middle" ` +
      `transform="rotate(-90 12 ${margin.top + innerH / 2})" ` +
      `class="axis-label">${esc(scene.yLabel)}</text>`,
  );

  for (const s of scene.staircases) {
    if (!s.visible || s.pixels.length < 2) continue;
    const pts = s.pixels.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" ` +
        `stroke-width="1.5" class="staircase"/>`,
    );
  }
  scene.markers.forEach((m, i) => {
    if (!m.visible) return;
    parts.push(markerShape(m, i));
  });
  parts.push("</svg>");
  return parts.join("");
}
