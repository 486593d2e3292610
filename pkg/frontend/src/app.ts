/** Browser wiring: DOM events in, pure modules in the middle, SVG out.
 * Everything testable lives in the imported modules; this file only
 * shuttles state between them and the document. */
import { ApiError, NetworkError, ServiceClient } from "./api.js";
import {
  buildExplorationBody,
  defaultForm,
  violationsByField,
  type FormModel,
} from "./form.js";
import { toggleKey } from "./legend.js";
import { barPercent, pollProgress, progressLabel } from "./poll.js";
import { defaultSpec, type PlotSpec } from "./plotspec.js";
import { buildScene, type Scene } from "./scene.js";
import { renderSceneSvg } from "./svg.js";
import {
  fetchPlan,
  individualScenes,
  multiMetricScenes,
  superimposedScene,
  TABS,
  type Tab,
} from "./tabs.js";
import { frontierTable } from "./table.js";
import { tooltipHtml } from "./tooltip.js";
import type {
  Family,
  MemberJson,
  MetricId,
  ParetoSetJson,
  RecordJson,
} from "./types.js";
import { FAMILIES, HYPERPARAM_ORDER, METRIC_IDS } from "./types.js";

interface AppState {
  client: ServiceClient;
  datasetId: string | null;
  jobId: string | null;
  form: FormModel;
  spec: PlotSpec;
  hidden: Set<string>;
  tab: Tab;
  focusFamily: Family;
  exportScale: 1 | 2 | 4;
  payloadCache: Map<string, ParetoSetJson[] | ParetoSetJson>;
  records: RecordJson[];
  pollAbort: AbortController | null;
}

const $ = <T extends HTMLElement>(sel: string): T => {
  const el = document.querySelector(sel);
  if (!el) throw new Error(`missing element ${sel}`);
  return el as T;
};

function showBanner(state: AppState, message: string, retry: () => void) {
  const banner = $("#banner");
  banner.innerHTML = "";
  banner.textContent = `${message} `;
  const btn = document.createElement("button");
  btn.textContent = "retry";
  btn.addEventListener("click", () => {
    banner.hidden = true;
    retry();
  });
  banner.appendChild(btn);
  banner.hidden = false;
}

function clearInlineErrors() {
  document
    .querySelectorAll(".field-error")
    .forEach((el) => ((el as HTMLElement).textContent = ""));
}

function showInlineErrors(violations: string[]) {
  clearInlineErrors();
  const byField = violationsByField(violations);
  const general: string[] = [];
  for (const [field, messages] of byField) {
    const slot = document.querySelector(
      `.field-error[data-field="${field}"]`,
    ) as HTMLElement | null;
    if (slot) slot.textContent = messages.join("; ");
    else general.push(...messages.map((m) => (field ? `${field}: ${m}` : m)));
  }
  const slot = $("#general-errors");
  slot.textContent = general.join("; ");
}

async function fetchTabPayloads(state: AppState): Promise<void> {
  if (!state.jobId) return;
  const plan = fetchPlan(state.tab, state.spec.metric, state.form.metrics);
  for (const item of plan) {
    const key = `${item.metric}|${item.grouping}|${state.spec.mode}`;
    if (state.payloadCache.has(key)) continue;
    const payload = await state.client.getFrontier(state.jobId, {
      metric: item.metric,
      grouping: item.grouping,
      mode: state.spec.mode,
    });
    state.payloadCache.set(key, payload);
  }
}

function cached(
  state: AppState,
  metric: MetricId,
  grouping: "per_family" | "all_families",
): ParetoSetJson[] | ParetoSetJson | undefined {
  return state.payloadCache.get(`${metric}|${grouping}|${state.spec.mode}`);
}

function dominatedMembers(state: AppState, metric: MetricId): MemberJson[] {
  if (!state.spec.showDominated) return [];
  const out: MemberJson[] = [];
  for (const r of state.records) {
    const score = r.metrics[metric]?.score_mean;
    if (!r.usable || r.accuracy === null || score == null) continue;
    out.push({ ...r, x: r.accuracy.mean, y: score });
  }
  return out;
}

function renderLegend(state: AppState, scene: Scene) {
  const legend = $("#legend");
  legend.innerHTML = "";
  for (const entry of scene.legend) {
    const item = document.createElement("button");
    item.className = `legend-entry${entry.visible ? "" : " off"}`;
    item.dataset.key = entry.key;
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    if (entry.color) swatch.style.background = entry.color;
    if (entry.symbol) swatch.textContent = entry.symbol[0];
    if (entry.size) swatch.style.width = `${entry.size * 2}px`;
    item.appendChild(swatch);
    item.appendChild(document.createTextNode(` ${entry.key}`));
    item.addEventListener("click", () => {
      state.hidden = toggleKey(state.hidden, entry.key);
      renderExplorer(state);
    });
    legend.appendChild(item);
  }
}

function attachTooltips(state: AppState, scenes: Scene[]) {
  const tip = $("#tooltip");
  document.querySelectorAll("svg .marker").forEach((el) => {
    el.addEventListener("mousemove", (ev) => {
      const svgEl = (ev.target as Element).closest("[data-scene]");
      const sceneIdx = Number(svgEl?.getAttribute("data-scene") ?? 0);
      const idx = Number((ev.target as Element).getAttribute("data-marker"));
      const marker = scenes[sceneIdx]?.markers[idx];
      if (!marker) return;
      tip.innerHTML = tooltipHtml(marker.member);
      tip.hidden = false;
      const e = ev as MouseEvent;
      tip.style.left = `${e.pageX + 12}px`;
      tip.style.top = `${e.pageY + 12}px`;
    });
    el.addEventListener("mouseleave", () => ($("#tooltip").hidden = true));
  });
}

function renderTable(state: AppState) {
  const pooled = cached(state, state.spec.metric, "all_families");
  const host = $("#plots");
  if (!pooled || Array.isArray(pooled)) {
    host.textContent = "no table available";
    return;
  }
  const table = frontierTable([pooled], state.form.metrics);
  const el = document.createElement("table");
  el.innerHTML =
    "<thead><tr>" +
    table.columns.map((c) => `<th>${c}</th>`).join("") +
    "</tr></thead><tbody>" +
    table.rows
      .map(
        (row) =>
          "<tr>" +
          row
            .map((v) =>
              `<td>${v === null ? "" : typeof v === "number" ? v.toFixed(6) : v}</td>`,
            )
            .join("") +
          "</tr>",
      )
      .join("") +
    "</tbody>";
  host.innerHTML = "";
  host.appendChild(el);
  const link = document.createElement("a");
  link.textContent = "download CSV";
  link.href = state.client.exportCsvUrl(state.jobId ?? "", state.spec.metric);
  host.appendChild(link);
}

function renderExplorer(state: AppState) {
  const host = $("#plots");
  if (state.tab === "table") {
    renderTable(state);
    return;
  }
  const scenes: Scene[] = [];
  const titles: string[] = [];
  const dominated = dominatedMembers(state, state.spec.metric);
  if (state.tab === "individual") {
    const per = cached(state, state.spec.metric, "per_family");
    if (Array.isArray(per)) {
      for (const ts of individualScenes(
        per, state.focusFamily, state.spec, state.hidden, dominated,
      )) {
        scenes.push(ts.scene);
        titles.push(ts.title);
      }
    }
  } else if (state.tab === "superimposed") {
    const per = cached(state, state.spec.metric, "per_family");
    if (Array.isArray(per)) {
      const ts = superimposedScene(per, state.spec, state.hidden);
      scenes.push(ts.scene);
      titles.push(ts.title);
    }
  } else if (state.tab === "multi_model") {
    const pooled = cached(state, state.spec.metric, "all_families");
    if (pooled && !Array.isArray(pooled)) {
      scenes.push(
        buildScene([pooled], state.spec, state.hidden, undefined, dominated),
      );
      titles.push("all families pooled");
    }
  } else if (state.tab === "multi_metric") {
    const byMetric = new Map<MetricId, ParetoSetJson>();
    for (const m of state.form.metrics) {
      const pooled = cached(state, m, "all_families");
      if (pooled && !Array.isArray(pooled)) byMetric.set(m, pooled);
    }
    for (const ts of multiMetricScenes(byMetric, state.spec, state.hidden)) {
      scenes.push(ts.scene);
      titles.push(ts.title);
    }
  }
  host.innerHTML = scenes
    .map(
      (scene, i) =>
        `<figure><figcaption>${titles[i]}</figcaption>` +
        renderSceneSvg(scene).replace("<svg ", `<svg data-scene="${i}" `) +
        "</figure>",
    )
    .join("");
  if (scenes.length > 0) renderLegend(state, scenes[0]);
  attachTooltips(state, scenes);
  wirePanZoom();
}

function wirePanZoom() {
  document.querySelectorAll<SVGSVGElement>("#plots svg").forEach((svg) => {
    svg.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const vb = (svg.getAttribute("viewBox") ?? "0 0 640 420")
        .split(" ")
        .map(Number);
      const factor = ev.deltaY > 0 ? 1.1 : 0.9;
      const [x, y, w, h] = vb;
      const nw = w * factor;
      const nh = h * factor;
      svg.setAttribute(
        "viewBox",
        `${x + (w - nw) / 2} ${y + (h - nh) / 2} ${nw} ${nh}`,
      );
    });
    let drag: { x: number; y: number } | null = null;
    svg.addEventListener("mousedown", (ev) => {
      drag = { x: ev.clientX, y: ev.clientY };
    });
    svg.addEventListener("mouseup", () => (drag = null));
    svg.addEventListener("mousemove", (ev) => {
      if (!drag) return;
      const vb = (svg.getAttribute("viewBox") ?? "0 0 640 420")
        .split(" ")
        .map(Number);
      const scale = vb[2] / svg.clientWidth;
      vb[0] -= (ev.clientX - drag.x) * scale;
      vb[1] -= (ev.clientY - drag.y) * scale;
      drag = { x: ev.clientX, y: ev.clientY };
      svg.setAttribute("viewBox", vb.join(" "));
    });
  });
}

function downloadCurrentPlot(state: AppState) {
  const svg = document.querySelector("#plots svg");
  if (!svg) return;
  const scale = state.exportScale;
  const clone = svg.cloneNode(true) as SVGSVGElement;
  const base = (clone.getAttribute("viewBox") ?? "0 0 640 420").split(" ");
  clone.setAttribute("width", String(Number(base[2]) * scale));
  clone.setAttribute("height", String(Number(base[3]) * scale));
  const blob = new Blob([clone.outerHTML], { type: "image/svg+xml" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = `frontier_${state.spec.metric}_${scale}x.svg`;
  a.click();
  URL.revokeObjectURL(a.href);
}

function readForm(state: AppState): void {
  state.form.families = [...document.querySelectorAll("input[name=family]:checked")]
    .map((el) => (el as HTMLInputElement).value as Family);
  state.form.metrics = [...document.querySelectorAll("input[name=metric]:checked")]
    .map((el) => (el as HTMLInputElement).value as MetricId);
  state.form.nSplits = Number($<HTMLInputElement>("#n-splits").value);
  state.form.seed = Number($<HTMLInputElement>("#seed").value);
  state.form.mode = $<HTMLSelectElement>("#mode").value as "weak" | "strict";
  state.form.workers = Number($<HTMLInputElement>("#workers").value);
  state.form.spaces = {};
  for (const family of FAMILIES) {
    const texts: Record<string, string> = {};
    for (const name of HYPERPARAM_ORDER[family]) {
      const input = document.querySelector(
        `input[data-space="${family}.${name}"]`,
      ) as HTMLInputElement | null;
      if (input && input.value.trim() !== "") texts[name] = input.value;
    }
    if (Object.keys(texts).length > 0) state.form.spaces[family] = texts;
  }
}

async function uploadDataset(state: AppState): Promise<void> {
  const fileInput = $<HTMLInputElement>("#dataset-file");
  const file = fileInput.files?.[0];
  if (!file) {
    $("#upload-status").textContent = "choose a CSV file first";
    return;
  }
  const config = {
    task: {
      target: $<HTMLInputElement>("#target").value,
      positive_values: $<HTMLInputElement>("#positive").value.split(",").map((s) => s.trim()),
      sensitive: $<HTMLInputElement>("#sensitive").value,
      group0_values: $<HTMLInputElement>("#group0").value.split(",").map((s) => s.trim()),
    },
  };
  try {
    const summary = await state.client.uploadDataset(file, file.name, config);
    state.datasetId = summary.id;
    state.form.datasetId = summary.id;
    $("#upload-status").textContent =
      `dataset ${summary.id}: ${summary.n_rows} rows, ` +
      `${summary.feature_columns.length} features`;
  } catch (e) {
    if (e instanceof NetworkError) {
      showBanner(state, e.message, () => uploadDataset(state));
    } else if (e instanceof ApiError) {
      $("#upload-status").textContent = e.message;
    } else throw e;
  }
}

async function startRun(state: AppState): Promise<void> {
  readForm(state);
  clearInlineErrors();
  if (!state.datasetId) {
    $("#general-errors").textContent = "upload a dataset first";
    return;
  }
  let created: { id: string };
  try {
    created = await state.client.createExploration(
      buildExplorationBody(state.form),
    );
  } catch (e) {
    if (e instanceof ApiError && e.violations.length > 0) {
      showInlineErrors(e.violations);
    } else if (e instanceof ApiError) {
      $("#general-errors").textContent = e.message;
    } else if (e instanceof NetworkError) {
      showBanner(state, e.message, () => startRun(state));
    } else throw e;
    return;
  }
  state.jobId = created.id;
  state.payloadCache.clear();
  state.hidden = new Set();
  state.pollAbort?.abort();
  state.pollAbort = new AbortController();
  const bar = $("#progress-bar");
  const label = $("#progress-label");
  try {
    const final = await pollProgress(state.client, created.id, {
      signal: state.pollAbort.signal,
      onUpdate: (doc) => {
        bar.style.width = `${barPercent(doc)}%`;
        label.textContent = progressLabel(doc);
      },
    });
    if (final.state === "failed") {
      $("#general-errors").textContent = final.error ?? "run failed";
      return;
    }
  } catch (e) {
    if (e instanceof NetworkError) {
      showBanner(state, e.message, () => startRun(state));
      return;
    }
    if ((e as DOMException).name === "AbortError") return;
    throw e;
  }
  state.records = (await state.client.getRecords(created.id)).records;
  await refreshExplorer(state);
}

async function refreshExplorer(state: AppState): Promise<void> {
  try {
    await fetchTabPayloads(state);
  } catch (e) {
    if (e instanceof NetworkError) {
      showBanner(state, e.message, () => refreshExplorer(state));
      return;
    }
    throw e;
  }
  renderExplorer(state);
  const report = $<HTMLAnchorElement>("#report-link");
  if (state.jobId) report.href = state.client.reportUrl(state.jobId);
}

function wireControls(state: AppState) {
  $("#upload-btn").addEventListener("click", () => void uploadDataset(state));
  $("#start-btn").addEventListener("click", () => void startRun(state));
  const tabBar = $("#tabs");
  for (const tab of TABS) {
    const btn = document.createElement("button");
    btn.textContent = tab.replace("_", " ");
    btn.dataset.tab = tab;
    btn.addEventListener("click", () => {
      state.tab = tab;
      tabBar
        .querySelectorAll("button")
        .forEach((b) => b.classList.toggle("active", b === btn));
      void refreshExplorer(state);
    });
    tabBar.appendChild(btn);
  }
  $<HTMLSelectElement>("#plot-metric").addEventListener("change", (ev) => {
    state.spec.metric = (ev.target as HTMLSelectElement).value as MetricId;
    void refreshExplorer(state);
  });
  $<HTMLSelectElement>("#focus-family").addEventListener("change", (ev) => {
    state.focusFamily = (ev.target as HTMLSelectElement).value as Family;
    renderExplorer(state);
  });
  for (const channel of ["color", "symbol", "size"] as const) {
    $<HTMLSelectElement>(`#channel-${channel}`).addEventListener(
      "change",
      (ev) => {
        const v = (ev.target as HTMLSelectElement).value;
        if (v === "") delete state.spec.channels[channel];
        else state.spec.channels[channel] = v;
        renderExplorer(state); // remap re-renders from cache, no refetch
      },
    );
  }
  $<HTMLInputElement>("#colorblind").addEventListener("change", (ev) => {
    state.spec.colorblind = (ev.target as HTMLInputElement).checked;
    renderExplorer(state);
  });
  $<HTMLInputElement>("#show-dominated").addEventListener("change", (ev) => {
    state.spec.showDominated = (ev.target as HTMLInputElement).checked;
    renderExplorer(state);
  });
  $<HTMLSelectElement>("#export-scale").addEventListener("change", (ev) => {
    state.exportScale = Number(
      (ev.target as HTMLSelectElement).value,
    ) as 1 | 2 | 4;
  });
  $("#download-btn").addEventListener("click", () =>
    downloadCurrentPlot(state),
  );
  $("#fullscreen-btn").addEventListener("click", () => {
    void $("#plots").requestFullscreen?.();
  });
}

export function mountApp(baseUrl = ""): void {
  const state: AppState = {
    client: new ServiceClient(baseUrl),
    datasetId: null,
    jobId: null,
    form: defaultForm(),
    spec: defaultSpec(),
    hidden: new Set(),
    tab: "multi_model",
    focusFamily: "logistic_regression",
    exportScale: 1,
    payloadCache: new Map(),
    records: [],
    pollAbort: null,
  };
  const metricSelect = $<HTMLSelectElement>("#plot-metric");
  for (const m of METRIC_IDS) {
    const opt = document.createElement("option");
    opt.value = m;
    opt.textContent = m;
    metricSelect.appendChild(opt);
  }
  const familySelect = $<HTMLSelectElement>("#focus-family");
  for (const f of FAMILIES) {
    const opt = document.createElement("option");
    opt.value = f;
    opt.textContent = f;
    familySelect.appendChild(opt);
  }
  wireControls(state);
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  mountApp();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => mountApp());
}
