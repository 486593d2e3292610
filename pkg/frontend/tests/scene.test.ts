import { describe, expect, it } from "vitest";

import { toggleKey } from "../src/legend.js";
import { defaultSpec } from "../src/plotspec.js";
import { buildScene, staircasePoints } from "../src/scene.js";
import { fourFamilyFrontiers, member, paretoSet, threePointFrontier } from "./fixtures.js";

describe("staircasePoints", () => {
  it("steps right then down between frontier points", () => {
    const pts = staircasePoints([
      [0.85, 0.9],
      [0.9, 0.7],
      [0.95, 0.65],
    ]);
    expect(pts).toEqual([
      [0.85, 0.9],
      [0.9, 0.9],
      [0.9, 0.7],
      [0.95, 0.7],
      [0.95, 0.65],
    ]);
  });

  it("handles unsorted input and single points", () => {
    expect(staircasePoints([[0.9, 0.7], [0.85, 0.9]])).toEqual([
      [0.85, 0.9],
      [0.9, 0.9],
      [0.9, 0.7],
    ]);
    expect(staircasePoints([[0.5, 0.5]])).toEqual([[0.5, 0.5]]);
    expect(staircasePoints([])).toEqual([]);
  });

  it("keeps vertical runs for equal-accuracy strict frontiers", () => {
    expect(staircasePoints([[0.9, 0.8], [0.9, 0.6]])).toEqual([
      [0.9, 0.8],
      [0.9, 0.6],
    ]);
  });
});

describe("buildScene", () => {
  it("renders the 3-point fixture as 3 markers plus its staircase", () => {
    const scene = buildScene([threePointFrontier()], defaultSpec());
    expect(scene.markers).toHaveLength(3);
    expect(scene.markers.every((m) => m.visible)).toBe(true);
    expect(scene.staircases).toHaveLength(1);
    expect(scene.staircases[0].points).toEqual([
      [0.85, 0.9],
      [0.9, 0.9],
      [0.9, 0.7],
      [0.95, 0.7],
      [0.95, 0.65],
    ]);
  });

  it("marker count equals record count when every legend entry is on", () => {
    const payloads = fourFamilyFrontiers();
    const total = payloads.reduce((n, p) => n + p.members.length, 0);
    const scene = buildScene(payloads, defaultSpec());
    expect(scene.markers.filter((m) => m.visible)).toHaveLength(total);
  });

  it("hides exactly the toggled series and keeps the axes fixed", () => {
    const spec = {
      ...defaultSpec(),
      channels: { color: "class_weight" },
    };
    const members = [
      member(0.8, 0.9, "decision_tree", {
        criterion: "gini", max_features: "none", min_samples_split: 2,
        min_samples_leaf: 1, class_weight: "balanced",
      }),
      member(0.85, 0.8, "decision_tree", {
        criterion: "gini", max_features: "none", min_samples_split: 2,
        min_samples_leaf: 1, class_weight: "none",
      }),
      member(0.9, 0.7, "decision_tree", {
        criterion: "entropy", max_features: "none", min_samples_split: 2,
        min_samples_leaf: 1, class_weight: "balanced",
      }),
    ];
    const payloads = [paretoSet(members, "decision_tree")];
    const before = buildScene(payloads, spec);
    const hidden = toggleKey(new Set(), "class_weight=balanced");
    const after = buildScene(payloads, spec, hidden);

    const visible = after.markers.filter((m) => m.visible);
    expect(visible).toHaveLength(1);
    expect(visible[0].member.assignment.class_weight).toBe("none");
    const hiddenMarkers = after.markers.filter((m) => !m.visible);
    expect(hiddenMarkers).toHaveLength(2);
    expect(
      hiddenMarkers.every(
        (m) => m.member.assignment.class_weight === "balanced",
      ),
    ).toBe(true);
    expect(after.xDomain).toEqual(before.xDomain);
    expect(after.yDomain).toEqual(before.yDomain);
  });

  it("legend entries cover each channel value once, in payload order", () => {
    const scene = buildScene(fourFamilyFrontiers(), defaultSpec());
    expect(scene.legend.map((e) => e.key)).toEqual([
      "family=decision_tree",
      "family=random_forest",
      "family=logistic_regression",
      "family=svc",
    ]);
  });

  it("is a pure function of its inputs", () => {
    const a = buildScene([threePointFrontier()], defaultSpec());
    const b = buildScene([threePointFrontier()], defaultSpec());
    expect(b).toEqual(a);
  });

  it("degenerate single-point frontiers still get finite domains", () => {
    const scene = buildScene(
      [paretoSet([member(0.9, 0.8)])],
      defaultSpec(),
    );
    expect(scene.markers).toHaveLength(1);
    expect(Number.isFinite(scene.markers[0].px)).toBe(true);
    expect(Number.isFinite(scene.markers[0].py)).toBe(true);
    expect(scene.xDomain[0]).toBeLessThan(scene.xDomain[1]);
  });

  it("dominated records join the cloud faded, never the staircase", () => {
    const spec = { ...defaultSpec(), showDominated: true };
    const cloud = [member(0.7, 0.6), member(0.75, 0.55)];
    const scene = buildScene([threePointFrontier()], spec, new Set(), undefined, cloud);
    const dominated = scene.markers.filter((m) => m.dominated);
    expect(dominated).toHaveLength(2);
    expect(dominated.every((m) => m.opacity === 0.25)).toBe(true);
    expect(scene.staircases[0].points).toHaveLength(5);
  });

  it("size channel ramps marker radius with tied transparency", () => {
    const spec = { ...defaultSpec(), channels: { size: "min_samples_leaf" } };
    const members = [1, 8, 16].map((leaf, i) =>
      member(0.8 + i * 0.05, 0.9 - i * 0.1, "decision_tree", {
        criterion: "gini", max_features: "none", min_samples_split: 2,
        min_samples_leaf: leaf, class_weight: "none",
      }),
    );
    const scene = buildScene([paretoSet(members, "decision_tree")], spec);
    const sizes = scene.markers.map((m) => m.size);
    const opacities = scene.markers.map((m) => m.opacity);
    expect(sizes[0]).toBeLessThan(sizes[1]);
    expect(sizes[1]).toBeLessThan(sizes[2]);
    expect(opacities[0]).toBeLessThan(opacities[2]);
  });
});
