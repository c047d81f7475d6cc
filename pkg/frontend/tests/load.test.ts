import { describe, expect, it } from "vitest";

import { initialView, load, parseGraph, parseLayout, SchemaMismatch } from "../src/state.js";
import { fromEulerZYZ } from "../src/quaternion.js";
import { GraphDoc, LayoutDoc } from "../src/types.js";

const graphText = JSON.stringify({
  nodes: [{ id: 0 }, { id: 1 }],
  links: [{ source: 0, target: 1 }],
});

const torusText = JSON.stringify({
  topology: "torus",
  cell_size: 1,
  L: 0.5,
  positions: [[0.2, 0.3], [0.7, 0.8]],
  converged: true,
  iterations: 3,
  seed: 1,
  view: { pan: [0.25, 1.5] },
});

describe("document loading", () => {
  it("applies an embedded pan record, reduced mod cell", () => {
    const v = load(null, torusText, graphText);
    expect(v.pan[0]).toBeCloseTo(0.25, 12);
    expect(v.pan[1]).toBeCloseTo(0.5, 12);
    expect(v.error).toBeNull();
  });

  it("applies an embedded rotation record", () => {
    const sphere = JSON.stringify({
      topology: "sphere",
      cell_size: null,
      L: Math.PI,
      positions: [[1, 0, 0], [0, 0, 1]],
      converged: true,
      iterations: 3,
      seed: 1,
      view: { rotate: [0.3, 0.2, 0.1] },
    });
    const v = load(null, sphere, graphText);
    const q = fromEulerZYZ(0.3, 0.2, 0.1);
    expect(v.rotation.w).toBeCloseTo(q.w, 12);
    expect(v.rotation.z).toBeCloseTo(q.z, 12);
  });

  it("keeps the previous document on a malformed file", () => {
    const good = load(null, torusText, graphText);
    const bad = load(good, "{not json", graphText);
    expect(bad.error).toMatch(/JSON/);
    expect(bad.layout).toBe(good.layout);
    expect(bad.graph).toBe(good.graph);
  });

  it("rejects schema mismatches", () => {
    expect(() => parseLayout('{"topology":"cube","positions":[]}')).toThrow(SchemaMismatch);
    expect(() => parseLayout(JSON.stringify({
      topology: "torus", cell_size: 1, positions: [[0.1]],
    }))).toThrow(SchemaMismatch);
    expect(() => parseGraph('{"nodes":[]}')).toThrow(SchemaMismatch);
    expect(() => parseGraph(JSON.stringify({
      nodes: [{ id: 0 }], links: [{ source: 0, target: 5 }],
    }))).toThrow(SchemaMismatch);
  });

  it("rejects node-count disagreement between layout and graph", () => {
    const g: GraphDoc = { nodes: [{ id: 0 }], links: [] };
    const l: LayoutDoc = {
      topology: "torus", cell_size: 1, L: 0.5,
      positions: [[0.1, 0.1], [0.2, 0.2]],
      converged: true, iterations: 0, seed: 0,
    };
    expect(() => initialView(g, l)).toThrow(SchemaMismatch);
  });
});
