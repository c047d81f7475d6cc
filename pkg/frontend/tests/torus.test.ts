import { describe, expect, it } from "vitest";

import { minImageOffset, reducePan, torusSegments, wrapCoord } from "../src/torus.js";
import { initialView, panTorus } from "../src/state.js";
import { renderFrame } from "../src/render.js";
import { GraphDoc, LayoutDoc } from "../src/types.js";

const graph: GraphDoc = {
  nodes: [{ id: 0 }, { id: 1 }, { id: 2 }],
  links: [{ source: 0, target: 1 }, { source: 1, target: 2 }],
};

const layout: LayoutDoc = {
  topology: "torus",
  cell_size: 1,
  L: 0.5,
  positions: [[0.12, 0.5], [0.55, 0.31], [0.93, 0.74]],
  converged: true,
  iterations: 10,
  seed: 1,
};

describe("wrap arithmetic", () => {
  it("wraps into [0, cell)", () => {
    expect(wrapCoord(1.25, 1)).toBeCloseTo(0.25, 12);
    expect(wrapCoord(-0.25, 1)).toBeCloseTo(0.75, 12);
    expect(wrapCoord(1.0, 1)).toBe(0);
  });

  it("whole-cell pans reduce to exact zero", () => {
    expect(reducePan([1.0, 2.0], 1)).toEqual([0, 0]);
    expect(reducePan([0.3 + 1, 0], 1)[0]).toBeCloseTo(0.3, 12);
  });

  it("minimum image points across the seam", () => {
    expect(minImageOffset([0.05, 0.5], [0.95, 0.5], 1)).toEqual([-1, 0]);
    expect(minImageOffset([0.4, 0.4], [0.6, 0.6], 1)).toEqual([0, 0]);
  });

  it("decomposes wrapped edges into 2 or 3 segments", () => {
    expect(torusSegments([0.1, 0.5], [0.9, 0.5], [-1, 0], 1)).toHaveLength(2);
    expect(torusSegments([0.05, 0.1], [0.9, 0.85], [-1, -1], 1)).toHaveLength(3);
    expect(torusSegments([0.2, 0.2], [0.6, 0.6], [0, 0], 1)).toHaveLength(1);
  });
});

describe("wrapped panning", () => {
  it("zero drag is the identity", () => {
    const v0 = initialView(graph, layout);
    const v1 = panTorus(v0, 0, 0);
    expect(renderFrame(v1)).toEqual(renderFrame(v0));
  });

  it("panning one full viewport width yields an identical frame", () => {
    const v0 = initialView(graph, layout);
    const panned = panTorus(v0, v0.viewport[0], 0);
    expect(panned.pan).toEqual([0, 0]);
    expect(renderFrame(panned)).toEqual(renderFrame(v0));
  });

  it("panning both axes by the viewport is also a fixed point", () => {
    const v0 = initialView(graph, layout);
    const panned = panTorus(v0, v0.viewport[0], v0.viewport[1]);
    expect(renderFrame(panned)).toEqual(renderFrame(v0));
  });

  it("accumulated drags reaching one cell return near the start frame", () => {
    const v0 = initialView(graph, layout);
    let v = v0;
    const w = v0.viewport[0];
    for (let i = 0; i < 10; i++) v = panTorus(v, w / 10, 0);
    // stepwise accumulation may land an ulp short of a full cell; the
    // pan is equivalent to zero modulo the cell
    const cell = layout.cell_size!;
    expect(Math.min(v.pan[0], cell - v.pan[0])).toBeCloseTo(0, 9);
    const a = renderFrame(v);
    const b = renderFrame(v0);
    expect(a.length).toBe(b.length);
  });

  it("any drag keeps the same node ids and glyph count", () => {
    const v0 = initialView(graph, layout);
    const before = renderFrame(v0).filter((c) => c.kind === "circle");
    const v1 = panTorus(v0, 173.4, -42.1);
    const after = renderFrame(v1).filter((c) => c.kind === "circle");
    expect(after).toHaveLength(before.length);
    const ids = (cmds: typeof before) =>
      cmds.map((c) => (c.kind === "circle" ? c.node : -1)).sort();
    expect(ids(after)).toEqual(ids(before));
  });

  it("context modes change the glyph census as 1x / 4x / 9x", () => {
    const v0 = initialView(graph, layout);
    const count = (mode: "nocontext" | "partial" | "full") => {
      const v = { ...v0, contextMode: mode };
      return renderFrame(v).filter((c) => c.kind === "circle").length;
    };
    expect(count("nocontext")).toBe(3);
    expect(count("partial")).toBe(12);
    expect(count("full")).toBe(27);
  });
});
