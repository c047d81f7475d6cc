// Pure frame builder: ViewState -> draw commands. The canvas painter
// just replays the list, so identical lists mean identical pixels.

import { DrawCommand, ViewState } from "./types.js";
import { minImageOffset, pannedPosition, torusSegments, Vec2 } from "./torus.js";
import { rotate, Vec3 } from "./quaternion.js";
import {
  equalEarthOutline,
  equalEarthScreen,
  equalEarthToPixel,
  greatCircle,
  orthographicFace,
  orthographicScreen,
  orthographicToPixel,
  vectorToLonLat,
} from "./projections.js";

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

const EDGE_COLOR = "#333333";
const NODE_RADIUS = 4;

function nodeFill(state: ViewState, i: number): string {
  const cluster = state.graph.nodes[i]?.cluster;
  return cluster === undefined ? PALETTE[0] : PALETTE[cluster % PALETTE.length];
}

function clipSegment(
  p: Vec2, q: Vec2, lo: number, hi: number,
): [Vec2, Vec2] | null {
  const dx = q[0] - p[0];
  const dy = q[1] - p[1];
  let t0 = 0;
  let t1 = 1;
  const edges: [number, number][] = [
    [lo - p[0], dx], [p[0] - hi, -dx],
    [lo - p[1], dy], [p[1] - hi, -dy],
  ];
  for (const [num, den] of edges) {
    if (den === 0) {
      if (num > 0) return null;
      continue;
    }
    const t = num / den;
    if (den > 0) {
      if (t > t1) return null;
      if (t > t0) t0 = t;
    } else {
      if (t < t0) return null;
      if (t < t1) t1 = t;
    }
  }
  return [
    [p[0] + t0 * dx, p[1] + t0 * dy],
    [p[0] + t1 * dx, p[1] + t1 * dy],
  ];
}

function renderFlat(state: ViewState): DrawCommand[] {
  const [w, h] = state.viewport;
  const pos = state.layout.positions as [number, number][];
  let xmin = Infinity, ymin = Infinity, xmax = -Infinity, ymax = -Infinity;
  for (const [x, y] of pos) {
    xmin = Math.min(xmin, x); xmax = Math.max(xmax, x);
    ymin = Math.min(ymin, y); ymax = Math.max(ymax, y);
  }
  const span = Math.max(xmax - xmin, ymax - ymin, 1e-9);
  const margin = 0.08 * Math.min(w, h);
  const scale = (Math.min(w, h) - 2 * margin) / span;
  const ox = (w - scale * (xmax - xmin)) / 2 - scale * xmin;
  const oy = (h - scale * (ymax - ymin)) / 2 - scale * ymin;
  const px = (p: number[]): Vec2 => [ox + scale * p[0], oy + scale * p[1]];

  const cmds: DrawCommand[] = [];
  for (const { source, target } of state.graph.links) {
    const [x1, y1] = px(pos[source]);
    const [x2, y2] = px(pos[target]);
    cmds.push({ kind: "line", x1, y1, x2, y2, color: EDGE_COLOR, width: 1 });
  }
  pos.forEach((p, i) => {
    const [x, y] = px(p);
    cmds.push({ kind: "circle", x, y, r: NODE_RADIUS, fill: nodeFill(state, i), node: i });
  });
  return cmds;
}

function renderTorus(state: ViewState): DrawCommand[] {
  const [w, h] = state.viewport;
  const cell = state.layout.cell_size ?? 1;
  const pos = (state.layout.positions as [number, number][])
    .map((p) => pannedPosition(p, state.pan, cell));

  let origin = 0;
  let tiles = 1;
  if (state.contextMode === "full") { origin = -cell; tiles = 3; }
  if (state.contextMode === "partial") { origin = -cell / 2; tiles = 2; }
  const scale = Math.min(w, h) / (tiles * cell);
  const ox = (w - scale * tiles * cell) / 2 - scale * origin;
  const oy = (h - scale * tiles * cell) / 2 - scale * origin;
  const px = (p: Vec2): Vec2 => [ox + scale * p[0], oy + scale * p[1]];
  const cmds: DrawCommand[] = [];

  if (state.contextMode === "nocontext") {
    for (const { source, target } of state.graph.links) {
      const off = minImageOffset(pos[source], pos[target], cell);
      const pieces = torusSegments(pos[source], pos[target], off, cell);
      for (const [p, q] of pieces) {
        const [x1, y1] = px(p);
        const [x2, y2] = px(q);
        cmds.push({ kind: "line", x1, y1, x2, y2, color: EDGE_COLOR, width: 1 });
      }
      if ((off[0] !== 0 || off[1] !== 0) && pieces.length >= 2) {
        const exit = px(pieces[0][1]);
        const entry = px(pieces[pieces.length - 1][0]);
        const name = (i: number) => state.graph.nodes[i]?.label ?? String(i);
        cmds.push({ kind: "text", x: exit[0], y: exit[1], text: name(target), color: "#555555" });
        cmds.push({ kind: "text", x: entry[0], y: entry[1], text: name(source), color: "#555555" });
      }
    }
    pos.forEach((p, i) => {
      const [x, y] = px(p);
      cmds.push({ kind: "circle", x, y, r: NODE_RADIUS, fill: nodeFill(state, i), node: i });
    });
    const [rx, ry] = px([0, 0]);
    cmds.push({ kind: "rect", x: rx, y: ry, w: scale * cell, h: scale * cell, color: "#aaaaaa" });
    return cmds;
  }

  const lo = origin;
  const hi = origin + tiles * cell;
  for (const { source, target } of state.graph.links) {
    const off = minImageOffset(pos[source], pos[target], cell);
    const vx = pos[target][0] + off[0] * cell - pos[source][0];
    const vy = pos[target][1] + off[1] * cell - pos[source][1];
    for (let j = -1; j <= 1; j++) {
      for (let i = -1; i <= 1; i++) {
        const p: Vec2 = [pos[source][0] + i * cell, pos[source][1] + j * cell];
        const q: Vec2 = [p[0] + vx, p[1] + vy];
        const clipped = clipSegment(p, q, lo, hi);
        if (!clipped) continue;
        const [a, b] = clipped;
        const [x1, y1] = px(a);
        const [x2, y2] = px(b);
        cmds.push({ kind: "line", x1, y1, x2, y2, color: EDGE_COLOR, width: 1 });
      }
    }
  }
  pos.forEach((p, i) => {
    for (let j = -1; j <= 1; j++) {
      for (let k = -1; k <= 1; k++) {
        const x = p[0] + k * cell;
        const y = p[1] + j * cell;
        if (x >= lo && x < hi && y >= lo && y < hi) {
          const [cx, cy] = px([x, y]);
          cmds.push({ kind: "circle", x: cx, y: cy, r: NODE_RADIUS, fill: nodeFill(state, i), node: i });
        }
      }
    }
  });
  const [rx, ry] = px([0, 0]);
  cmds.push({ kind: "rect", x: rx, y: ry, w: scale * cell, h: scale * cell, color: "#d62728" });
  return cmds;
}

function renderSphere(state: ViewState): DrawCommand[] {
  const [w, h] = state.viewport;
  const rotated = (state.layout.positions as Vec3[]).map((p) => rotate(state.rotation, p));
  const cmds: DrawCommand[] = [];
  if (state.projection === "equal-earth") {
    const screen = equalEarthScreen(w, h);
    cmds.push({ kind: "path", points: equalEarthOutline(screen), color: "#aaaaaa", width: 1 });
    for (const { source, target } of state.graph.links) {
      const samples = greatCircle(rotated[source], rotated[target]);
      let current: [number, number][] = [];
      let prevLon: number | null = null;
      for (const v of samples) {
        const [lon] = vectorToLonLat(v);
        const p = equalEarthToPixel(v, screen);
        if (prevLon !== null && Math.abs(lon - prevLon) > Math.PI) {
          if (current.length > 1) {
            cmds.push({ kind: "path", points: current, color: EDGE_COLOR, width: 1 });
          }
          current = [];
        }
        current.push(p);
        prevLon = lon;
      }
      if (current.length > 1) {
        cmds.push({ kind: "path", points: current, color: EDGE_COLOR, width: 1 });
      }
    }
    rotated.forEach((v, i) => {
      const [x, y] = equalEarthToPixel(v, screen);
      cmds.push({ kind: "circle", x, y, r: NODE_RADIUS, fill: nodeFill(state, i), node: i });
    });
  } else {
    const screen = orthographicScreen(w, h);
    for (const face of ["west", "east"] as const) {
      const c = screen[face];
      const ring: [number, number][] = [];
      for (let k = 0; k <= 72; k++) {
        const a = (2 * Math.PI * k) / 72;
        ring.push([c[0] + screen.r * Math.cos(a), c[1] + screen.r * Math.sin(a)]);
      }
      cmds.push({ kind: "path", points: ring, color: "#aaaaaa", width: 1 });
    }
    for (const { source, target } of state.graph.links) {
      const samples = greatCircle(rotated[source], rotated[target]);
      let current: [number, number][] = [];
      let prevFace: string | null = null;
      for (const v of samples) {
        const face = orthographicFace(v);
        if (prevFace !== null && face !== prevFace) {
          if (current.length > 1) {
            cmds.push({ kind: "path", points: current, color: EDGE_COLOR, width: 1 });
          }
          current = [];
        }
        current.push(orthographicToPixel(v, screen));
        prevFace = face;
      }
      if (current.length > 1) {
        cmds.push({ kind: "path", points: current, color: EDGE_COLOR, width: 1 });
      }
    }
    rotated.forEach((v, i) => {
      const [x, y] = orthographicToPixel(v, screen);
      cmds.push({ kind: "circle", x, y, r: NODE_RADIUS, fill: nodeFill(state, i), node: i });
    });
  }
  return cmds;
}

/** Every frame is a pure function of the view state. */
export function renderFrame(state: ViewState): DrawCommand[] {
  switch (state.layout.topology) {
    case "flat":
      return renderFlat(state);
    case "torus":
      return renderTorus(state);
    case "sphere":
      return renderSphere(state);
  }
}
