// View state transitions: loading documents, wrapped panning and
// versor rotation. Everything is pure so every frame (and test) is a
// function of the state alone.

import {
  ContextMode,
  GraphDoc,
  LayoutDoc,
  Quat,
  SphereProjection,
  ViewState,
} from "./types.js";
import { reducePan } from "./torus.js";
import {
  between,
  conjugate,
  fromEulerZYZ,
  IDENTITY,
  multiply,
  normalize,
  rotate,
  toEulerZYZ,
  Vec3,
} from "./quaternion.js";
import {
  equalEarthScreen,
  equalEarthUnproject,
  orthographicScreen,
  orthographicUnproject,
} from "./projections.js";

export class SchemaMismatch extends Error {}

export function parseGraph(text: string): GraphDoc {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new SchemaMismatch(`graph file is not JSON: ${e}`);
  }
  const g = doc as GraphDoc;
  if (!Array.isArray(g.nodes) || !Array.isArray(g.links)) {
    throw new SchemaMismatch("graph file needs nodes[] and links[]");
  }
  const n = g.nodes.length;
  for (const l of g.links) {
    if (typeof l.source !== "number" || typeof l.target !== "number"
        || l.source < 0 || l.target < 0 || l.source >= n || l.target >= n) {
      throw new SchemaMismatch("link endpoints out of range");
    }
  }
  return g;
}

export function parseLayout(text: string): LayoutDoc {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (e) {
    throw new SchemaMismatch(`layout file is not JSON: ${e}`);
  }
  const lay = doc as LayoutDoc;
  if (!["flat", "torus", "sphere"].includes(lay.topology)) {
    throw new SchemaMismatch(`unknown topology ${String(lay.topology)}`);
  }
  if (!Array.isArray(lay.positions)) {
    throw new SchemaMismatch("layout needs positions[]");
  }
  const dim = lay.topology === "sphere" ? 3 : 2;
  for (const p of lay.positions) {
    if (!Array.isArray(p) || p.length !== dim || p.some((c) => typeof c !== "number")) {
      throw new SchemaMismatch(`positions must be ${dim}-vectors`);
    }
  }
  if (lay.topology === "torus" && !(typeof lay.cell_size === "number" && lay.cell_size > 0)) {
    throw new SchemaMismatch("torus layout needs a positive cell_size");
  }
  return lay;
}

export function initialView(
  graph: GraphDoc,
  layout: LayoutDoc,
  viewport: [number, number] = [650, 650],
): ViewState {
  if (layout.positions.length !== graph.nodes.length) {
    throw new SchemaMismatch("layout and graph disagree on node count");
  }
  let pan: [number, number] = [0, 0];
  let rotation: Quat = { ...IDENTITY };
  if (layout.topology === "torus" && layout.view?.pan) {
    pan = reducePan(layout.view.pan, layout.cell_size ?? 1);
  }
  if (layout.topology === "sphere" && layout.view?.rotate) {
    const [lam, phi, gam] = layout.view.rotate;
    rotation = fromEulerZYZ(lam, phi, gam);
  }
  return {
    graph,
    layout,
    pan,
    rotation,
    contextMode: "nocontext",
    projection: "equal-earth",
    viewport: layout.topology === "sphere" ? [900, 317] : viewport,
    drag: null,
    error: null,
  };
}

/** Load new documents; on schema mismatch keep the old state, set a banner. */
export function load(state: ViewState | null, layoutText: string,
                     graphText: string): ViewState {
  try {
    const graph = parseGraph(graphText);
    const layout = parseLayout(layoutText);
    return initialView(graph, layout);
  } catch (e) {
    if (state) return { ...state, error: String(e) };
    throw e;
  }
}

/** Wrapped panning: drag delta in pixels, mapped to cell units. */
export function panTorus(state: ViewState, dxPx: number, dyPx: number): ViewState {
  if (state.layout.topology !== "torus") return state;
  const cell = state.layout.cell_size ?? 1;
  const scale = Math.min(state.viewport[0], state.viewport[1]) / cell;
  const pan = reducePan(
    [state.pan[0] + dxPx / scale, state.pan[1] + dyPx / scale],
    cell,
  );
  return { ...state, pan };
}

export function setContextMode(state: ViewState, mode: ContextMode): ViewState {
  return { ...state, contextMode: mode };
}

export function setProjection(state: ViewState, projection: SphereProjection): ViewState {
  return { ...state, projection };
}

function unprojectAt(state: ViewState, px: number, py: number): Vec3 | null {
  const [w, h] = state.viewport;
  return state.projection === "equal-earth"
    ? equalEarthUnproject(px, py, equalEarthScreen(w, h))
    : orthographicUnproject(px, py, orthographicScreen(w, h));
}

/**
 * Versor drag: the surface point picked on pointer-down follows the
 * pointer. Starting (or moving) outside the projection outline is a
 * no-op.
 */
export function beginRotate(state: ViewState, px: number, py: number): ViewState {
  if (state.layout.topology !== "sphere") return state;
  const u = unprojectAt(state, px, py);
  if (!u) return state;
  // remember the geographic (unrotated) anchor under the pointer
  const anchor = rotate(conjugate(state.rotation), u);
  return { ...state, drag: { pointer: [px, py], anchor } };
}

export function rotateSphere(state: ViewState, px: number, py: number): ViewState {
  if (state.layout.topology !== "sphere" || !state.drag) return state;
  const u = unprojectAt(state, px, py);
  if (!u) return state;
  const current = rotate(state.rotation, state.drag.anchor);
  const delta = between(current, u);
  const rotation = normalize(multiply(delta, state.rotation));
  return { ...state, rotation, drag: { ...state.drag, pointer: [px, py] } };
}

export function endRotate(state: ViewState): ViewState {
  return { ...state, drag: null };
}

/** Current view as the CLI's layout-JSON "view" record. */
export function exportViewRecord(state: ViewState):
  { pan: [number, number] } | { rotate: [number, number, number] } | null {
  if (state.layout.topology === "torus") {
    return { pan: state.pan };
  }
  if (state.layout.topology === "sphere") {
    return { rotate: toEulerZYZ(state.rotation) };
  }
  return null;
}
