// Browser wiring: file pickers, pointer-driven wrapped panning and
// versor rotation, context-mode buttons, view-record export.

import { paint } from "./canvas.js";
import { renderFrame } from "./render.js";
import {
  beginRotate,
  endRotate,
  exportViewRecord,
  load,
  panTorus,
  rotateSphere,
  setContextMode,
  setProjection,
} from "./state.js";
import { ContextMode, SphereProjection, ViewState } from "./types.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const banner = document.getElementById("banner")!;
const layoutInput = document.getElementById("layout-file") as HTMLInputElement;
const graphInput = document.getElementById("graph-file") as HTMLInputElement;
const exportButton = document.getElementById("export")!;

let state: ViewState | null = null;
let pending: { layout?: string; graph?: string } = {};

function redraw(): void {
  if (!state) return;
  const [w, h] = state.viewport;
  canvas.width = w;
  canvas.height = h;
  paint(ctx, renderFrame(state), w, h);
  banner.textContent = state.error ?? "";
  banner.style.display = state.error ? "block" : "none";
}

function update(next: ViewState | null): void {
  if (next && next !== state) {
    state = next;
    requestAnimationFrame(redraw);
  }
}

function tryLoad(): void {
  if (pending.layout === undefined || pending.graph === undefined) return;
  try {
    update(load(state, pending.layout, pending.graph));
  } catch (e) {
    banner.textContent = String(e);
    banner.style.display = "block";
  }
}

function watchFile(input: HTMLInputElement, key: "layout" | "graph"): void {
  input.addEventListener("change", async () => {
    const file = input.files?.[0];
    if (!file) return;
    pending[key] = await file.text();
    tryLoad();
  });
}

watchFile(layoutInput, "layout");
watchFile(graphInput, "graph");

let dragging = false;
let last: [number, number] | null = null;

canvas.addEventListener("pointerdown", (ev) => {
  if (!state) return;
  dragging = true;
  last = [ev.offsetX, ev.offsetY];
  if (state.layout.topology === "sphere") {
    update(beginRotate(state, ev.offsetX, ev.offsetY));
  }
  canvas.setPointerCapture(ev.pointerId);
});

canvas.addEventListener("pointermove", (ev) => {
  if (!state || !dragging || !last) return;
  if (state.layout.topology === "torus") {
    update(panTorus(state, ev.offsetX - last[0], ev.offsetY - last[1]));
    last = [ev.offsetX, ev.offsetY];
  } else if (state.layout.topology === "sphere") {
    update(rotateSphere(state, ev.offsetX, ev.offsetY));
  }
});

canvas.addEventListener("pointerup", () => {
  dragging = false;
  last = null;
  if (state) update(endRotate(state));
});

for (const mode of ["nocontext", "partial", "full"] as ContextMode[]) {
  document.getElementById(`mode-${mode}`)?.addEventListener("click", () => {
    if (state) update(setContextMode(state, mode));
  });
}

for (const proj of ["equal-earth", "orthographic-hemisphere"] as SphereProjection[]) {
  document.getElementById(`proj-${proj}`)?.addEventListener("click", () => {
    if (state) update(setProjection(state, proj));
  });
}

exportButton.addEventListener("click", () => {
  if (!state) return;
  const record = exportViewRecord(state);
  if (!record) return;
  const doc = { ...state.layout, view: record };
  const blob = new Blob([JSON.stringify(doc)], { type: "application/json" });
  const a = document.createElement("a");
  a.href = URL.createObjectURL(blob);
  a.download = "layout-with-view.json";
  a.click();
  URL.revokeObjectURL(a.href);
});
