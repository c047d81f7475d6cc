export interface GraphNode {
  id: number;
  label?: string;
  cluster?: number;
}

export interface GraphDoc {
  nodes: GraphNode[];
  links: { source: number; target: number }[];
}

export type Topology = "flat" | "torus" | "sphere";

export interface LayoutDoc {
  topology: Topology;
  cell_size: number | null;
  L: number;
  positions: number[][];
  converged: boolean;
  iterations: number;
  seed: number;
  view?: { pan?: [number, number]; rotate?: [number, number, number] };
}

export type ContextMode = "nocontext" | "partial" | "full";

export interface Quat {
  w: number;
  x: number;
  y: number;
  z: number;
}

export type SphereProjection = "equal-earth" | "orthographic-hemisphere";

export interface ViewState {
  graph: GraphDoc;
  layout: LayoutDoc;
  /** pan in cell units, always reduced mod cell (torus only) */
  pan: [number, number];
  /** view rotation as a unit quaternion (sphere only) */
  rotation: Quat;
  contextMode: ContextMode;
  projection: SphereProjection;
  viewport: [number, number];
  drag: { pointer: [number, number]; anchor: [number, number, number] } | null;
  /** last load error, shown as a banner; the previous document is kept */
  error: string | null;
}

export type DrawCommand =
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number; color: string; width: number }
  | { kind: "circle"; x: number; y: number; r: number; fill: string; node: number }
  | { kind: "path"; points: [number, number][]; color: string; width: number }
  | { kind: "rect"; x: number; y: number; w: number; h: number; color: string }
  | { kind: "text"; x: number; y: number; text: string; color: string };
