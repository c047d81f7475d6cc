// Equal Earth and two-disc orthographic projections, matching the
// engine's conventions (geographic +z pole, published Equal Earth
// polynomial, west disc mirrored).

import { Vec3 } from "./quaternion.js";

export const A1 = 1.340264;
export const A2 = -0.081106;
export const A3 = 0.000893;
export const A4 = 0.003796;
export const M = Math.sqrt(3) / 2;

export function vectorToLonLat(v: Vec3): [number, number] {
  const z = Math.min(1, Math.max(-1, v[2]));
  return [Math.atan2(v[1], v[0]), Math.asin(z)];
}

export function lonLatToVector(lon: number, lat: number): Vec3 {
  return [Math.cos(lat) * Math.cos(lon), Math.cos(lat) * Math.sin(lon), Math.sin(lat)];
}

export function projectEqualEarth(lon: number, lat: number): [number, number] {
  const theta = Math.asin(M * Math.sin(lat));
  const t2 = theta * theta;
  const t6 = t2 * t2 * t2;
  const x = (lon * Math.cos(theta)) /
    (M * (A1 + 3 * A2 * t2 + t6 * (7 * A3 + 9 * A4 * t2)));
  const y = theta * (A1 + A2 * t2 + t6 * (A3 + A4 * t2));
  return [x, y];
}

export function equalEarthExtent(): [number, number] {
  const [xMax] = projectEqualEarth(Math.PI, 0);
  const [, yMax] = projectEqualEarth(0, Math.PI / 2);
  return [xMax, yMax];
}

/** Invert Equal Earth map coordinates; null outside the projection. */
export function inverseEqualEarth(x: number, y: number): [number, number] | null {
  // Newton on y(theta)
  let theta = y / A1;
  for (let i = 0; i < 24; i++) {
    const t2 = theta * theta;
    const t6 = t2 * t2 * t2;
    const f = theta * (A1 + A2 * t2 + t6 * (A3 + A4 * t2)) - y;
    const fp = A1 + 3 * A2 * t2 + t6 * (7 * A3 + 9 * A4 * t2);
    theta -= f / fp;
  }
  if (Math.abs(theta) > Math.PI / 3 + 1e-9) return null;
  const sinLat = Math.sin(theta) / M;
  if (Math.abs(sinLat) > 1) return null;
  const t2 = theta * theta;
  const t6 = t2 * t2 * t2;
  const lon = (x * M * (A1 + 3 * A2 * t2 + t6 * (7 * A3 + 9 * A4 * t2))) /
    Math.cos(theta);
  if (Math.abs(lon) > Math.PI + 1e-9) return null;
  return [lon, Math.asin(sinLat)];
}

export interface EqualEarthScreen {
  scale: number;
  cx: number;
  cy: number;
}

export function equalEarthScreen(w: number, h: number, margin = 2): EqualEarthScreen {
  const [xMax, yMax] = equalEarthExtent();
  const scale = Math.min((w - 2 * margin) / (2 * xMax), (h - 2 * margin) / (2 * yMax));
  return { scale, cx: w / 2, cy: h / 2 };
}

export function equalEarthToPixel(v: Vec3, s: EqualEarthScreen): [number, number] {
  const [lon, lat] = vectorToLonLat(v);
  const [x, y] = projectEqualEarth(lon, lat);
  return [s.cx + s.scale * x, s.cy - s.scale * y];
}

/** Pixel -> rotated-frame unit vector, or null outside the outline. */
export function equalEarthUnproject(
  px: number, py: number, s: EqualEarthScreen,
): Vec3 | null {
  const inv = inverseEqualEarth((px - s.cx) / s.scale, (s.cy - py) / s.scale);
  if (!inv) return null;
  return lonLatToVector(inv[0], inv[1]);
}

export interface OrthoScreen {
  r: number;
  west: [number, number];
  east: [number, number];
}

export function orthographicScreen(w: number, h: number, margin = 2): OrthoScreen {
  const r = Math.min(w / 4 - margin, h / 2 - margin);
  return { r, west: [w / 4, h / 2], east: [(3 * w) / 4, h / 2] };
}

export function orthographicToPixel(v: Vec3, s: OrthoScreen): [number, number] {
  const face = v[2] >= 0 ? "east" : "west";
  const u = face === "east" ? v[0] : -v[0];
  const c = s[face];
  return [c[0] + s.r * u, c[1] - s.r * v[1]];
}

export function orthographicFace(v: Vec3): "east" | "west" {
  return v[2] >= 0 ? "east" : "west";
}

export function orthographicUnproject(
  px: number, py: number, s: OrthoScreen,
): Vec3 | null {
  for (const face of ["east", "west"] as const) {
    const c = s[face];
    const u = (px - c[0]) / s.r;
    const v = (c[1] - py) / s.r;
    const w2 = 1 - u * u - v * v;
    if (w2 >= 0) {
      const w = Math.sqrt(w2);
      return face === "east" ? [u, v, w] : [-u, v, -w];
    }
  }
  return null;
}

/** Minor great-circle arc samples between unit vectors a and b. */
export function greatCircle(a: Vec3, b: Vec3, segments = 64): Vec3[] {
  const dot = Math.min(1, Math.max(-1, a[0] * b[0] + a[1] * b[1] + a[2] * b[2]));
  const theta = Math.acos(dot);
  const out: Vec3[] = [];
  if (theta < 1e-12) {
    for (let k = 0; k <= segments; k++) out.push([...a]);
    return out;
  }
  const s = Math.sin(theta);
  for (let k = 0; k <= segments; k++) {
    const t = k / segments;
    const wa = Math.sin((1 - t) * theta) / s;
    const wb = Math.sin(t * theta) / s;
    const p: Vec3 = [
      wa * a[0] + wb * b[0],
      wa * a[1] + wb * b[1],
      wa * a[2] + wb * b[2],
    ];
    const n = Math.hypot(...p);
    out.push([p[0] / n, p[1] / n, p[2] / n]);
  }
  return out;
}

export function equalEarthOutline(s: EqualEarthScreen, n = 90): [number, number][] {
  const pts: [number, number][] = [];
  const push = (lon: number, lat: number) => {
    const [x, y] = projectEqualEarth(lon, lat);
    pts.push([s.cx + s.scale * x, s.cy - s.scale * y]);
  };
  for (let k = 0; k < n; k++) push(-Math.PI + (2 * Math.PI * k) / n, Math.PI / 2);
  for (let k = 0; k < n; k++) push(Math.PI, Math.PI / 2 - (Math.PI * k) / n);
  for (let k = 0; k < n; k++) push(Math.PI - (2 * Math.PI * k) / n, -Math.PI / 2);
  for (let k = 0; k < n; k++) push(-Math.PI, -Math.PI / 2 + (Math.PI * k) / n);
  pts.push(pts[0]);
  return pts;
}
