// Torus wrap arithmetic shared by panning and rendering.

export type Vec2 = [number, number];
export type Segment = [Vec2, Vec2];

/** Map x into [0, cell); exact for x that is an integer multiple of cell. */
export function wrapCoord(x: number, cell: number): number {
  let out = x - Math.floor(x / cell) * cell;
  if (out >= cell || out < 0) out = 0;
  return out;
}

/** Pan reduced mod cell so whole-cell pans are exact identities. */
export function reducePan(pan: Vec2, cell: number): Vec2 {
  return [wrapCoord(pan[0], cell), wrapCoord(pan[1], cell)];
}

export function pannedPosition(p: Vec2, pan: Vec2, cell: number): Vec2 {
  const px = pan[0] === 0 ? p[0] : wrapCoord(p[0] + pan[0], cell);
  const py = pan[1] === 0 ? p[1] : wrapCoord(p[1] + pan[1], cell);
  return [px, py];
}

/** Offset of the nearest tile copy of b relative to a (minimum image). */
export function minImageOffset(a: Vec2, b: Vec2, cell: number): [number, number] {
  let best = Infinity;
  let off: [number, number] = [0, 0];
  for (let oy = -1; oy <= 1; oy++) {
    const dy = b[1] + oy * cell - a[1];
    for (let ox = -1; ox <= 1; ox++) {
      const dx = b[0] + ox * cell - a[0];
      const d = Math.hypot(dx, dy);
      if (d < best) {
        best = d;
        off = [ox, oy];
      }
    }
  }
  return off;
}

/**
 * In-cell pieces of the straight path from a to the offset copy of b:
 * one for a direct edge, two for a single wrap, three across a corner.
 */
export function torusSegments(
  a: Vec2, b: Vec2, off: [number, number], cell: number,
): Segment[] {
  const [ox, oy] = off;
  const qx = b[0] + ox * cell;
  const qy = b[1] + oy * cell;
  if (ox === 0 && oy === 0) return [[a, [qx, qy]]];
  const ex = qx - a[0];
  const ey = qy - a[1];
  const cuts = [0, 1];
  let tx: number | null = null;
  let ty: number | null = null;
  if (ox !== 0) {
    tx = ((ox > 0 ? cell : 0) - a[0]) / ex;
    cuts.push(tx);
  }
  if (oy !== 0) {
    ty = ((oy > 0 ? cell : 0) - a[1]) / ey;
    cuts.push(ty);
  }
  const ts = Array.from(new Set(cuts.map((t) => Math.min(Math.max(t, 0), 1))))
    .sort((p, q) => p - q);
  const pieces: Segment[] = [];
  for (let i = 0; i + 1 < ts.length; i++) {
    const t0 = ts[i];
    const t1 = ts[i + 1];
    if (t1 - t0 < 1e-12) continue;
    const mid = (t0 + t1) / 2;
    const sx = tx !== null && mid > tx ? -ox * cell : 0;
    const sy = ty !== null && mid > ty ? -oy * cell : 0;
    pieces.push([
      [a[0] + t0 * ex + sx, a[1] + t0 * ey + sy],
      [a[0] + t1 * ex + sx, a[1] + t1 * ey + sy],
    ]);
  }
  return pieces;
}
