// Unit-quaternion (versor) helpers for the sphere drag interaction.
// The engine's rotation convention is Rz(gam) . Ry(phi) . Rz(lam).

import { Quat } from "./types.js";

export type Vec3 = [number, number, number];

export const IDENTITY: Quat = { w: 1, x: 0, y: 0, z: 0 };

export function multiply(a: Quat, b: Quat): Quat {
  return {
    w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
    x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
    y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
    z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

export function conjugate(q: Quat): Quat {
  return { w: q.w, x: -q.x, y: -q.y, z: -q.z };
}

export function normalize(q: Quat): Quat {
  const n = Math.hypot(q.w, q.x, q.y, q.z);
  return { w: q.w / n, x: q.x / n, y: q.y / n, z: q.z / n };
}

export function fromAxisAngle(axis: Vec3, angle: number): Quat {
  const n = Math.hypot(axis[0], axis[1], axis[2]);
  if (n < 1e-15) return { ...IDENTITY };
  const s = Math.sin(angle / 2) / n;
  return { w: Math.cos(angle / 2), x: axis[0] * s, y: axis[1] * s, z: axis[2] * s };
}

/** The smallest rotation carrying unit vector a onto unit vector b. */
export function between(a: Vec3, b: Vec3): Quat {
  const cross: Vec3 = [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
  const dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const angle = Math.atan2(Math.hypot(...cross), dot);
  if (Math.hypot(...cross) < 1e-15) {
    if (dot > 0) return { ...IDENTITY };
    // antipodal: rotate half a turn about any perpendicular axis
    const perp: Vec3 = Math.abs(a[0]) < 0.9 ? [1, 0, 0] : [0, 1, 0];
    const axis: Vec3 = [
      a[1] * perp[2] - a[2] * perp[1],
      a[2] * perp[0] - a[0] * perp[2],
      a[0] * perp[1] - a[1] * perp[0],
    ];
    return fromAxisAngle(axis, Math.PI);
  }
  return fromAxisAngle(cross, angle);
}

export function rotate(q: Quat, v: Vec3): Vec3 {
  // v' = v + 2 q_vec x (q_vec x v + w v)
  const tx = 2 * (q.y * v[2] - q.z * v[1]);
  const ty = 2 * (q.z * v[0] - q.x * v[2]);
  const tz = 2 * (q.x * v[1] - q.y * v[0]);
  return [
    v[0] + q.w * tx + q.y * tz - q.z * ty,
    v[1] + q.w * ty + q.z * tx - q.x * tz,
    v[2] + q.w * tz + q.x * ty - q.y * tx,
  ];
}

export function toMatrix(q: Quat): number[][] {
  const { w, x, y, z } = q;
  return [
    [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
    [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
    [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
  ];
}

/** z-y-z Euler triple (lam, phi, gam) with R = Rz(gam) Ry(phi) Rz(lam). */
export function toEulerZYZ(q: Quat): [number, number, number] {
  const m = toMatrix(q);
  const phi = Math.acos(Math.min(1, Math.max(-1, m[2][2])));
  if (Math.abs(Math.sin(phi)) < 1e-12) {
    // gimbal: fold everything into lam
    const lam = Math.atan2(m[1][0], m[0][0]);
    return m[2][2] > 0 ? [lam, 0, 0] : [-lam, Math.PI, 0];
  }
  const gam = Math.atan2(m[1][2], m[0][2]);
  const lam = Math.atan2(m[2][1], -m[2][0]);
  return [lam, phi, gam];
}

export function fromEulerZYZ(lam: number, phi: number, gam: number): Quat {
  const qz = (a: number): Quat => ({ w: Math.cos(a / 2), x: 0, y: 0, z: Math.sin(a / 2) });
  const qy = (a: number): Quat => ({ w: Math.cos(a / 2), x: 0, y: Math.sin(a / 2), z: 0 });
  return multiply(qz(gam), multiply(qy(phi), qz(lam)));
}
