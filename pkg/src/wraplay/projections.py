"""Cartographic projections for sphere layouts.

Rotation convention used everywhere: a triple (lam, phi, gam) composes
as Rz(gam) @ Ry(phi) @ Rz(lam) (z-y-z Euler angles), so every rotation
is reachable and `gam` alone spins the view about the +z view axis.

Geographic coordinates of a rotated unit vector (x, y, z):
lon = atan2(y, x) in [-pi, pi], lat = asin(z) in [-pi/2, pi/2].

Equal Earth uses the published polynomial (Savric, Patterson & Jenny
2019) with coefficients A1..A4 below; it is equal-area by construction.
The Orthographic Hemisphere projection shows two discs: the front
hemisphere (z >= 0, "east") and the mirrored back hemisphere ("west").
"""

from __future__ import annotations

import math

import numpy as np

A1 = 1.340264
A2 = -0.081106
A3 = 0.000893
A4 = 0.003796
M = math.sqrt(3.0) / 2.0

EQUAL_EARTH = "equal-earth"
ORTHOGRAPHIC = "orthographic-hemisphere"
PROJECTIONS = (EQUAL_EARTH, ORTHOGRAPHIC)


def normalize_angle(a: float) -> float:
    """Reduce to [-pi, pi)."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a < 0:
        a += 2.0 * math.pi
    return a - math.pi


def rotation_matrix(rot: tuple[float, float, float]) -> np.ndarray:
    lam, phi, gam = rot
    cl, sl = math.cos(lam), math.sin(lam)
    cp, sp = math.cos(phi), math.sin(phi)
    cg, sg = math.cos(gam), math.sin(gam)
    rz_l = np.array([[cl, -sl, 0.0], [sl, cl, 0.0], [0.0, 0.0, 1.0]])
    ry_p = np.array([[cp, 0.0, sp], [0.0, 1.0, 0.0], [-sp, 0.0, cp]])
    rz_g = np.array([[cg, -sg, 0.0], [sg, cg, 0.0], [0.0, 0.0, 1.0]])
    return rz_g @ ry_p @ rz_l


def rotate_points(points: np.ndarray, rot: tuple[float, float, float]) -> np.ndarray:
    return points @ rotation_matrix(rot).T


def vector_to_lonlat(v) -> tuple[float, float]:
    z = min(1.0, max(-1.0, float(v[2])))
    return math.atan2(float(v[1]), float(v[0])), math.asin(z)


def project_equal_earth(lon: float, lat: float) -> tuple[float, float]:
    """Raw Equal Earth map coordinates (unitless, lon/lat in radians)."""
    theta = math.asin(M * math.sin(lat))
    t2 = theta * theta
    t6 = t2 * t2 * t2
    x = lon * math.cos(theta) / (M * (A1 + 3.0 * A2 * t2 + t6 * (7.0 * A3 + 9.0 * A4 * t2)))
    y = theta * (A1 + A2 * t2 + t6 * (A3 + A4 * t2))
    return x, y


def equal_earth_extent() -> tuple[float, float]:
    """(x_max, y_max) of the projected sphere."""
    x_max, _ = project_equal_earth(math.pi, 0.0)
    _, y_max = project_equal_earth(0.0, math.pi / 2.0)
    return x_max, y_max


def project_orthographic_hemisphere(
    v, rot: tuple[float, float, float]
) -> tuple[str, float, float]:
    """(face, u, v) disc coordinates after rotating by `rot`.

    The front hemisphere (rotated z >= 0) is the "east" disc with
    (u, v) = (x, y); the back is the "west" disc mirrored in u so it
    reads as seen from behind.
    """
    r = rotation_matrix(rot)
    x, y, z = (float(c) for c in (r @ np.asarray(v, dtype=float)))
    if z >= 0.0:
        return "east", x, y
    return "west", -x, y


def orthographic_back_project(face: str, u: float, v: float) -> np.ndarray:
    """Inverse of project_orthographic_hemisphere (rotated frame)."""
    w2 = 1.0 - u * u - v * v
    w = math.sqrt(max(0.0, w2))
    if face == "east":
        return np.array([u, v, w])
    return np.array([-u, v, -w])


def sample_equal_earth_outline(samples_per_side: int = 180) -> list[tuple[float, float]]:
    """Closed outline of the projection in raw map coordinates."""
    pts = []
    n = samples_per_side
    for k in range(n):  # top: lat = +pi/2, lon sweeps west -> east
        lon = -math.pi + 2.0 * math.pi * k / n
        pts.append(project_equal_earth(lon, math.pi / 2.0))
    for k in range(n):  # east meridian, north -> south
        lat = math.pi / 2.0 - math.pi * k / n
        pts.append(project_equal_earth(math.pi, lat))
    for k in range(n):  # bottom, east -> west
        lon = math.pi - 2.0 * math.pi * k / n
        pts.append(project_equal_earth(lon, -math.pi / 2.0))
    for k in range(n):  # west meridian, south -> north
        lat = -math.pi / 2.0 + math.pi * k / n
        pts.append(project_equal_earth(-math.pi, lat))
    pts.append(pts[0])
    return pts


def slerp(a: np.ndarray, b: np.ndarray, t: float) -> np.ndarray:
    """Point at fraction t along the minor great-circle arc a -> b."""
    dot = min(1.0, max(-1.0, float(np.dot(a, b))))
    theta = math.acos(dot)
    if theta < 1e-12:
        return a.copy()
    s = math.sin(theta)
    out = (math.sin((1.0 - t) * theta) / s) * a + (math.sin(t * theta) / s) * b
    return out / np.linalg.norm(out)


def great_circle_points(a: np.ndarray, b: np.ndarray, segments: int = 64) -> np.ndarray:
    dot = min(1.0, max(-1.0, float(np.dot(a, b))))
    theta = math.acos(dot)
    if theta < 1e-12:
        return np.tile(a, (segments + 1, 1))
    t = np.linspace(0.0, 1.0, segments + 1)
    s = math.sin(theta)
    pts = (np.sin((1.0 - t) * theta)[:, None] * a[None, :]
           + np.sin(t * theta)[:, None] * b[None, :]) / s
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)
