"""Stress-minimising layouts on plane, torus and sphere.

Two optimisers share one two-phase annealing schedule:

* pairwise -- stochastic descent moving one node pair at a time, with
  step caps decaying exponentially until iteration ``tau`` and like 1/t
  afterwards; robust against poor local minima.
* all-pairs -- classic full-gradient descent with a curvature-derived
  step length; kept as the comparison baseline.

On the torus every pair measures through the nearest of the nine tile
adjacencies (minimum image).  All layouts are deterministic functions
of (graph, params, seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .geometry import best_wrapping, wrap_coord
from .graphs import DistanceMatrix, Graph
from .rng import Rng, seed_state

__all__ = [
    "LayoutParams", "TorusLayout", "FlatLayout", "SphereLayout",
    "ideal_unit", "annealing_eta", "best_wrapping",
    "layout_torus_pairwise", "layout_torus_allpairs",
    "layout_flat", "layout_flat_allpairs", "layout_sphere",
    "layout_to_json", "layout_from_json",
]

# offsets in (dy, dx)-lexicographic order; argmin ties then match
# geometry.best_wrapping
_OFFSETS = np.array(
    [(ox, oy) for oy in (-1, 0, 1) for ox in (-1, 0, 1)], dtype=float
)


@dataclass(frozen=True)
class LayoutParams:
    cell_size: float = 1.0
    tau: int = 80
    epsilon_exp: float = 0.1
    epsilon_conv: float = 0.001
    delta_stop: float = 0.03
    tau_max: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")
        if not 0 < self.tau < self.tau_max:
            raise ValueError("need 0 < tau < tau_max")
        if not (0 < self.epsilon_exp < 1 and 0 < self.epsilon_conv < 1):
            raise ValueError("epsilons must lie in (0, 1)")
        if self.delta_stop <= 0:
            raise ValueError("delta_stop must be positive")


@dataclass
class TorusLayout:
    positions: np.ndarray
    cell_size: float
    ideal_unit: float
    converged: bool = True
    iterations: int = 0
    seed: int = 0
    view_pan: Optional[tuple[float, float]] = None

    topology = "torus"


@dataclass
class FlatLayout:
    positions: np.ndarray
    ideal_unit: float
    converged: bool = True
    iterations: int = 0
    seed: int = 0

    topology = "flat"


@dataclass
class SphereLayout:
    positions: np.ndarray
    ideal_unit: float
    converged: bool = True
    iterations: int = 0
    seed: int = 0
    view_rotation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    topology = "sphere"


def ideal_unit(dm: DistanceMatrix, p: LayoutParams) -> float:
    """Desired link length: cell_size / (min(diameter, 2) + 1)."""
    return p.cell_size / (min(dm.diameter, 2) + 1)


def _lambda1(dm: DistanceMatrix, p: LayoutParams) -> float:
    # decay constant fixing the phase-1 cap at epsilon_exp for the
    # closest pairs when t reaches tau: Dmax^2 e^{-lambda tau} = Dmin^2 eps
    return math.log(dm.d_max ** 2 / (dm.d_min ** 2 * p.epsilon_exp)) / p.tau


def _lambda2(p: LayoutParams) -> float:
    # the 1/t phase cap reaches epsilon_conv at tau_max
    return (1.0 / p.epsilon_conv - 1.0) / p.tau_max


def annealing_eta(t: int, d_uv: float, dm: DistanceMatrix, p: LayoutParams) -> float:
    """Per-pair step cap at iteration t (two-phase schedule)."""
    if t <= p.tau:
        return min(1.0, (dm.d_max ** 2 / d_uv ** 2) * math.exp(-_lambda1(dm, p) * t))
    return min(1.0, (dm.d_min ** 2 / d_uv ** 2) / (1.0 + _lambda2(p) * t))


def _pairs(dm: DistanceMatrix, unit: float):
    n = dm.d.shape[0]
    iu, iv = np.triu_indices(n, k=1)
    dvals = dm.d[iu, iv].astype(float)
    return (
        iu.astype(np.int64),
        iv.astype(np.int64),
        unit * dvals,
        (dm.d_max ** 2) / dvals ** 2,
        (dm.d_min ** 2) / dvals ** 2,
    )


def _centre_jitter_init(n: int, p: LayoutParams) -> np.ndarray:
    # everything starts at the cell centre; jitter avoids undefined
    # pair directions at exact coincidence
    rng = Rng(p.seed, "init")
    pos = np.empty((n, 2))
    c = p.cell_size / 2.0
    amp = 1e-3 * p.cell_size
    for i in range(n):
        pos[i, 0] = c + amp * (2.0 * rng.random() - 1.0)
        pos[i, 1] = c + amp * (2.0 * rng.random() - 1.0)
    return pos


def _kernel_state(seed: int) -> np.ndarray:
    return np.array(seed_state(Rng(seed, "pairs").next_u64()), dtype=np.uint64)


def _run_pairwise_2d(g: Graph, dm: DistanceMatrix, p: LayoutParams, wrapped: bool):
    unit = ideal_unit(dm, p)
    pu, pv, ideal, k1, k2 = _pairs(dm, unit)
    pos = _centre_jitter_init(g.node_count, p)
    iters, converged = _kernels.pairwise_plane(
        pos, pu, pv, ideal, k1, k2,
        _lambda1(dm, p), _lambda2(p), p.tau, p.tau_max,
        p.cell_size, wrapped, p.delta_stop, _kernel_state(p.seed),
    )
    return pos, unit, int(iters), bool(converged)


def layout_torus_pairwise(g: Graph, dm: DistanceMatrix, p: LayoutParams) -> TorusLayout:
    pos, unit, iters, conv = _run_pairwise_2d(g, dm, p, wrapped=True)
    return TorusLayout(pos, p.cell_size, unit, conv, iters, p.seed)


def layout_flat(g: Graph, dm: DistanceMatrix, p: LayoutParams) -> FlatLayout:
    pos, unit, iters, conv = _run_pairwise_2d(g, dm, p, wrapped=False)
    return FlatLayout(pos, unit, conv, iters, p.seed)


def _allpairs_descent(g: Graph, dm: DistanceMatrix, p: LayoutParams, wrapped: bool):
    """Full-gradient descent; step length g.g / (g.H.g) with the stress
    Hessian approximated by the weighted pair Laplacian."""
    unit = ideal_unit(dm, p)
    pu, pv, ideal, _, _ = _pairs(dm, unit)
    w = 1.0 / ideal ** 2
    n = g.node_count
    pos = _centre_jitter_init(n, p)
    cell = p.cell_size
    rng = Rng(p.seed, "allpairs-degenerate")

    iters = 0
    converged = False
    for t in range(p.tau_max):
        delta = pos[pv] - pos[pu]
        if wrapped:
            # minimum image, as in the pairwise kernel
            cand = delta[:, None, :] + cell * _OFFSETS[None, :, :]
            dists = np.hypot(cand[:, :, 0], cand[:, :, 1])
            pick = np.argmin(dists, axis=1)
            rows = np.arange(len(pu))
            delta = cand[rows, pick]
            d = dists[rows, pick]
        else:
            d = np.hypot(delta[:, 0], delta[:, 1])
        tiny = d < 1e-12
        if tiny.any():
            for i in np.nonzero(tiny)[0]:
                ang = 2.0 * math.pi * rng.random()
                delta[i] = (math.cos(ang), math.sin(ang))
                d[i] = 1.0
        coef = 2.0 * w * (d - ideal) / d
        contrib = coef[:, None] * delta
        grad = np.zeros((n, 2))
        np.add.at(grad, pu, -contrib)
        np.add.at(grad, pv, contrib)

        gsq = float((grad * grad).sum())
        gdiff = grad[pu] - grad[pv]
        denom = float((2.0 * w * (gdiff * gdiff).sum(axis=1)).sum())
        if denom <= 0.0 or gsq <= 0.0:
            iters = t + 1
            converged = True
            break
        alpha = gsq / denom
        step = alpha * grad
        pos -= step
        if wrapped:
            pos -= np.floor(pos / cell) * cell
            pos[(pos >= cell) | (pos < 0.0)] = 0.0
        iters = t + 1
        if float(np.hypot(step[:, 0], step[:, 1]).max()) < p.delta_stop:
            converged = True
            break
    return pos, unit, iters, converged


def layout_torus_allpairs(g: Graph, dm: DistanceMatrix, p: LayoutParams) -> TorusLayout:
    pos, unit, iters, conv = _allpairs_descent(g, dm, p, wrapped=True)
    return TorusLayout(pos, p.cell_size, unit, conv, iters, p.seed)


def layout_flat_allpairs(g: Graph, dm: DistanceMatrix, p: LayoutParams) -> FlatLayout:
    pos, unit, iters, conv = _allpairs_descent(g, dm, p, wrapped=False)
    return FlatLayout(pos, unit, conv, iters, p.seed)


def _sphere_init(n: int, p: LayoutParams) -> np.ndarray:
    rng = Rng(p.seed, "init")
    pos = np.empty((n, 3))
    for i in range(n):
        pos[i] = rng.unit_vector3()
    return pos


def layout_sphere(g: Graph, dm: DistanceMatrix, p: LayoutParams) -> SphereLayout:
    """Pairwise descent of arc-length stress on the unit sphere.

    Pair ideals are hops * pi/diameter so the farthest pairs aim for
    antipodes.
    """
    unit = math.pi / dm.diameter
    pu, pv, ideal, k1, k2 = _pairs(dm, unit)
    pos = _sphere_init(g.node_count, p)
    iters, converged = _kernels.pairwise_sphere(
        pos, pu, pv, ideal, k1, k2,
        _lambda1(dm, p), _lambda2(p), p.tau, p.tau_max,
        p.delta_stop, _kernel_state(p.seed),
    )
    norms = np.linalg.norm(pos, axis=1, keepdims=True)
    pos /= norms
    return SphereLayout(pos, unit, bool(converged), int(iters), p.seed)


# --- interchange -------------------------------------------------------------


def layout_to_json(layout) -> str:
    doc: dict = {
        "topology": layout.topology,
        "cell_size": getattr(layout, "cell_size", None),
        "L": layout.ideal_unit,
        "positions": [[float(c) for c in row] for row in layout.positions],
        "converged": layout.converged,
        "iterations": layout.iterations,
        "seed": layout.seed,
    }
    if getattr(layout, "view_pan", None) is not None:
        doc["view"] = {"pan": [layout.view_pan[0], layout.view_pan[1]]}
    if layout.topology == "sphere" and any(layout.view_rotation):
        doc["view"] = {"rotate": list(layout.view_rotation)}
    return json.dumps(doc, separators=(",", ":"))


class LayoutFormatError(ValueError):
    pass


def layout_from_json(text: str):
    try:
        doc = json.loads(text)
        topology = doc["topology"]
        positions = np.array(doc["positions"], dtype=float)
        unit = float(doc["L"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise LayoutFormatError(f"malformed layout JSON: {exc}") from exc
    converged = bool(doc.get("converged", True))
    iterations = int(doc.get("iterations", 0))
    seed = int(doc.get("seed", 0))
    view = doc.get("view") or {}
    if topology == "torus":
        lay = TorusLayout(positions, float(doc["cell_size"]), unit,
                          converged, iterations, seed)
        if "pan" in view:
            lay.view_pan = (float(view["pan"][0]), float(view["pan"][1]))
        return lay
    if topology == "flat":
        return FlatLayout(positions, unit, converged, iterations, seed)
    if topology == "sphere":
        lay = SphereLayout(positions, unit, converged, iterations, seed)
        if "rotate" in view:
            lay.view_rotation = tuple(float(a) for a in view["rotate"])
        return lay
    raise LayoutFormatError(f"unknown topology {topology!r}")


def panned_positions(layout: TorusLayout) -> np.ndarray:
    """Positions with the stored view pan applied (mod cell)."""
    if layout.view_pan is None:
        return layout.positions
    shifted = layout.positions + np.asarray(layout.view_pan)
    shifted -= np.floor(shifted / layout.cell_size) * layout.cell_size
    shifted[(shifted >= layout.cell_size) | (shifted < 0.0)] = 0.0
    return shifted
