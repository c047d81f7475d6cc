"""Numba kernels for the sequential pairwise descent loops.

The pair-at-a-time updates cannot be vectorised (each update feeds the
next), so the hot loops run under numba.  The embedded xoshiro256**
step mirrors wraplay.rng bit for bit -- tests assert stream equality --
so layouts stay reproducible from the seed alone.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64


@njit(cache=True, inline="always")
def _rotl(x, k):
    return U64((x << k) | (x >> (U64(64) - k)))


@njit(cache=True, inline="always")
def _next_u64(state):
    result = U64(_rotl(U64(state[1] * U64(5)), U64(7)) * U64(9))
    t = U64(state[1] << U64(17))
    state[2] ^= state[0]
    state[3] ^= state[1]
    state[1] ^= state[2]
    state[0] ^= state[3]
    state[2] ^= t
    state[3] = _rotl(state[3], U64(45))
    return result


@njit(cache=True, inline="always")
def _next_double(state):
    return (_next_u64(state) >> U64(11)) * (2.0 ** -53)


@njit(cache=True, inline="always")
def _below(state, n):
    # rejection sampling; identical draw sequence to rng.Rng.below
    un = U64(n)
    limit = U64(U64(0xFFFFFFFFFFFFFFFF) - (U64(0xFFFFFFFFFFFFFFFF) % un + U64(1)) % un)
    while True:
        u = _next_u64(state)
        if u <= limit:
            return np.int64(u % un)


@njit(cache=True)
def _shuffle(order, state):
    for i in range(order.shape[0] - 1, 0, -1):
        j = _below(state, i + 1)
        tmp = order[i]
        order[i] = order[j]
        order[j] = tmp


@njit(cache=True)
def rng_selftest(state, n):
    out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        out[i] = _next_u64(state)
    return out


@njit(cache=True)
def pairwise_plane(pos, pu, pv, ideal, kfac1, kfac2, lam1, lam2, tau,
                   tau_max, cell, wrapped, delta_stop, state):
    """Annealed single-pair descent on the plane or torus.

    pos is modified in place; returns (iterations_run, converged).
    """
    npairs = pu.shape[0]
    order = np.arange(npairs)
    iters = 0
    converged = False
    for t in range(tau_max):
        phase1 = t <= tau
        if phase1:
            decay = np.exp(-lam1 * t)
        else:
            decay = 1.0 / (1.0 + lam2 * t)
        _shuffle(order, state)
        maxmove = 0.0
        for k in range(npairs):
            i = order[k]
            u = pu[i]
            v = pv[i]
            dx = pos[v, 0] - pos[u, 0]
            dy = pos[v, 1] - pos[u, 1]
            tgt = ideal[i]
            if wrapped:
                # minimum image: the residual acts along the torus
                # geodesic, so pairs wanting more than the cell allows
                # keep pushing apart instead of being absorbed by a
                # farther tile copy
                bd = 1e300
                bx = dx
                by = dy
                for oy in range(-1, 2):
                    cy = dy + oy * cell
                    for ox in range(-1, 2):
                        cx = dx + ox * cell
                        d = np.sqrt(cx * cx + cy * cy)
                        if d < bd:
                            bd = d
                            bx = cx
                            by = cy
                dx = bx
                dy = by
                d = bd
            else:
                d = np.sqrt(dx * dx + dy * dy)
            if d < 1e-12:
                ang = 2.0 * np.pi * _next_double(state)
                dx = np.cos(ang)
                dy = np.sin(ang)
                r = (0.0 - tgt) * 0.5
                d = 1.0
            else:
                r = (d - tgt) * 0.5
            eta = (kfac1[i] if phase1 else kfac2[i]) * decay
            if eta > 1.0:
                eta = 1.0
            m = eta * r
            mx = m * dx / d
            my = m * dy / d
            pos[u, 0] += mx
            pos[u, 1] += my
            pos[v, 0] -= mx
            pos[v, 1] -= my
            if wrapped:
                for node in (u, v):
                    for axis in range(2):
                        x = pos[node, axis]
                        x -= np.floor(x / cell) * cell
                        if x >= cell or x < 0.0:
                            x = 0.0
                        pos[node, axis] = x
            am = abs(m)
            if am > maxmove:
                maxmove = am
        iters = t + 1
        if maxmove < delta_stop:
            converged = True
            break
    return iters, converged


@njit(cache=True)
def pairwise_sphere(pos, pu, pv, ideal, kfac1, kfac2, lam1, lam2, tau,
                    tau_max, delta_stop, state):
    """Annealed single-pair descent on the unit sphere.

    Moves endpoints along the tangent great-circle direction and
    renormalises after every update.
    """
    npairs = pu.shape[0]
    order = np.arange(npairs)
    iters = 0
    converged = False
    for t in range(tau_max):
        phase1 = t <= tau
        if phase1:
            decay = np.exp(-lam1 * t)
        else:
            decay = 1.0 / (1.0 + lam2 * t)
        _shuffle(order, state)
        maxmove = 0.0
        for k in range(npairs):
            i = order[k]
            u = pu[i]
            v = pv[i]
            dot = (pos[u, 0] * pos[v, 0] + pos[u, 1] * pos[v, 1]
                   + pos[u, 2] * pos[v, 2])
            if dot > 1.0:
                dot = 1.0
            elif dot < -1.0:
                dot = -1.0
            theta = np.arccos(dot)
            r = (theta - ideal[i]) * 0.5
            eta = (kfac1[i] if phase1 else kfac2[i]) * decay
            if eta > 1.0:
                eta = 1.0
            m = eta * r
            for (a, b) in ((u, v), (v, u)):
                # tangent at a toward b
                tx = pos[b, 0] - dot * pos[a, 0]
                ty = pos[b, 1] - dot * pos[a, 1]
                tz = pos[b, 2] - dot * pos[a, 2]
                tn = np.sqrt(tx * tx + ty * ty + tz * tz)
                if tn < 1e-12:
                    # coincident or antipodal: pick a random tangent
                    gx = 2.0 * _next_double(state) - 1.0
                    gy = 2.0 * _next_double(state) - 1.0
                    gz = 2.0 * _next_double(state) - 1.0
                    dd = gx * pos[a, 0] + gy * pos[a, 1] + gz * pos[a, 2]
                    tx = gx - dd * pos[a, 0]
                    ty = gy - dd * pos[a, 1]
                    tz = gz - dd * pos[a, 2]
                    tn = np.sqrt(tx * tx + ty * ty + tz * tz)
                    if tn < 1e-12:
                        continue
                px = pos[a, 0] + m * tx / tn
                py = pos[a, 1] + m * ty / tn
                pz = pos[a, 2] + m * tz / tn
                pn = np.sqrt(px * px + py * py + pz * pz)
                pos[a, 0] = px / pn
                pos[a, 1] = py / pn
                pos[a, 2] = pz / pn
            am = abs(m)
            if am > maxmove:
                maxmove = am
        iters = t + 1
        if maxmove < delta_stop:
            converged = True
            break
    return iters, converged
