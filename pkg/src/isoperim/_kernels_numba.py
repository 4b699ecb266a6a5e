"""Numba-jitted implementations of the grid kernels.

Same contracts and arithmetic as ``_kernels_numpy``; only the execution
strategy differs. Importing this module requires numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

NAME = "numba"

INF = 1e30
_INF_CUT = 1e29

# Marching-squares case table, edges encoded b=0, r=1, t=2, l=3.
# Row c holds up to two (from, to) pairs, -1 padded. Saddle cases 5/10
# are resolved at runtime from the cell-center average.
_CASE_SEGS = np.full((16, 4), -1, dtype=np.int64)
for _c, _segs in {
    1: (0, 3),
    2: (1, 0),
    3: (1, 3),
    4: (2, 1),
    6: (2, 0),
    7: (2, 3),
    8: (3, 2),
    9: (0, 2),
    11: (1, 2),
    12: (3, 1),
    13: (0, 1),
    14: (3, 0),
}.items():
    _CASE_SEGS[_c, 0] = _segs[0]
    _CASE_SEGS[_c, 1] = _segs[1]
_SADDLE_IN = np.array([[0, 1, 2, 3], [3, 0, 1, 2]], dtype=np.int64)  # cases 5, 10
_SADDLE_OUT = np.array([[0, 3, 2, 1], [1, 0, 3, 2]], dtype=np.int64)


@njit(parallel=True, cache=True)
def signed_distance_grid(xs, ys, ex0, ey0, ex1, ey1):
    ny = ys.shape[0]
    nx = xs.shape[0]
    ne = ex0.shape[0]
    out = np.empty((ny, nx))
    for iy in prange(ny):
        y = ys[iy]
        for ix in range(nx):
            x = xs[ix]
            best = 1e300
            inside = False
            for e in range(ne):
                x0 = ex0[e]
                y0 = ey0[e]
                x1 = ex1[e]
                y1 = ey1[e]
                dx = x1 - x0
                dy = y1 - y0
                t = ((x - x0) * dx + (y - y0) * dy) / (dx * dx + dy * dy)
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                px = x - (x0 + t * dx)
                py = y - (y0 + t * dy)
                d2 = px * px + py * py
                if d2 < best:
                    best = d2
                if (y0 > y) != (y1 > y):
                    if x < x0 + (y - y0) * (dx / dy):
                        inside = not inside
            out[iy, ix] = np.sqrt(best) if inside else -np.sqrt(best)
    return out


@njit(cache=True)
def _dt1d(f, d, arg, v, z):
    n = f.shape[0]
    q0 = -1
    for q in range(n):
        if f[q] < _INF_CUT:
            q0 = q
            break
    if q0 < 0:
        for q in range(n):
            d[q] = INF
            arg[q] = -1
        return
    k = 0
    v[0] = q0
    z[0] = -INF
    z[1] = INF
    for q in range(q0 + 1, n):
        fq = f[q]
        if fq >= _INF_CUT:
            continue
        s = 0.0
        while True:
            p = v[k]
            s = ((fq + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            if s <= z[k]:
                k -= 1
            else:
                break
        k += 1
        v[k] = q
        z[k] = s
        z[k + 1] = INF
    k = 0
    for p in range(n):
        while z[k + 1] < p:
            k += 1
        q = v[k]
        d[p] = (p - q) * (p - q) + f[q]
        arg[p] = q


@njit(cache=True)
def distance_transform(f0):
    ny, nx = f0.shape
    g = np.empty((ny, nx))
    argy = np.full((ny, nx), -1, dtype=np.int32)
    fbuf = np.empty(ny)
    dbuf = np.empty(ny)
    abuf = np.empty(ny, dtype=np.int64)
    vbuf = np.empty(ny, dtype=np.int64)
    zbuf = np.empty(ny + 1)
    for ix in range(nx):
        for iy in range(ny):
            fbuf[iy] = f0[iy, ix]
        _dt1d(fbuf, dbuf, abuf, vbuf, zbuf)
        for iy in range(ny):
            g[iy, ix] = dbuf[iy]
            argy[iy, ix] = np.int32(abuf[iy])
    d2 = np.empty((ny, nx))
    wx = np.full((ny, nx), -1, dtype=np.int32)
    wy = np.full((ny, nx), -1, dtype=np.int32)
    dbuf2 = np.empty(nx)
    abuf2 = np.empty(nx, dtype=np.int64)
    vbuf2 = np.empty(nx, dtype=np.int64)
    zbuf2 = np.empty(nx + 1)
    for iy in range(ny):
        _dt1d(g[iy, :].copy(), dbuf2, abuf2, vbuf2, zbuf2)
        for ix in range(nx):
            d2[iy, ix] = dbuf2[ix]
            a = abuf2[ix]
            wx[iy, ix] = np.int32(a)
            if a >= 0:
                wy[iy, ix] = argy[iy, a]
    return d2, wy, wx


@njit(cache=True)
def label_components(mask):
    ny, nx = mask.shape
    labels = np.zeros((ny, nx), dtype=np.int32)
    stack = np.empty(ny * nx, dtype=np.int64)
    count = 0
    for start in range(ny * nx):
        sy = start // nx
        sx = start % nx
        if mask[sy, sx] == 0 or labels[sy, sx] != 0:
            continue
        count += 1
        labels[sy, sx] = count
        stack[0] = start
        top = 1
        while top > 0:
            top -= 1
            cur = stack[top]
            cy = cur // nx
            cx = cur % nx
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    yy = cy + dy
                    xx = cx + dx
                    if 0 <= yy < ny and 0 <= xx < nx:
                        if mask[yy, xx] != 0 and labels[yy, xx] == 0:
                            labels[yy, xx] = count
                            stack[top] = yy * nx + xx
                            top += 1
    return count, labels


@njit(cache=True)
def _edge_point(which, iy, ix, values, level, xs, ys, nx, ny):
    if which == 0:  # bottom
        va = values[iy, ix]
        vb = values[iy, ix + 1]
        t = (level - va) / (vb - va)
        if t < 1e-12:
            t = 1e-12
        elif t > 1.0 - 1e-12:
            t = 1.0 - 1e-12
        return iy * (nx - 1) + ix, xs[ix] * (1 - t) + xs[ix + 1] * t, ys[iy]
    if which == 2:  # top
        va = values[iy + 1, ix]
        vb = values[iy + 1, ix + 1]
        t = (level - va) / (vb - va)
        if t < 1e-12:
            t = 1e-12
        elif t > 1.0 - 1e-12:
            t = 1.0 - 1e-12
        return (iy + 1) * (nx - 1) + ix, xs[ix] * (1 - t) + xs[ix + 1] * t, ys[iy + 1]
    nh = ny * (nx - 1)
    if which == 3:  # left
        va = values[iy, ix]
        vb = values[iy + 1, ix]
        t = (level - va) / (vb - va)
        if t < 1e-12:
            t = 1e-12
        elif t > 1.0 - 1e-12:
            t = 1.0 - 1e-12
        return nh + iy * nx + ix, xs[ix], ys[iy] * (1 - t) + ys[iy + 1] * t
    va = values[iy, ix + 1]  # right
    vb = values[iy + 1, ix + 1]
    t = (level - va) / (vb - va)
    if t < 1e-12:
        t = 1e-12
    elif t > 1.0 - 1e-12:
        t = 1.0 - 1e-12
    return nh + iy * nx + ix + 1, xs[ix + 1], ys[iy] * (1 - t) + ys[iy + 1] * t


@njit(cache=True)
def _cell_case(values, level, iy, ix):
    c = 0
    if values[iy, ix] >= level:
        c += 1
    if values[iy, ix + 1] >= level:
        c += 2
    if values[iy + 1, ix + 1] >= level:
        c += 4
    if values[iy + 1, ix] >= level:
        c += 8
    return c


@njit(cache=True)
def marching_segments(values, level, xs, ys):
    ny, nx = values.shape
    case_segs = _CASE_SEGS
    sad_in = _SADDLE_IN
    sad_out = _SADDLE_OUT
    total = 0
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            c = _cell_case(values, level, iy, ix)
            if c == 0 or c == 15:
                continue
            total += 2 if c == 5 or c == 10 else 1
    starts = np.empty(total, dtype=np.int64)
    ends = np.empty(total, dtype=np.int64)
    coords = np.empty((total, 4))
    k = 0
    for iy in range(ny - 1):
        for ix in range(nx - 1):
            c = _cell_case(values, level, iy, ix)
            if c == 0 or c == 15:
                continue
            if c == 5 or c == 10:
                row = 0 if c == 5 else 1
                center = 0.25 * (
                    values[iy, ix]
                    + values[iy, ix + 1]
                    + values[iy + 1, ix]
                    + values[iy + 1, ix + 1]
                )
                segs = sad_in[row] if center >= level else sad_out[row]
                for s in range(2):
                    i0, x0, y0 = _edge_point(
                        segs[2 * s], iy, ix, values, level, xs, ys, nx, ny
                    )
                    i1, x1, y1 = _edge_point(
                        segs[2 * s + 1], iy, ix, values, level, xs, ys, nx, ny
                    )
                    starts[k] = i0
                    ends[k] = i1
                    coords[k, 0] = x0
                    coords[k, 1] = y0
                    coords[k, 2] = x1
                    coords[k, 3] = y1
                    k += 1
            else:
                i0, x0, y0 = _edge_point(
                    case_segs[c, 0], iy, ix, values, level, xs, ys, nx, ny
                )
                i1, x1, y1 = _edge_point(
                    case_segs[c, 1], iy, ix, values, level, xs, ys, nx, ny
                )
                starts[k] = i0
                ends[k] = i1
                coords[k, 0] = x0
                coords[k, 1] = y0
                coords[k, 2] = x1
                coords[k, 3] = y1
                k += 1
    return starts, ends, coords


@njit(cache=True)
def geodesic_distance(region, sources):
    ny, nx = region.shape
    dist = np.full((ny, nx), -1, dtype=np.int32)
    queue = np.empty(ny * nx, dtype=np.int64)
    head = 0
    tail = 0
    for iy in range(ny):
        for ix in range(nx):
            if sources[iy, ix] != 0 and region[iy, ix] != 0:
                dist[iy, ix] = 0
                queue[tail] = iy * nx + ix
                tail += 1
    while head < tail:
        cur = queue[head]
        head += 1
        cy = cur // nx
        cx = cur % nx
        nd = dist[cy, cx] + 1
        for dy in range(-1, 2):
            for dx in range(-1, 2):
                yy = cy + dy
                xx = cx + dx
                if 0 <= yy < ny and 0 <= xx < nx:
                    if region[yy, xx] != 0 and dist[yy, xx] < 0:
                        dist[yy, xx] = nd
                        queue[tail] = yy * nx + xx
                        tail += 1
    return dist
