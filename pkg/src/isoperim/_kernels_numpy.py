"""Pure-numpy implementations of the grid kernels.

Semantics match ``_kernels_numba`` exactly; this path is the portable
fallback and the reference for backend-equivalence tests. The generalized
distance transform runs its 1-D lower-envelope passes in plain Python, so
it is only meant for moderate grids.
"""

from __future__ import annotations

import numpy as np

NAME = "numpy"

INF = 1e30
_INF_CUT = 1e29


def signed_distance_grid(xs, ys, ex0, ey0, ex1, ey1):
    """Signed distance from every grid node to the polygon boundary.

    Positive inside (even-odd parity), negative outside. Exact per node:
    the minimum over all edges of the point-segment distance.
    """
    X, Y = np.meshgrid(xs, ys)
    best = np.full(X.shape, np.inf)
    inside = np.zeros(X.shape, dtype=bool)
    for e in range(len(ex0)):
        x0, y0, x1, y1 = ex0[e], ey0[e], ex1[e], ey1[e]
        dx = x1 - x0
        dy = y1 - y0
        L2 = dx * dx + dy * dy
        t = ((X - x0) * dx + (Y - y0) * dy) / L2
        np.clip(t, 0.0, 1.0, out=t)
        px = X - (x0 + t * dx)
        py = Y - (y0 + t * dy)
        np.minimum(best, px * px + py * py, out=best)
        crosses = (y0 > Y) != (y1 > Y)
        if crosses.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = x0 + (Y - y0) * (dx / dy)
            inside ^= crosses & (X < xint)
    d = np.sqrt(best)
    return np.where(inside, d, -d)


def _dt1d(f):
    """1-D generalized squared distance transform.

    d[p] = min_q ((p-q)^2 + f[q]); also returns the argmin per p.
    Entries with f >= 1e29 are treated as absent sites.
    """
    n = len(f)
    d = [INF] * n
    arg = [-1] * n
    q0 = -1
    for q in range(n):
        if f[q] < _INF_CUT:
            q0 = q
            break
    if q0 < 0:
        return d, arg
    v = [0] * n
    z = [0.0] * (n + 1)
    k = 0
    v[0] = q0
    z[0] = -INF
    z[1] = INF
    for q in range(q0 + 1, n):
        fq = f[q]
        if fq >= _INF_CUT:
            continue
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
    return d, arg


def distance_transform(f0):
    """Generalized 2-D squared distance transform with witnesses.

    d2[i, j] = min over sites (a, b) of (i-a)^2 + (j-b)^2 + f0[a, b],
    in cell units. Non-sites carry f0 >= 1e29. Returns (d2, wy, wx) where
    (wy, wx) is the winning site for each cell (-1 if none).
    """
    ny, nx = f0.shape
    g = np.empty((ny, nx))
    argy = np.full((ny, nx), -1, dtype=np.int32)
    for ix in range(nx):
        d, a = _dt1d(f0[:, ix].tolist())
        g[:, ix] = d
        argy[:, ix] = a
    d2 = np.empty((ny, nx))
    wx = np.full((ny, nx), -1, dtype=np.int32)
    wy = np.full((ny, nx), -1, dtype=np.int32)
    for iy in range(ny):
        d, a = _dt1d(g[iy, :].tolist())
        d2[iy, :] = d
        aa = np.asarray(a, dtype=np.int32)
        wx[iy, :] = aa
        valid = aa >= 0
        wy[iy, valid] = argy[iy, aa[valid]]
    return d2, wy, wx


class _UnionFind:
    def __init__(self):
        self.parent = []

    def add(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, i):
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def label_components(mask):
    """8-connected labeling of a binary mask via row runs.

    Returns (count, labels) with labels in 1..count, 0 for background.
    """
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    ny, nx = mask.shape
    labels = np.zeros((ny, nx), dtype=np.int32)
    uf = _UnionFind()
    prev_runs: list[tuple[int, int, int]] = []
    all_runs = []
    for iy in range(ny):
        row = mask[iy]
        padded = np.empty(nx + 2, dtype=np.int8)
        padded[0] = padded[-1] = 0
        padded[1:-1] = row
        diff = np.diff(padded)
        starts = np.flatnonzero(diff == 1)
        ends = np.flatnonzero(diff == -1) - 1
        runs = []
        for s, e in zip(starts, ends):
            rid = uf.add()
            runs.append((int(s), int(e), rid))
            all_runs.append((iy, int(s), int(e), rid))
            for ps, pe, pid in prev_runs:
                if s <= pe + 1 and e >= ps - 1:
                    uf.union(pid, rid)
        prev_runs = runs
    roots = {}
    count = 0
    for iy, s, e, rid in all_runs:
        root = uf.find(rid)
        if root not in roots:
            count += 1
            roots[root] = count
        labels[iy, s : e + 1] = roots[root]
    return count, labels


# Marching-squares case table. Keys: case index from corner bits
# A=(iy,ix)->1, B=(iy,ix+1)->2, C=(iy+1,ix+1)->4, D=(iy+1,ix)->8, bit set
# when value >= level. Entries are (from_edge, to_edge) pairs with edges
# 'b','r','t','l', directed so the >= level region lies on the left.
_CASES = {
    1: [("b", "l")],
    2: [("r", "b")],
    3: [("r", "l")],
    4: [("t", "r")],
    6: [("t", "b")],
    7: [("t", "l")],
    8: [("l", "t")],
    9: [("b", "t")],
    11: [("r", "t")],
    12: [("l", "r")],
    13: [("b", "r")],
    14: [("l", "b")],
}
_SADDLE_IN = {5: [("b", "r"), ("t", "l")], 10: [("l", "b"), ("r", "t")]}
_SADDLE_OUT = {5: [("b", "l"), ("t", "r")], 10: [("r", "b"), ("l", "t")]}


def _edge_point(which, iy, ix, values, level, xs, ys, nx, ny):
    """Interpolated crossing point and global id of a cell edge.

    Interpolation always runs from the lower-index node so that the two
    cells sharing an edge produce bitwise identical points.
    """
    if which == "b":
        va, vb = values[iy, ix], values[iy, ix + 1]
        t = (level - va) / (vb - va)
        t = min(max(t, 1e-12), 1.0 - 1e-12)
        return iy * (nx - 1) + ix, xs[ix] * (1 - t) + xs[ix + 1] * t, ys[iy]
    if which == "t":
        va, vb = values[iy + 1, ix], values[iy + 1, ix + 1]
        t = (level - va) / (vb - va)
        t = min(max(t, 1e-12), 1.0 - 1e-12)
        return (iy + 1) * (nx - 1) + ix, xs[ix] * (1 - t) + xs[ix + 1] * t, ys[iy + 1]
    nh = ny * (nx - 1)
    if which == "l":
        va, vb = values[iy, ix], values[iy + 1, ix]
        t = (level - va) / (vb - va)
        t = min(max(t, 1e-12), 1.0 - 1e-12)
        return nh + iy * nx + ix, xs[ix], ys[iy] * (1 - t) + ys[iy + 1] * t
    va, vb = values[iy, ix + 1], values[iy + 1, ix + 1]
    t = (level - va) / (vb - va)
    t = min(max(t, 1e-12), 1.0 - 1e-12)
    return nh + iy * nx + ix + 1, xs[ix + 1], ys[iy] * (1 - t) + ys[iy + 1] * t


def marching_segments(values, level, xs, ys):
    """Oriented marching-squares segments of the given level set.

    Returns (start_ids, end_ids, coords) where coords rows are
    (x0, y0, x1, y1) and ids key the crossing points by grid edge.
    """
    ny, nx = values.shape
    inside = values >= level
    case = (
        inside[:-1, :-1].astype(np.int8)
        + 2 * inside[:-1, 1:]
        + 4 * inside[1:, 1:]
        + 8 * inside[1:, :-1]
    )
    cells = np.argwhere((case != 0) & (case != 15))
    starts, ends, coords = [], [], []
    for iy, ix in cells:
        c = int(case[iy, ix])
        if c in (5, 10):
            center = 0.25 * (
                values[iy, ix]
                + values[iy, ix + 1]
                + values[iy + 1, ix]
                + values[iy + 1, ix + 1]
            )
            segs = _SADDLE_IN[c] if center >= level else _SADDLE_OUT[c]
        else:
            segs = _CASES[c]
        for e_from, e_to in segs:
            i0, x0, y0 = _edge_point(e_from, iy, ix, values, level, xs, ys, nx, ny)
            i1, x1, y1 = _edge_point(e_to, iy, ix, values, level, xs, ys, nx, ny)
            starts.append(i0)
            ends.append(i1)
            coords.append((x0, y0, x1, y1))
    if not starts:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty((0, 4)),
        )
    return (
        np.asarray(starts, dtype=np.int64),
        np.asarray(ends, dtype=np.int64),
        np.asarray(coords, dtype=np.float64),
    )


def geodesic_distance(region, sources):
    """Integer BFS distance (8-connected) within ``region`` from ``sources``.

    Cells outside the region or unreachable get -1.
    """
    region = np.ascontiguousarray(region, dtype=np.uint8)
    dist = np.full(region.shape, -1, dtype=np.int32)
    frontier = (sources != 0) & (region != 0)
    dist[frontier] = 0
    step = 0
    while frontier.any():
        step += 1
        grown = np.zeros_like(frontier)
        grown[1:, :] |= frontier[:-1, :]
        grown[:-1, :] |= frontier[1:, :]
        grown[:, 1:] |= frontier[:, :-1]
        grown[:, :-1] |= frontier[:, 1:]
        grown[1:, 1:] |= frontier[:-1, :-1]
        grown[1:, :-1] |= frontier[:-1, 1:]
        grown[:-1, 1:] |= frontier[1:, :-1]
        grown[:-1, :-1] |= frontier[1:, 1:]
        grown &= region != 0
        grown &= dist < 0
        dist[grown] = step
        frontier = grown
    return dist
