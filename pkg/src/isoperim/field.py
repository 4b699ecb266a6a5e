"""Grid-based signed distance fields and disk morphology.

The grid is a lattice of square cells; field values live at cell centers.
Erosion (inner parallel set), disk dilation, component counting, contour
extraction and the sub-cell area estimator all operate on this lattice.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import backend
from .domain import JordanDomain
from .errors import BudgetError, EmptyRegionError

DEFAULT_CELL_BUDGET = 50_000_000
_ISOF_MAGIC = b"ISOF1"


@dataclass(frozen=True)
class Grid:
    """Uniform square-cell grid. ``(x0, y0)`` is the lower-left corner of
    cell (0, 0); cell (ix, iy) has its center at (x0+(ix+.5)h, y0+(iy+.5)h)."""

    x0: float
    y0: float
    h: float
    nx: int
    ny: int

    @cached_property
    def xs(self) -> np.ndarray:
        v = self.x0 + (np.arange(self.nx) + 0.5) * self.h
        v.setflags(write=False)
        return v

    @cached_property
    def ys(self) -> np.ndarray:
        v = self.y0 + (np.arange(self.ny) + 0.5) * self.h
        v.setflags(write=False)
        return v

    @property
    def cells(self) -> int:
        return self.nx * self.ny

    @property
    def cell_area(self) -> float:
        return self.h * self.h

    @property
    def area(self) -> float:
        return self.cells * self.cell_area


@dataclass(frozen=True)
class ScalarField:
    """Signed distance to the domain boundary at every cell center
    (positive inside, negative outside)."""

    grid: Grid
    values: np.ndarray
    domain: JordanDomain

    def __post_init__(self):
        self.values.setflags(write=False)

    def sample(self, points: np.ndarray) -> np.ndarray:
        return bilinear_sample(self.grid, self.values, points)


@dataclass(frozen=True)
class RegionMask:
    """Fractional cell occupancy of a planar set on a grid."""

    grid: Grid
    occupancy: np.ndarray
    provenance: str = ""
    r: float | None = None
    degenerate: bool = False

    def __post_init__(self):
        self.occupancy.setflags(write=False)


def _make_grid(d: JordanDomain, h: float) -> Grid:
    xmin, ymin, xmax, ymax = d.bbox
    w, bh = xmax - xmin, ymax - ymin
    # Padding of half the short bbox side always dominates the inradius,
    # so disk dilations up to the inradius never reach the grid border.
    pad = 0.5 * min(w, bh) + 2.0 * h
    nx = int(np.ceil((w + 2 * pad) / h)) + 1
    ny = int(np.ceil((bh + 2 * pad) / h)) + 1
    return Grid(x0=xmin - pad, y0=ymin - pad, h=h, nx=nx, ny=ny)


def auto_spacing(d: JordanDomain) -> float:
    xmin, ymin, xmax, ymax = d.bbox
    return min(xmax - xmin, ymax - ymin) / 400.0


def build_distance_field(
    d: JordanDomain, h: float, cell_budget: int = DEFAULT_CELL_BUDGET
) -> ScalarField:
    """Exact signed distance to the polygon boundary at every cell center.

    Every value is the true minimum distance over all edges (no sweeping
    approximation); the sign comes from even-odd parity.
    """
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    grid = _make_grid(d, h)
    if grid.cells > cell_budget:
        raise BudgetError(
            f"grid of {grid.nx}x{grid.ny} = {grid.cells} cells exceeds the "
            f"budget of {cell_budget}"
        )
    if backend.backend_name() == "numpy" and grid.cells > 500_000:
        warnings.warn(
            "large grid on the numpy fallback backend; expect long runtimes",
            RuntimeWarning,
            stacklevel=2,
        )
    verts = d.vertices
    ex0 = np.ascontiguousarray(verts[:, 0])
    ey0 = np.ascontiguousarray(verts[:, 1])
    ex1 = np.ascontiguousarray(np.roll(verts[:, 0], -1))
    ey1 = np.ascontiguousarray(np.roll(verts[:, 1], -1))
    values = backend.kernels().signed_distance_grid(
        np.asarray(grid.xs), np.asarray(grid.ys), ex0, ey0, ex1, ey1
    )
    return ScalarField(grid=grid, values=values, domain=d)


def inradius(f: ScalarField) -> float:
    """Largest inscribed-disk radius, from the field maximum plus one
    interpolation step around the argmax cell; accurate to O(h).

    The distance field peaks as a tent along any line through the deepest
    point, so the peak of the line through samples (b, v0, a) sits at
    v0 + (a - b)/2; scanning the two grid axes and both diagonals and
    taking the largest correction is exact for axis-aligned ridge crests.
    """
    v = f.values
    ny, nx = v.shape
    iy, ix = np.unravel_index(int(np.argmax(v)), v.shape)
    v0 = float(v[iy, ix])
    add = 0.0
    for dy, dx in ((0, 1), (1, 0), (1, 1), (1, -1)):
        ym, xm = iy - dy, ix - dx
        yp, xp = iy + dy, ix + dx
        if not (0 <= ym < ny and 0 <= yp < ny and 0 <= xm < nx and 0 <= xp < nx):
            continue
        lo = min(float(v[ym, xm]), float(v[yp, xp]))
        hi = max(float(v[ym, xm]), float(v[yp, xp]))
        add = max(add, 0.5 * (hi - lo))
    # a 1-Lipschitz field cannot peak more than ~0.71 h above a cell center
    return v0 + min(add, 0.71 * f.grid.h)


def inner_parallel_mask(f: ScalarField, r: float) -> RegionMask:
    """Erosion of the domain by a disk of radius r, with sub-cell
    occupancy clamp((v - r)/h + 1/2, 0, 1) per cell."""
    if r <= 0:
        raise ValueError("erosion radius must be positive")
    h = f.grid.h
    occ = np.clip((f.values - r) / h + 0.5, 0.0, 1.0)
    degenerate = not bool((f.values >= r).any())
    return RegionMask(
        grid=f.grid,
        occupancy=occ,
        provenance=f"inner_parallel r={r!r}",
        r=r,
        degenerate=degenerate,
    )


def mask_measure(m: RegionMask) -> float:
    return float(m.occupancy.sum()) * m.grid.cell_area


def thresholded(m: RegionMask, threshold: float = 0.5) -> np.ndarray:
    return (m.occupancy >= threshold).astype(np.uint8)


def connected_components(m: RegionMask, threshold: float = 0.5):
    """8-connected labeling of cells with occupancy >= threshold.

    Returns (count, labels); labels are 1..count, 0 = background.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    return backend.kernels().label_components(thresholded(m, threshold))


def mask_distance(m: RegionMask, threshold: float = 0.5) -> np.ndarray:
    """Euclidean distance (length units) from every cell center to the
    nearest thresholded cell center, via the exact two-pass squared EDT."""
    cells = thresholded(m, threshold)
    if not cells.any():
        raise EmptyRegionError("mask has no cells above the threshold")
    f0 = np.where(cells != 0, 0.0, 1e30)
    d2, _, _ = backend.kernels().distance_transform(f0)
    return np.sqrt(np.maximum(d2, 0.0)) * m.grid.h


def dilate_by_disk(
    m: RegionMask,
    r: float,
    threshold: float = 0.5,
    field: ScalarField | None = None,
    seed_cells: np.ndarray | None = None,
) -> RegionMask:
    """Dilation {x : dist(x, m) <= r} with sub-cell occupancy at level r.

    The plain path measures the exact Euclidean distance transform of the
    thresholded mask. When ``field`` is supplied and the mask is an
    erosion of it, seed cells carry their inscribed radius as a weight
    (every seed y contributes the inscribed ball of radius v(y)); the
    resulting set is identical in the continuum and the cell-size bias of
    the reconstructed boundary drops from O(h) to O(h^2).
    """
    if r < 0:
        raise ValueError("dilation radius must be nonnegative")
    cells = seed_cells if seed_cells is not None else thresholded(m, threshold)
    if not cells.any():
        raise EmptyRegionError("cannot dilate an empty mask")
    grid = m.grid
    h = grid.h
    kern = backend.kernels()
    if field is None:
        f0 = np.where(cells != 0, 0.0, 1e30)
        d2, _, _ = kern.distance_transform(f0)
        d = np.sqrt(np.maximum(d2, 0.0)) * h
        occ = np.clip((r - d) / h + 0.5, 0.0, 1.0)
    else:
        w = np.maximum(field.values, 0.0) / h  # inscribed radii in cell units
        f0 = np.where(cells != 0, -(w * w), 1e30)
        _, wy, wx = kern.distance_transform(f0)
        iy, ix = np.indices(cells.shape)
        dy = (iy - wy).astype(np.float64)
        dx = (ix - wx).astype(np.float64)
        phi = w[wy, wx] - np.hypot(dx, dy)  # cell units, zero level on the boundary
        occ = np.clip(phi + 0.5, 0.0, 1.0)
    return RegionMask(
        grid=grid,
        occupancy=occ,
        provenance=f"dilation r={r!r} of [{m.provenance}]",
        r=r,
    )


# -- contours ----------------------------------------------------------------


def extract_contours(obj, level: float) -> list[np.ndarray]:
    """Closed marching-squares isolines of a field or mask at the given
    level, oriented counterclockwise around the >= level region. Each
    polyline repeats its first point at the end. Returns [] when the
    level is outside the value range."""
    if isinstance(obj, ScalarField):
        values, grid = obj.values, obj.grid
    elif isinstance(obj, RegionMask):
        values, grid = obj.occupancy, obj.grid
    else:
        raise TypeError("extract_contours expects a ScalarField or RegionMask")
    vmin, vmax = float(values.min()), float(values.max())
    if not vmin <= level <= vmax:
        return []
    starts, ends, coords = backend.kernels().marching_segments(
        values, float(level), np.asarray(grid.xs), np.asarray(grid.ys)
    )
    return _stitch(starts, ends, coords)


def _stitch(starts, ends, coords) -> list[np.ndarray]:
    n = len(starts)
    if n == 0:
        return []
    index = {int(s): i for i, s in enumerate(starts)}
    used = np.zeros(n, dtype=bool)
    loops = []
    for k0 in range(n):
        if used[k0]:
            continue
        chain = [k0]
        used[k0] = True
        cur = int(ends[k0])
        closed = False
        while True:
            nxt = index.get(cur, -1)
            if nxt < 0:
                break
            if nxt == k0:
                closed = True
                break
            if used[nxt]:
                break
            chain.append(nxt)
            used[nxt] = True
            cur = int(ends[nxt])
        if not closed or len(chain) < 3:
            continue
        pts = np.empty((len(chain) + 1, 2))
        for i, k in enumerate(chain):
            pts[i, 0] = coords[k, 0]
            pts[i, 1] = coords[k, 1]
        pts[-1] = pts[0]
        loops.append(pts)
    return loops


def polyline_length(pts: np.ndarray) -> float:
    diffs = np.diff(pts, axis=0)
    return float(np.hypot(diffs[:, 0], diffs[:, 1]).sum())


def bilinear_sample(grid: Grid, values: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Bilinear interpolation of cell-center values at arbitrary points."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    gx = (pts[:, 0] - grid.x0) / grid.h - 0.5
    gy = (pts[:, 1] - grid.y0) / grid.h - 0.5
    ix = np.clip(np.floor(gx).astype(np.int64), 0, grid.nx - 2)
    iy = np.clip(np.floor(gy).astype(np.int64), 0, grid.ny - 2)
    tx = np.clip(gx - ix, 0.0, 1.0)
    ty = np.clip(gy - iy, 0.0, 1.0)
    v00 = values[iy, ix]
    v10 = values[iy, ix + 1]
    v01 = values[iy + 1, ix]
    v11 = values[iy + 1, ix + 1]
    return (
        v00 * (1 - tx) * (1 - ty)
        + v10 * tx * (1 - ty)
        + v01 * (1 - tx) * ty
        + v11 * tx * ty
    )


# -- portable binary dump ----------------------------------------------------


def write_isof(path, obj) -> None:
    """Dump a field or mask as a little-endian binary grid.

    Layout: magic "ISOF1", nx, ny as int64, x0, y0, h as float64, then
    row-major (x fastest) float64 values.
    """
    if isinstance(obj, ScalarField):
        values, grid = obj.values, obj.grid
    elif isinstance(obj, RegionMask):
        values, grid = obj.occupancy, obj.grid
    else:
        raise TypeError("write_isof expects a ScalarField or RegionMask")
    with open(path, "wb") as fh:
        fh.write(_ISOF_MAGIC)
        fh.write(struct.pack("<qq", grid.nx, grid.ny))
        fh.write(struct.pack("<ddd", grid.x0, grid.y0, grid.h))
        fh.write(np.ascontiguousarray(values, dtype="<f8").tobytes())


def read_isof(path) -> tuple[Grid, np.ndarray]:
    with open(path, "rb") as fh:
        magic = fh.read(5)
        if magic != _ISOF_MAGIC:
            raise ValueError(f"not an ISOF1 file: magic {magic!r}")
        nx, ny = struct.unpack("<qq", fh.read(16))
        x0, y0, h = struct.unpack("<ddd", fh.read(24))
        raw = fh.read(nx * ny * 8)
        if len(raw) != nx * ny * 8:
            raise ValueError("truncated ISOF1 file")
        values = np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(ny, nx)
    return Grid(x0=x0, y0=y0, h=h, nx=nx, ny=ny), values
