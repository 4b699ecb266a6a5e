"""Constant-curvature minimizers built from the distance field.

For curvature kappa = 1/r the largest minimizer of the energy
P(E) - kappa|E| is the eroded core dilated back by the same disk. Its
area, boundary length and energy follow from the tube (Steiner) identity
|core + disk| = |core| + r * M + pi r^2, P = M + 2 pi r, where M is the
outer Minkowski content of the core; M is recovered from the measured
areas rather than from raster arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import EmptyRegionError, NeckViolationError
from .field import (
    RegionMask,
    ScalarField,
    bilinear_sample,
    dilate_by_disk,
    extract_contours,
    inner_parallel_mask,
    inradius,
    mask_measure,
    polyline_length,
    thresholded,
)


@dataclass(frozen=True)
class SweepSample:
    """One point of the curvature sweep. ``dual_value`` is
    kappa*volume - perimeter, whose convex conjugate over kappa rebuilds
    the isoperimetric profile."""

    r: float
    kappa: float
    inner_area: float
    volume: float
    mink_content: float
    perimeter: float
    dual_value: float
    components: int
    degenerate_core: bool = False
    inball: bool = False


@dataclass(frozen=True)
class ArcInfo:
    length: float
    fitted_radius: float
    n_points: int


@dataclass
class MinimizerReport:
    sample: SweepSample
    contours: list
    arcs: list
    pass_rate: float
    family: bool = False

    def to_json_dict(self) -> dict:
        main = max(self.contours, key=len) if self.contours else np.empty((0, 2))
        doc = {
            "r": self.sample.r,
            "kappa": self.sample.kappa,
            "volume": self.sample.volume,
            "perimeter": self.sample.perimeter,
            "contour": [[float(x), float(y)] for x, y in main],
            "arcs": [
                {"length": a.length, "fitted_radius": a.fitted_radius}
                for a in self.arcs
            ],
            "pass_rate": self.pass_rate,
            "family": self.family,
        }
        if len(self.contours) > 1:
            doc["extra_contours"] = [
                [[float(x), float(y)] for x, y in c]
                for c in self.contours
                if c is not main
            ]
        return doc


def resolve_radius(r: float | None = None, kappa: float | None = None) -> tuple[float, float]:
    """Accept either a radius or a curvature; return (r, kappa) with
    kappa = 1/r."""
    if (r is None) == (kappa is None):
        raise ValueError("specify exactly one of r and kappa")
    if r is None:
        if kappa <= 0:
            raise ValueError("kappa must be positive")
        r = 1.0 / kappa
    else:
        if r <= 0:
            raise ValueError("r must be positive")
        kappa = 1.0 / r
    return float(r), float(kappa)


def _core_seeds(f: ScalarField, r: float) -> tuple[np.ndarray, bool]:
    """Cells whose center lies in the eroded core. When the core is thin
    enough to fall between cell centers (r at the inradius), fall back to
    the crest band around the field maximum."""
    seeds = (f.values >= r).astype(np.uint8)
    if seeds.any():
        return seeds, False
    h = f.grid.h
    vmax = float(f.values.max())
    if r > inradius(f) + h:
        raise EmptyRegionError(f"inner set at r={r} is empty (r exceeds the inradius)")
    seeds = (f.values >= vmax - 0.5 * h).astype(np.uint8)
    return seeds, True


def _check_connected(seeds: np.ndarray, r: float) -> int:
    count, _ = backend.kernels().label_components(seeds)
    if count == 0:
        raise EmptyRegionError(f"inner set at r={r} is empty")
    if count > 1:
        raise NeckViolationError(
            f"inner set at r={r} has {count} components; the domain has a "
            f"neck at this radius"
        )
    return count


def sweep_sample(f: ScalarField, r: float | None = None, kappa: float | None = None) -> SweepSample:
    """Measure the maximal minimizer at curvature 1/r and solve the tube
    identity for its Minkowski content. Refuses disconnected cores."""
    r, kappa = resolve_radius(r, kappa)
    if r > inradius(f) + f.grid.h:
        raise ValueError(f"r={r} exceeds the measured inradius {inradius(f)}")
    inner = inner_parallel_mask(f, r)
    seeds, degen = _core_seeds(f, r)
    ncomp = _check_connected(seeds, r)
    dilated = dilate_by_disk(inner, r, field=f, seed_cells=seeds)
    area_inner = mask_measure(inner)
    volume = mask_measure(dilated)
    mink = (volume - area_inner - math.pi * r * r) / r
    perimeter = mink + 2.0 * math.pi * r
    return SweepSample(
        r=r,
        kappa=kappa,
        inner_area=area_inner,
        volume=volume,
        mink_content=mink,
        perimeter=perimeter,
        dual_value=kappa * volume - perimeter,
        components=ncomp,
        degenerate_core=degen,
    )


def inball_sample(f: ScalarField) -> SweepSample:
    """Exact sample at the inradius: the inscribed ball is a minimizer of
    least area there, so area, perimeter and dual value are analytic."""
    rhat = inradius(f)
    seeds, _ = _core_seeds(f, rhat)
    ncomp = _check_connected(seeds, rhat)
    return SweepSample(
        r=rhat,
        kappa=1.0 / rhat,
        inner_area=0.0,
        volume=math.pi * rhat * rhat,
        mink_content=0.0,
        perimeter=2.0 * math.pi * rhat,
        dual_value=-math.pi * rhat,
        components=ncomp,
        degenerate_core=True,
        inball=True,
    )


def curvature_energy(sample: SweepSample, kappa: float) -> float:
    """Perimeter minus kappa times area for the sampled set."""
    return sample.perimeter - kappa * sample.volume


def _sample_from_mask(
    f: ScalarField, r: float, inner_area: float, mask: RegionMask, ncomp: int, degen: bool
) -> SweepSample:
    kappa = 1.0 / r
    volume = mask_measure(mask)
    mink = (volume - inner_area - math.pi * r * r) / r
    perimeter = mink + 2.0 * math.pi * r
    return SweepSample(
        r=r,
        kappa=kappa,
        inner_area=inner_area,
        volume=volume,
        mink_content=mink,
        perimeter=perimeter,
        dual_value=kappa * volume - perimeter,
        components=ncomp,
        degenerate_core=degen,
    )


def maximal_minimizer(
    f: ScalarField, r: float | None = None, kappa: float | None = None, arc_tol: float | None = None
) -> MinimizerReport:
    """Largest constant-curvature minimizer: eroded core dilated by r.
    Reports the contour, free-boundary arcs and the arc distance check."""
    r, kappa = resolve_radius(r, kappa)
    if r > inradius(f) + f.grid.h:
        raise ValueError(f"r={r} exceeds the measured inradius {inradius(f)}")
    inner = inner_parallel_mask(f, r)
    seeds, degen = _core_seeds(f, r)
    ncomp = _check_connected(seeds, r)
    dilated = dilate_by_disk(inner, r, field=f, seed_cells=seeds)
    sample = _sample_from_mask(f, r, mask_measure(inner), dilated, ncomp, degen)
    contours = extract_contours(dilated, 0.5)
    tol = 2.0 * f.grid.h if arc_tol is None else arc_tol
    arcs, pass_rate = _arc_analysis(f, r, contours, seeds, tol)
    return MinimizerReport(
        sample=sample, contours=contours, arcs=arcs, pass_rate=pass_rate
    )


def _opened_cells(f: ScalarField, r: float, delta: float) -> np.ndarray:
    """Morphological opening of the eroded core by a disk of radius delta
    (erode then dilate), used to drop zero-width branches.

    Center-to-center distances overstate the distance to a cell region by
    half a cell, so both thresholds carry a +h/2 offset; without it the
    opening grows the set by one cell per pass.
    """
    seeds, _ = _core_seeds(f, r)
    kern = backend.kernels()
    h = f.grid.h
    comp = (seeds == 0).astype(np.uint8)
    if not comp.any():
        return seeds
    f0 = np.where(comp != 0, 0.0, 1e30)
    d2, _, _ = kern.distance_transform(f0)
    core = (np.sqrt(np.maximum(d2, 0.0)) * h >= delta + 0.5 * h).astype(np.uint8)
    if not core.any():
        return core
    f1 = np.where(core != 0, 0.0, 1e30)
    d2b, _, _ = kern.distance_transform(f1)
    return (np.sqrt(np.maximum(d2b, 0.0)) * h <= delta + 0.5 * h).astype(np.uint8)


def _deepest_cell(f: ScalarField, seeds: np.ndarray) -> np.ndarray:
    masked = np.where(seeds != 0, f.values, -np.inf)
    iy, ix = np.unravel_index(int(np.argmax(masked)), masked.shape)
    out = np.zeros_like(seeds)
    out[iy, ix] = 1
    return out


def minimal_minimizer(
    f: ScalarField, r: float | None = None, kappa: float | None = None, arc_tol: float | None = None
) -> MinimizerReport:
    """Smallest constant-curvature minimizer: the core is opened by a
    two-cell disk before dilation, which removes zero-width tendrils."""
    r, kappa = resolve_radius(r, kappa)
    if r > inradius(f) + f.grid.h:
        raise ValueError(f"r={r} exceeds the measured inradius {inradius(f)}")
    inner = inner_parallel_mask(f, r)
    seeds, degen = _core_seeds(f, r)
    ncomp = _check_connected(seeds, r)
    opened = _opened_cells(f, r, 2.0 * f.grid.h)
    if not opened.any():
        # The whole core is thinner than the opening disk: it has no
        # representable interior, and the smallest minimizer is a single
        # inscribed ball centered at the deepest point.
        opened = _deepest_cell(f, seeds)
    dilated = dilate_by_disk(inner, r, seed_cells=opened)
    core_occ = inner.occupancy * (opened != 0)
    inner_area = float(core_occ.sum()) * f.grid.cell_area
    sample = _sample_from_mask(f, r, inner_area, dilated, ncomp, degen)
    contours = extract_contours(dilated, 0.5)
    tol = 2.0 * f.grid.h if arc_tol is None else arc_tol
    arcs, pass_rate = _arc_analysis(f, r, contours, opened, tol)
    return MinimizerReport(
        sample=sample, contours=contours, arcs=arcs, pass_rate=pass_rate
    )


def minimizer_volume_gap(f: ScalarField, r: float | None = None, kappa: float | None = None) -> tuple[float, float]:
    """(minimal volume, maximal volume) at the given curvature."""
    r, _ = resolve_radius(r, kappa)
    vmin = minimal_minimizer(f, r=r).sample.volume
    vmax = maximal_minimizer(f, r=r).sample.volume
    return vmin, vmax


def has_tendrils(f: ScalarField, r: float | None = None, kappa: float | None = None) -> bool:
    """Volume-gap test for zero-width core branches. Branches of exactly
    one cell width aligned to the grid can evade it."""
    r, _ = resolve_radius(r, kappa)
    vmin, vmax = minimizer_volume_gap(f, r=r)
    dom = f.domain
    return (vmax - vmin) > 10.0 * f.grid.h * (1.0 + dom.perimeter)


def volume_matched_minimizer(
    f: ScalarField, target_volume: float, r: float | None = None, kappa: float | None = None
) -> MinimizerReport:
    """Minimizer of the given curvature with area closest to the target.

    When minimal and maximal minimizers differ, the one-parameter family
    between them is scanned by growing the core outward from its opened
    part (geodesically within the core) and bisecting the growth depth.
    """
    r, kap = resolve_radius(r, kappa)
    max_rep = maximal_minimizer(f, r=r)
    min_rep = minimal_minimizer(f, r=r)
    vmax = max_rep.sample.volume
    vmin = min_rep.sample.volume
    gap_tol = 10.0 * f.grid.h * (1.0 + f.domain.perimeter)
    if vmax - vmin <= gap_tol:
        return max_rep
    if target_volume >= vmax:
        max_rep.family = True
        return max_rep
    if target_volume <= vmin:
        min_rep.family = True
        return min_rep

    seeds, degen = _core_seeds(f, r)
    opened = _opened_cells(f, r, 2.0 * f.grid.h)
    if not opened.any():
        opened = _deepest_cell(f, seeds)
    dist = backend.kernels().geodesic_distance(seeds, opened)
    reachable = dist[dist >= 0]
    inner = inner_parallel_mask(f, r)

    def volume_at(depth: int):
        sel = ((dist >= 0) & (dist <= depth)).astype(np.uint8)
        mask = dilate_by_disk(inner, r, seed_cells=sel)
        return mask_measure(mask), mask, sel

    lo, hi = 0, int(reachable.max())
    state_lo = volume_at(lo)
    state_hi = volume_at(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        state_mid = volume_at(mid)
        if state_mid[0] < target_volume:
            lo, state_lo = mid, state_mid
        else:
            hi, state_hi = mid, state_mid
    if abs(state_hi[0] - target_volume) <= abs(state_lo[0] - target_volume):
        volume, mask, chosen = state_hi
    else:
        volume, mask, chosen = state_lo

    # Along the family the energy is constant, so the perimeter moves
    # linearly with the volume from the measured maximal sample.
    perimeter = max_rep.sample.perimeter + kap * (volume - vmax)
    mink = perimeter - 2.0 * math.pi * r
    sample = SweepSample(
        r=r,
        kappa=kap,
        inner_area=volume - r * mink - math.pi * r * r,
        volume=volume,
        mink_content=mink,
        perimeter=perimeter,
        dual_value=kap * volume - perimeter,
        components=max_rep.sample.components,
        degenerate_core=degen,
    )
    contours = extract_contours(mask, 0.5)
    # free arcs of a family member wrap its own core subset
    arcs, pass_rate = _arc_analysis(f, r, contours, chosen, 2.0 * f.grid.h)
    return MinimizerReport(
        sample=sample, contours=contours, arcs=arcs, pass_rate=pass_rate, family=True
    )


# -- free-boundary arc verification -------------------------------------------


def _circumradius(p1, p2, p3) -> float:
    a = math.hypot(p2[0] - p3[0], p2[1] - p3[1])
    b = math.hypot(p1[0] - p3[0], p1[1] - p3[1])
    c = math.hypot(p1[0] - p2[0], p1[1] - p2[1])
    cross = (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p2[1] - p1[1]) * (p3[0] - p1[0])
    if abs(cross) < 1e-300:
        return math.inf
    return a * b * c / (2.0 * abs(cross))


def _cyclic_runs(flags: np.ndarray) -> list[np.ndarray]:
    """Index runs of True in a cyclic sequence."""
    n = len(flags)
    if n == 0:
        return []
    if flags.all():
        return [np.arange(n)]
    if not flags.any():
        return []
    # rotate so position 0 is False, then take linear runs
    start = int(np.argmin(flags))
    rot = np.roll(flags, -start)
    runs = []
    i = 0
    while i < n:
        if rot[i]:
            j = i
            while j < n and rot[j]:
                j += 1
            runs.append((np.arange(i, j) + start) % n)
            i = j
        else:
            i += 1
    return runs


def _arc_analysis(f: ScalarField, r: float, contours, seed_cells, tol: float):
    """Split contours into free-boundary arcs (strictly inside the domain)
    and check each against the expected circle of radius r."""
    h = f.grid.h
    if not seed_cells.any():
        return [], 1.0
    f0 = np.where(seed_cells != 0, 0.0, 1e30)
    d2, _, _ = backend.kernels().distance_transform(f0)
    dist_grid = np.sqrt(np.maximum(d2, 0.0)) * h
    arcs = []
    n_free = 0
    n_pass = 0
    for loop in contours:
        pts = loop[:-1]  # drop the closing repeat; treat cyclically
        if len(pts) < 3:
            continue
        vvals = bilinear_sample(f.grid, f.values, pts)
        free = vvals > h
        for run in _cyclic_runs(free):
            seg = pts[run]
            if len(seg) < 2:
                n_free += len(seg)
                d = bilinear_sample(f.grid, dist_grid, seg)
                n_pass += int(np.sum(np.abs(d - r) <= tol))
                continue
            length = polyline_length(seg)
            d = bilinear_sample(f.grid, dist_grid, seg)
            n_free += len(seg)
            n_pass += int(np.sum(np.abs(d - r) <= tol))
            fitted = _fit_radius(seg)
            arcs.append(ArcInfo(length=length, fitted_radius=fitted, n_points=len(seg)))
    pass_rate = 1.0 if n_free == 0 else n_pass / n_free
    return arcs, pass_rate


def _fit_radius(seg: np.ndarray, spacing: int = 5) -> float:
    """Median three-point circumradius over triples spaced >= 5 samples
    apart; nan when the arc is too short to fit."""
    n = len(seg)
    if n < 2 * spacing + 1:
        return float("nan")
    radii = []
    for i in range(0, n - 2 * spacing):
        radii.append(_circumradius(seg[i], seg[i + spacing], seg[i + 2 * spacing]))
    return float(np.median(radii))


@dataclass(frozen=True)
class ArcCheckReport:
    ok: bool
    pass_rate: float
    n_arcs: int
    radius_violations: int
    length_violations: int
    max_arc_length: float


def verify_arc_property(rep: MinimizerReport, f: ScalarField, tol: float) -> ArcCheckReport:
    """Check the structure of the free boundary: every point at distance
    r from the core within tol, fitted radii within 5 percent of r, and
    no arc longer than pi*r plus tol."""
    r = rep.sample.r
    seeds, _ = _core_seeds(f, r)
    arcs, pass_rate = _arc_analysis(f, r, rep.contours, seeds, tol)
    radius_bad = sum(
        1
        for a in arcs
        if math.isfinite(a.fitted_radius) and abs(a.fitted_radius - r) > 0.05 * r
    )
    max_len = max((a.length for a in arcs), default=0.0)
    length_bad = sum(1 for a in arcs if a.length > math.pi * r + tol)
    ok = pass_rate >= 0.99 and radius_bad == 0 and length_bad == 0
    return ArcCheckReport(
        ok=ok,
        pass_rate=pass_rate,
        n_arcs=len(arcs),
        radius_violations=radius_bad,
        length_violations=length_bad,
        max_arc_length=max_len,
    )


def check_nestedness(f: ScalarField, r1: float, r2: float) -> int:
    """Count cells of the r1 minimizer missing from the r2 minimizer
    (r2 < r1), excluding a one-cell band around the larger boundary.
    Zero for nested minimizers."""
    if not 0 < r2 <= r1:
        raise ValueError("need 0 < r2 <= r1")
    if r1 == r2:
        return 0
    m1 = _minimizer_cells(f, r1)
    m2 = _minimizer_cells(f, r2)
    band = _boundary_band(m2)
    violations = (m1 != 0) & (m2 == 0) & (~band)
    return int(np.count_nonzero(violations))


def _minimizer_cells(f: ScalarField, r: float) -> np.ndarray:
    inner = inner_parallel_mask(f, r)
    seeds, _ = _core_seeds(f, r)
    _check_connected(seeds, r)
    dilated = dilate_by_disk(inner, r, field=f, seed_cells=seeds)
    return thresholded(dilated)


def _shifted(m: np.ndarray, dy: int, dx: int) -> np.ndarray:
    out = np.zeros_like(m)
    ys = slice(max(dy, 0), m.shape[0] + min(dy, 0))
    yd = slice(max(-dy, 0), m.shape[0] + min(-dy, 0))
    xs = slice(max(dx, 0), m.shape[1] + min(dx, 0))
    xd = slice(max(-dx, 0), m.shape[1] + min(-dx, 0))
    out[yd, xd] = m[ys, xs]
    return out


def _boundary_band(cells: np.ndarray) -> np.ndarray:
    """Cells whose 3x3 neighborhood mixes inside and outside, grown by
    one more cell."""
    m = cells != 0
    any_n = m.copy()
    all_n = m.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            s = _shifted(m, dy, dx)
            any_n |= s
            all_n &= s
    mixed = any_n & ~all_n
    grown = mixed.copy()
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            grown |= _shifted(mixed, dy, dx)
    return grown
