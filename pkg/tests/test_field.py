import math

import numpy as np
import pytest

from isoperim import (
    BudgetError,
    EmptyRegionError,
    RegionMask,
    build_distance_field,
    connected_components,
    dilate_by_disk,
    extract_contours,
    inner_parallel_mask,
    inradius,
    mask_measure,
    polyline_length,
    read_isof,
    shapes,
    write_isof,
)

PI = math.pi


def _brute_distance(p, verts):
    best = math.inf
    n = len(verts)
    for i in range(n):
        a = verts[i]
        b = verts[(i + 1) % n]
        d = b - a
        t = float(np.dot(p - a, d) / np.dot(d, d))
        t = min(max(t, 0.0), 1.0)
        best = min(best, float(np.hypot(*(p - (a + t * d)))))
    return best


def test_distance_exact_against_brute_force(cross4_field):
    f = cross4_field
    rng = np.random.default_rng(7)
    verts = f.domain.vertices
    iys = rng.integers(0, f.grid.ny, size=1000)
    ixs = rng.integers(0, f.grid.nx, size=1000)
    for iy, ix in zip(iys, ixs):
        p = np.array([f.grid.xs[ix], f.grid.ys[iy]])
        assert abs(abs(f.values[iy, ix]) - _brute_distance(p, verts)) < 1e-12


def test_distance_sign(rect4_field):
    f = rect4_field
    assert f.sample([[2.0, 1.0]])[0] > 0.9
    assert f.sample([[-0.5, 1.0]])[0] < -0.4
    assert f.sample([[2.0, 2.5]])[0] < -0.4


def test_lipschitz_between_adjacent_cells(cross4_field):
    v = cross4_field.values
    h = cross4_field.grid.h
    assert np.abs(np.diff(v, axis=0)).max() <= h + 1e-9
    assert np.abs(np.diff(v, axis=1)).max() <= h + 1e-9


@pytest.mark.parametrize(
    "maker,expected",
    [
        (lambda: shapes.make_rectangle(4.0), 1.0),
        (lambda: JD_unit_square(), 0.5),
        (lambda: shapes.make_cross(4.0), math.sqrt(2.0)),
    ],
)
def test_inradius(maker, expected):
    dom = maker()
    h = 1.0 / 50.0
    f = build_distance_field(dom, h)
    assert abs(inradius(f) - expected) <= h


def JD_unit_square():
    from isoperim import JordanDomain

    return JordanDomain(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))


def test_erosion_matches_rectangle_formula(rect4_field):
    f = rect4_field
    h = f.grid.h
    for r in np.arange(0.1, 0.95, 0.1):
        got = mask_measure(inner_parallel_mask(f, r))
        exact = (2 - 2 * r) * (4 - 2 * r)
        assert abs(got - exact) <= 3 * h * 12.0


def test_erosion_monotone_cellwise(rect4_field):
    m1 = inner_parallel_mask(rect4_field, 0.3)
    m2 = inner_parallel_mask(rect4_field, 0.5)
    assert np.all(m2.occupancy <= m1.occupancy + 1e-15)


def test_erosion_small_radius_approaches_area(rect4_field):
    h = rect4_field.grid.h
    r = 2 * h
    got = mask_measure(inner_parallel_mask(rect4_field, r))
    assert abs(got - (2 - 2 * r) * (4 - 2 * r)) <= 3 * h * 12.0
    assert got <= 8.0


def test_erosion_at_inradius_degenerates(rect4_field):
    m = inner_parallel_mask(rect4_field, 1.0)
    assert mask_measure(m) < 0.1
    m2 = inner_parallel_mask(rect4_field, 1.05)
    assert m2.degenerate
    assert mask_measure(m2) == 0.0


def test_mask_measure_full_grid(rect4_field):
    g = rect4_field.grid
    ones = RegionMask(grid=g, occupancy=np.ones((g.ny, g.nx)), provenance="full")
    assert mask_measure(ones) == pytest.approx(g.area, rel=1e-12)


def test_components_convex(rect4_field):
    for r in (0.1, 0.4, 0.8):
        count, _ = connected_components(inner_parallel_mask(rect4_field, r))
        assert count == 1


def test_components_dumbbell(dumbbell_field):
    count, labels = connected_components(inner_parallel_mask(dumbbell_field, 0.5))
    assert count == 2
    assert labels.max() == 2
    count, _ = connected_components(inner_parallel_mask(dumbbell_field, 0.05))
    assert count == 1


def test_components_threshold_validation(rect4_field):
    with pytest.raises(ValueError):
        connected_components(inner_parallel_mask(rect4_field, 0.5), threshold=1.5)


def _point_seed_mask(grid, x, y):
    occ = np.zeros((grid.ny, grid.nx))
    ix = int(round((x - grid.x0) / grid.h - 0.5))
    iy = int(round((y - grid.y0) / grid.h - 0.5))
    occ[iy, ix] = 1.0
    return RegionMask(grid=grid, occupancy=occ, provenance="seed")


def test_dilation_point_seed_gives_disk(rect4_field):
    g = rect4_field.grid
    h = g.h
    r = 0.3
    m = dilate_by_disk(_point_seed_mask(g, 2.0, 1.0), r)
    assert mask_measure(m) == pytest.approx(PI * r * r, abs=3 * PI * r * h)


def test_dilation_segment_seed_gives_stadium(rect4_field):
    g = rect4_field.grid
    h = g.h
    occ = np.zeros((g.ny, g.nx))
    iy = int(round((1.0 - g.y0) / h - 0.5))
    ix0 = int(round((1.0 - g.x0) / h - 0.5))
    ix1 = int(round((3.0 - g.x0) / h - 0.5))
    occ[iy, ix0 : ix1 + 1] = 1.0
    seg_len = (ix1 - ix0) * h
    r = 0.5
    m = dilate_by_disk(RegionMask(grid=g, occupancy=occ, provenance="seg"), r)
    expect = 2 * seg_len * r + PI * r * r
    assert mask_measure(m) == pytest.approx(expect, abs=4 * h * (2 * seg_len + 2 * PI * r))


def test_dilation_of_erosion_stays_inside_domain(rect4_field):
    f = rect4_field
    h = f.grid.h
    for weighted in (True, False):
        m = dilate_by_disk(
            inner_parallel_mask(f, 0.5), 0.5, field=f if weighted else None
        )
        occupied = m.occupancy >= 0.5
        assert f.values[occupied].min() >= -h - 1e-12
        assert mask_measure(m) <= f.domain.area + 3 * h * f.domain.perimeter


def test_mask_distance_from_point_seed(rect4_field):
    from isoperim import mask_distance

    g = rect4_field.grid
    m = _point_seed_mask(g, 2.0, 1.0)
    d = mask_distance(m)
    iy = int(round((1.0 - g.y0) / g.h - 0.5))
    ix = int(round((2.0 - g.x0) / g.h - 0.5))
    assert d[iy, ix] == 0.0
    assert d[iy, ix + 7] == pytest.approx(7 * g.h, abs=1e-12)
    assert d[iy + 3, ix + 4] == pytest.approx(5 * g.h, abs=1e-12)


def test_dilation_empty_mask_raises(rect4_field):
    g = rect4_field.grid
    empty = RegionMask(grid=g, occupancy=np.zeros((g.ny, g.nx)), provenance="empty")
    with pytest.raises(EmptyRegionError):
        dilate_by_disk(empty, 0.3)


def test_budget_error():
    with pytest.raises(BudgetError):
        build_distance_field(shapes.make_rectangle(4.0), 1e-5)


def test_contours_unit_square_quarter_level():
    f = build_distance_field(JD_unit_square(), 1.0 / 50.0)
    loops = extract_contours(f, 0.25)
    assert len(loops) == 1
    assert polyline_length(loops[0]) == pytest.approx(2.0, abs=6 * f.grid.h)


def test_contours_rectangle_zero_level(rect4_field):
    loops = extract_contours(rect4_field, 0.0)
    assert len(loops) == 1
    assert polyline_length(loops[0]) == pytest.approx(12.0, abs=6 * rect4_field.grid.h)


def test_contours_closed_and_ccw(rect4_field):
    for level in (0.0, 0.3, 0.7):
        for loop in extract_contours(rect4_field, level):
            assert np.allclose(loop[0], loop[-1])
            x, y = loop[:-1, 0], loop[:-1, 1]
            signed = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
            assert signed > 0


def test_contours_two_loops_on_dumbbell(dumbbell_field):
    loops = extract_contours(inner_parallel_mask(dumbbell_field, 0.5), 0.5)
    assert len(loops) == 2


def test_contours_level_out_of_range(rect4_field):
    assert extract_contours(rect4_field, 99.0) == []


def test_isof_roundtrip(tmp_path, rect4_field):
    path = tmp_path / "field.isof"
    write_isof(path, rect4_field)
    grid, values = read_isof(path)
    assert grid == rect4_field.grid
    assert np.array_equal(values, rect4_field.values)
    mask = inner_parallel_mask(rect4_field, 0.5)
    path2 = tmp_path / "mask.isof"
    write_isof(path2, mask)
    _, occ = read_isof(path2)
    assert np.array_equal(occ, mask.occupancy)


def test_isof_bad_magic(tmp_path):
    p = tmp_path / "bad.isof"
    p.write_bytes(b"NOPE!" + b"\x00" * 64)
    with pytest.raises(ValueError, match="magic"):
        read_isof(p)


def test_field_values_immutable(rect4_field):
    with pytest.raises(ValueError):
        rect4_field.values[0, 0] = 1.0
