"""The numba kernels and the numpy fallback must agree bitwise (or to
floating-point roundoff) on every operation."""

import numpy as np
import pytest

from isoperim import backend, shapes
from isoperim.field import (
    build_distance_field,
    connected_components,
    dilate_by_disk,
    extract_contours,
    inner_parallel_mask,
    polyline_length,
)
from isoperim.solver import sweep_sample

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def _run_all(name):
    out = {}
    with backend.use(name):
        dom = shapes.make_cross(4.0)
        f = build_distance_field(dom, 1.0 / 20.0)
        out["field"] = f.values
        m = inner_parallel_mask(f, 0.6)
        out["ncomp"] = connected_components(m)[0]
        out["binary"] = dilate_by_disk(m, 0.6).occupancy
        out["weighted"] = dilate_by_disk(m, 0.6, field=f).occupancy
        loops = extract_contours(m, 0.5)
        out["loop_lens"] = sorted(polyline_length(c) for c in loops)
        s = sweep_sample(f, r=0.6)
        out["sample"] = (s.volume, s.perimeter, s.inner_area, s.dual_value)
    return out


@pytest.fixture(scope="module")
def both():
    return _run_all("numba"), _run_all("numpy")


def test_signed_distance_identical(both):
    a, b = both
    assert np.array_equal(a["field"], b["field"])


def test_dilations_identical(both):
    a, b = both
    assert np.allclose(a["binary"], b["binary"], atol=1e-14, rtol=0)
    assert np.allclose(a["weighted"], b["weighted"], atol=1e-14, rtol=0)


def test_components_identical(both):
    a, b = both
    assert a["ncomp"] == b["ncomp"]


def test_contours_identical(both):
    a, b = both
    assert np.allclose(a["loop_lens"], b["loop_lens"], rtol=1e-12)


def test_sweep_sample_identical(both):
    a, b = both
    assert a["sample"] == pytest.approx(b["sample"], rel=1e-14)


def test_geodesic_distance_identical():
    rng = np.random.default_rng(3)
    region = (rng.random((40, 60)) < 0.7).astype(np.uint8)
    sources = np.zeros_like(region)
    sources[20, 30] = 1
    from isoperim import _kernels_numpy as knp
    from isoperim import _kernels_numba as knb

    da = knb.geodesic_distance(region, sources)
    db = knp.geodesic_distance(region, sources)
    assert np.array_equal(da, db)


def test_distance_transform_identical_on_random_weights():
    rng = np.random.default_rng(11)
    f0 = np.where(rng.random((37, 53)) < 0.2, -rng.random((37, 53)) * 9.0, 1e30)
    if not (f0 < 1e29).any():
        f0[5, 5] = -1.0
    from isoperim import _kernels_numpy as knp
    from isoperim import _kernels_numba as knb

    d2a, wya, wxa = knb.distance_transform(f0)
    d2b, wyb, wxb = knp.distance_transform(f0)
    assert np.array_equal(d2a, d2b)
    assert np.array_equal(wya, wyb)
    assert np.array_equal(wxa, wxb)


def test_backend_env_selection(monkeypatch):
    monkeypatch.setenv("ISO_BACKEND", "numpy")
    monkeypatch.setattr(backend, "_ACTIVE", None)
    assert backend.backend_name() == "numpy"
    monkeypatch.setattr(backend, "_ACTIVE", None)
    monkeypatch.setenv("ISO_BACKEND", "bogus")
    with pytest.raises(ValueError):
        backend.kernels()
    monkeypatch.setattr(backend, "_ACTIVE", None)
