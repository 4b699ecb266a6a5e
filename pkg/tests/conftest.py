import warnings

import pytest

from isoperim import build_distance_field, compute_sweep, profile_from_legendre, shapes


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Run a tiny end-to-end pipeline once so JIT compilation does not
    distort per-test timings."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dom = shapes.make_rectangle(2.5)
        f = build_distance_field(dom, 0.1)
        sweep = compute_sweep(f, 16)
        profile_from_legendre(sweep, f, 32)


@pytest.fixture(scope="session")
def rect4_field():
    return build_distance_field(shapes.make_rectangle(4.0), 1.0 / 50.0)


@pytest.fixture(scope="session")
def cross4_field():
    return build_distance_field(shapes.make_cross(4.0), 1.0 / 50.0)


@pytest.fixture(scope="session")
def dumbbell_field():
    return build_distance_field(shapes.make_dumbbell(2.0, 0.2, 0.5), 1.0 / 100.0)


@pytest.fixture(scope="session")
def rect4_profile(rect4_field):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sweep = compute_sweep(rect4_field, 64)
        return profile_from_legendre(sweep, rect4_field, 256), sweep


@pytest.fixture(scope="session")
def cross4_profile(cross4_field):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sweep = compute_sweep(cross4_field, 64)
        return profile_from_legendre(sweep, cross4_field, 256), sweep
