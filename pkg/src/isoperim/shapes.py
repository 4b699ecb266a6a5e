"""Reference shape generators and their closed-form profile values.

The closed forms here are independent of the grid engine (no shared code
paths), so the two sides can cross-validate each other. Profiles follow
the convention J(V) = least perimeter of a subset of the shape with area
V; curvature values are dJ/dV.
"""

from __future__ import annotations

import math

import numpy as np

from .domain import JordanDomain

_BISECT_STEPS = 80


def make_rectangle(L: float) -> JordanDomain:
    """Rectangle with sides 2 and L (L >= 2), corner at the origin."""
    if not L >= 2.0:
        raise ValueError("rectangle length must satisfy L >= 2")
    return JordanDomain(
        np.array([[0.0, 0.0], [L, 0.0], [L, 2.0], [0.0, 2.0]]),
        name=f"rectangle_L{L:g}",
    )


def make_cross(L: float) -> JordanDomain:
    """Plus-shape: two 2-by-L rectangles sharing their center, meeting at
    right angles. Requires L >= 4 so the overlap is a full 2x2 square."""
    if not L >= 4.0:
        raise ValueError("cross requires L >= 4")
    c = L / 2.0
    verts = np.array(
        [
            [c - 1, 0.0],
            [c + 1, 0.0],
            [c + 1, c - 1],
            [L, c - 1],
            [L, c + 1],
            [c + 1, c + 1],
            [c + 1, L],
            [c - 1, L],
            [c - 1, c + 1],
            [0.0, c + 1],
            [0.0, c - 1],
            [c - 1, c - 1],
        ]
    )
    return JordanDomain(verts, name=f"cross_L{L:g}")


def make_dumbbell(side: float, corridor_w: float, corridor_len: float) -> JordanDomain:
    """Two squares of the given side joined by a thin corridor."""
    if side <= 0 or corridor_len <= 0 or not 0 < corridor_w < side:
        raise ValueError("dumbbell needs side > corridor_w > 0 and corridor_len > 0")
    s, w, ln = side, corridor_w, corridor_len
    y0 = (s - w) / 2.0
    y1 = (s + w) / 2.0
    verts = np.array(
        [
            [0.0, 0.0],
            [s, 0.0],
            [s, y0],
            [s + ln, y0],
            [s + ln, 0.0],
            [2 * s + ln, 0.0],
            [2 * s + ln, s],
            [s + ln, s],
            [s + ln, y1],
            [s, y1],
            [s, s],
            [0.0, s],
        ]
    )
    return JordanDomain(verts, name="dumbbell")


def make_keyhole(width: float) -> JordanDomain:
    """A 2x2 square with a corridor of the given width and length 1
    attached to the middle of its right side."""
    if not 0 < width < 2:
        raise ValueError("keyhole corridor width must lie in (0, 2)")
    w = width / 2.0
    verts = np.array(
        [
            [0.0, 0.0],
            [2.0, 0.0],
            [2.0, 1.0 - w],
            [3.0, 1.0 - w],
            [3.0, 1.0 + w],
            [2.0, 1.0 + w],
            [2.0, 2.0],
            [0.0, 2.0],
        ]
    )
    return JordanDomain(verts, name="keyhole")


def make_regular_ngon(n: int, R: float, center=(0.0, 0.0)) -> JordanDomain:
    """Regular n-gon of circumradius R, used to approximate smooth shapes."""
    if n < 3 or R <= 0:
        raise ValueError("regular polygon needs n >= 3 and R > 0")
    ang = 2.0 * np.pi * np.arange(n) / n
    verts = np.column_stack(
        [center[0] + R * np.cos(ang), center[1] + R * np.sin(ang)]
    )
    return JordanDomain(verts, name=f"ngon_{n}")


def make_stadium_polygon(n: int, half_len: float, r: float) -> JordanDomain:
    """Polygonal approximation of a stadium: segment of length 2*half_len
    dilated by a disk of radius r, with n vertices per cap."""
    if n < 4 or half_len <= 0 or r <= 0:
        raise ValueError("stadium needs n >= 4 and positive dimensions")
    t = np.linspace(-0.5 * np.pi, 0.5 * np.pi, n)
    right = np.column_stack([half_len + r * np.cos(t), r * np.sin(t)])
    left = np.column_stack([-half_len - r * np.cos(t), r * np.sin(t)])[::-1]
    return JordanDomain(np.vstack([right, left]), name="stadium")


# -- rectangle closed forms --------------------------------------------------


def rectangle_profile(L: float, V: float) -> float:
    """Least perimeter at area V inside the 2-by-L rectangle.

    Pieces: free disk 2*sqrt(pi*V) up to V = pi; a unit-curvature linear
    stretch pi + V up to V = pi + 2(L-2); then the eroded-core regime
    2(2+L) - 2*sqrt(4-pi)*sqrt(2L-V) up to the full area 2L.
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    if not 0.0 <= V <= 2.0 * L + 1e-12:
        raise ValueError(f"V={V} outside [0, {2 * L}]")
    V = min(V, 2.0 * L)
    if V <= math.pi:
        return 2.0 * math.sqrt(math.pi * V)
    if V <= math.pi + 2.0 * (L - 2.0):
        return math.pi + V
    return 2.0 * (2.0 + L) - 2.0 * math.sqrt(4.0 - math.pi) * math.sqrt(2.0 * L - V)


def rectangle_kappa(L: float, V: float) -> float:
    """dJ/dV for the rectangle profile (curvature of the free boundary)."""
    if not 0.0 < V <= 2.0 * L + 1e-12:
        raise ValueError(f"V={V} outside (0, {2 * L}]")
    V = min(V, 2.0 * L)
    if V <= math.pi:
        return math.sqrt(math.pi / V)
    if V <= math.pi + 2.0 * (L - 2.0):
        return 1.0
    if V >= 2.0 * L:
        return math.inf
    return math.sqrt(4.0 - math.pi) / math.sqrt(2.0 * L - V)


def rectangle_cheeger(L: float) -> float:
    """Cheeger constant of the 2-by-L rectangle (closed form)."""
    if L < 2:
        raise ValueError("L must be >= 2")
    half = L / 2.0
    return 0.5 * (4.0 - math.pi) / (half + 1.0 - math.sqrt((half - 1.0) ** 2 + math.pi * half))


# -- cross closed forms ------------------------------------------------------


def cross_volume_of_r(r: float) -> float:
    """Area of the central square capped by four circular segments of
    radius r, for r in [1, sqrt(2)]. Strictly increasing in r."""
    return 4.0 * (1.0 + r * r * math.asin(1.0 / r) - math.sqrt(max(r * r - 1.0, 0.0)))


def cross_r_of_V(L: float, V: float) -> float:
    """Invert cross_volume_of_r on [1, sqrt(2)] by bisection."""
    if L < 4:
        raise ValueError("L must be >= 4")
    lo, hi = 1.0, math.sqrt(2.0)
    vlo, vhi = cross_volume_of_r(hi), cross_volume_of_r(lo)  # V decreasing in r
    if not vlo - 1e-9 <= V <= vhi + 1e-9:
        raise ValueError(f"V={V} outside [{vlo}, {vhi}]")
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if cross_volume_of_r(mid) >= V:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cross_profile(L: float, V: float) -> float:
    """Least perimeter at area V inside the plus-shape of arm length L."""
    if L < 4:
        raise ValueError("L must be >= 4")
    vmax = 4.0 * L - 4.0
    if not 0.0 <= V <= vmax + 1e-12:
        raise ValueError(f"V={V} outside [0, {vmax}]")
    V = min(V, vmax)
    two_pi = 2.0 * math.pi
    if V <= two_pi:
        return 2.0 * math.sqrt(math.pi * V)
    if V <= two_pi + 4.0:
        r = cross_r_of_V(L, V)
        return 8.0 * r * math.asin(1.0 / r)
    if V <= 4.0 * L + two_pi - 12.0:
        return two_pi + V - 4.0
    return 4.0 * L - 2.0 * math.sqrt(2.0) * math.sqrt(4.0 - math.pi) * math.sqrt(vmax - V)


def cross_kappa(L: float, V: float) -> float:
    """dJ/dV for the cross profile."""
    vmax = 4.0 * L - 4.0
    if not 0.0 < V <= vmax + 1e-12:
        raise ValueError(f"V={V} outside (0, {vmax}]")
    V = min(V, vmax)
    two_pi = 2.0 * math.pi
    if V <= two_pi:
        return math.sqrt(math.pi / V)
    if V <= two_pi + 4.0:
        return 1.0 / cross_r_of_V(L, V)
    if V <= 4.0 * L + two_pi - 12.0:
        return 1.0
    if V >= vmax:
        return math.inf
    return math.sqrt(2.0) * math.sqrt(4.0 - math.pi) / math.sqrt(vmax - V)


# -- oracle dispatch (used by the reference/compare CLI commands) ------------

ORACLES = ("rectangle", "cross")


def oracle_total_volume(shape: str, L: float) -> float:
    if shape == "rectangle":
        return 2.0 * L
    if shape == "cross":
        return 4.0 * L - 4.0
    raise ValueError(f"unknown oracle shape {shape!r}")


def oracle_profile(shape: str, L: float, V: float) -> float:
    if shape == "rectangle":
        return rectangle_profile(L, V)
    if shape == "cross":
        return cross_profile(L, V)
    raise ValueError(f"unknown oracle shape {shape!r}")


def oracle_kappa(shape: str, L: float, V: float) -> float:
    if shape == "rectangle":
        return rectangle_kappa(L, V)
    if shape == "cross":
        return cross_kappa(L, V)
    raise ValueError(f"unknown oracle shape {shape!r}")


def oracle_segment_kind(shape: str, L: float, V: float) -> str:
    """Regime label matching the profile CSV convention."""
    if shape == "rectangle":
        if V <= math.pi:
            return "ball"
        if V <= math.pi + 2.0 * (L - 2.0):
            return "linear-gap"
        return "point"
    if shape == "cross":
        if V <= 2.0 * math.pi:
            return "ball"
        if V <= 2.0 * math.pi + 4.0:
            return "point"
        if V <= 4.0 * L + 2.0 * math.pi - 12.0:
            return "linear-gap"
        return "point"
    raise ValueError(f"unknown oracle shape {shape!r}")


def oracle_domain(shape: str, L: float) -> JordanDomain:
    if shape == "rectangle":
        return make_rectangle(L)
    if shape == "cross":
        return make_cross(L)
    raise ValueError(f"unknown oracle shape {shape!r}")
