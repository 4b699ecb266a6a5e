"""Deterministic SVG rendering of profiles and contours.

Coordinates are rounded to 1e-6 user units so identical inputs produce
byte-identical documents.
"""

from __future__ import annotations

import math

import numpy as np

_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)


def _fmt(x: float) -> str:
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return s if s not in ("-0", "") else "0"


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        step = mult * mag
        if span / step <= target:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


class _Panel:
    """A single x-y plot area with axes, ticks and polylines."""

    def __init__(self, ox, oy, width, height, xlim, ylim):
        self.ox, self.oy = ox, oy
        self.width, self.height = width, height
        self.xlim, self.ylim = xlim, ylim

    def px(self, x):
        x0, x1 = self.xlim
        return self.ox + (x - x0) / (x1 - x0) * self.width

    def py(self, y):
        y0, y1 = self.ylim
        return self.oy + self.height - (y - y0) / (y1 - y0) * self.height

    def render(self, curves, title):
        parts = []
        x_axis_y = self.py(self.ylim[0])
        y_axis_x = self.px(self.xlim[0])
        parts.append(
            f'<line x1="{_fmt(self.px(self.xlim[0]))}" y1="{_fmt(x_axis_y)}" '
            f'x2="{_fmt(self.px(self.xlim[1]))}" y2="{_fmt(x_axis_y)}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<line x1="{_fmt(y_axis_x)}" y1="{_fmt(self.py(self.ylim[0]))}" '
            f'x2="{_fmt(y_axis_x)}" y2="{_fmt(self.py(self.ylim[1]))}" '
            'stroke="black" stroke-width="1"/>'
        )
        for t in _ticks(*self.xlim):
            x = self.px(t)
            parts.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(x_axis_y)}" x2="{_fmt(x)}" '
                f'y2="{_fmt(x_axis_y + 4)}" stroke="black" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(x)}" y="{_fmt(x_axis_y + 16)}" font-size="11" '
                f'text-anchor="middle" font-family="sans-serif">{t:g}</text>'
            )
        for t in _ticks(*self.ylim):
            y = self.py(t)
            parts.append(
                f'<line x1="{_fmt(y_axis_x - 4)}" y1="{_fmt(y)}" '
                f'x2="{_fmt(y_axis_x)}" y2="{_fmt(y)}" stroke="black" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{_fmt(y_axis_x - 6)}" y="{_fmt(y + 4)}" font-size="11" '
                f'text-anchor="end" font-family="sans-serif">{t:g}</text>'
            )
        parts.append(
            f'<text x="{_fmt(self.ox + self.width / 2)}" y="{_fmt(self.oy - 8)}" '
            f'font-size="13" text-anchor="middle" font-family="sans-serif">{title}</text>'
        )
        for xs, ys, color in curves:
            pts = " ".join(
                f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys)
            )
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
        return parts


def profile_svg(profile) -> str:
    """Two panels: the profile J(V) and its square."""
    V = np.asarray(profile.volumes)
    J = np.asarray(profile.perimeters)
    if len(V) == 0:
        raise ValueError("empty profile")
    w, h = 880, 430
    margin, gap = 60, 70
    panel_w = (w - 2 * margin - gap) / 2
    panel_h = h - 2 * margin
    xlim = (0.0, float(profile.total_volume))
    p1 = _Panel(margin, margin, panel_w, panel_h, xlim, (0.0, float(J.max()) * 1.05))
    p2 = _Panel(
        margin + panel_w + gap,
        margin,
        panel_w,
        panel_h,
        xlim,
        (0.0, float((J * J).max()) * 1.05),
    )
    parts = [_HEADER.format(w=w, h=h)]
    parts += p1.render([(V, J, "#1f4e9c")], "J(V)")
    parts += p2.render([(V, J * J, "#9c1f1f")], "J(V)^2")
    parts.append("</svg>\n")
    return "\n".join(parts)


def contours_svg(domain, contour_groups) -> str:
    """Domain outline plus contour polylines.

    ``contour_groups`` is a list of (contours, color) pairs where each
    contour is an (n, 2) point array.
    """
    if not any(len(c) for contours, _ in contour_groups for c in contours):
        raise ValueError("no contour points to draw")
    xmin, ymin, xmax, ymax = domain.bbox
    pad = 0.05 * max(xmax - xmin, ymax - ymin)
    xmin, ymin, xmax, ymax = xmin - pad, ymin - pad, xmax + pad, ymax + pad
    scale = 640.0 / max(xmax - xmin, ymax - ymin)
    w = (xmax - xmin) * scale
    h = (ymax - ymin) * scale

    def to_px(pt):
        return (pt[0] - xmin) * scale, (ymax - pt[1]) * scale

    parts = [_HEADER.format(w=_fmt(w), h=_fmt(h))]
    pts = " ".join(
        "{},{}".format(*map(_fmt, to_px(p)))
        for p in np.vstack([domain.vertices, domain.vertices[:1]])
    )
    parts.append(
        f'<polyline points="{pts}" fill="none" stroke="#777777" stroke-width="1.5"/>'
    )
    for contours, color in contour_groups:
        for c in contours:
            pts = " ".join("{},{}".format(*map(_fmt, to_px(p))) for p in c)
            parts.append(
                f'<polyline points="{pts}" fill="none" stroke="{color}" '
                'stroke-width="1.5"/>'
            )
    parts.append("</svg>\n")
    return "\n".join(parts)


def write_svg(path, text: str) -> None:
    with open(path, "wb") as fh:
        fh.write(text.encode("utf-8"))
