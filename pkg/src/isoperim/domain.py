"""Simple-polygon domains: parsing, validation, exact area and perimeter."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidDomainError

# Relative epsilon for degeneracy/intersection tests, scaled by the
# bounding-box diagonal of the input polygon.
REL_EPS = 1e-12


def _shoelace(verts: np.ndarray) -> float:
    x = verts[:, 0]
    y = verts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross2(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _segments_intersect(p0, p1, q0, q1, eps):
    """True if segments p0-p1 and q0-q1 intersect or touch (tolerance eps)."""
    dp = p1 - p0
    dq = q1 - q0
    lp = float(np.hypot(*dp))
    lq = float(np.hypot(*dq))
    d1 = _cross2(dq, p0 - q0)
    d2 = _cross2(dq, p1 - q0)
    d3 = _cross2(dp, q0 - p0)
    d4 = _cross2(dp, q1 - p0)
    t1 = eps * lq
    t2 = eps * lp

    def sgn(v, tol):
        if v > tol:
            return 1
        if v < -tol:
            return -1
        return 0

    s1, s2, s3, s4 = sgn(d1, t1), sgn(d2, t1), sgn(d3, t2), sgn(d4, t2)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True
    if s1 == 0 and s2 == 0 and s3 == 0 and s4 == 0:
        # Collinear: test interval overlap along the dominant axis.
        axis = 0 if abs(dp[0]) >= abs(dp[1]) else 1
        a0, a1 = sorted((p0[axis], p1[axis]))
        b0, b1 = sorted((q0[axis], q1[axis]))
        return min(a1, b1) - max(a0, b0) > eps
    # One endpoint lying on the other segment counts as touching.
    if s1 == 0 and s3 * s4 <= 0 and _on_segment(q0, q1, p0, eps):
        return True
    if s2 == 0 and s3 * s4 <= 0 and _on_segment(q0, q1, p1, eps):
        return True
    if s3 == 0 and s1 * s2 <= 0 and _on_segment(p0, p1, q0, eps):
        return True
    if s4 == 0 and s1 * s2 <= 0 and _on_segment(p0, p1, q1, eps):
        return True
    return False


def _on_segment(a, b, p, eps):
    lo = np.minimum(a, b) - eps
    hi = np.maximum(a, b) + eps
    return bool(np.all(p >= lo) and np.all(p <= hi))


@dataclass(frozen=True)
class JordanDomain:
    """A simple closed polygon stored counterclockwise.

    ``vertices`` is an (n, 2) float64 array without a repeated closing
    vertex. Instances are immutable and safe to share between threads.
    """

    vertices: np.ndarray
    name: str = ""

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        verts = _validate(verts)
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    @cached_property
    def area(self) -> float:
        return _shoelace(self.vertices)

    @cached_property
    def perimeter(self) -> float:
        edges = np.roll(self.vertices, -1, axis=0) - self.vertices
        return float(np.sum(np.hypot(edges[:, 0], edges[:, 1])))

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax)."""
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])

    @property
    def bbox_diag(self) -> float:
        xmin, ymin, xmax, ymax = self.bbox
        return float(np.hypot(xmax - xmin, ymax - ymin))


def _validate(verts: np.ndarray) -> np.ndarray:
    if verts.ndim != 2 or verts.shape[1] != 2:
        raise InvalidDomainError("vertices must be an (n, 2) array of points")
    if not np.all(np.isfinite(verts)):
        raise InvalidDomainError("vertices contain non-finite coordinates")
    # Tolerate an explicitly repeated closing vertex.
    if len(verts) >= 2 and np.array_equal(verts[0], verts[-1]):
        verts = verts[:-1]
    if len(verts) < 3:
        raise InvalidDomainError("a polygon needs at least 3 vertices")

    diag = float(np.hypot(*(verts.max(axis=0) - verts.min(axis=0))))
    if diag <= 0.0:
        raise InvalidDomainError("all vertices coincide")
    eps = REL_EPS * diag

    gaps = np.hypot(*(np.roll(verts, -1, axis=0) - verts).T)
    if np.any(gaps <= eps):
        i = int(np.argmin(gaps))
        raise InvalidDomainError(
            f"consecutive vertices {i} and {(i + 1) % len(verts)} coincide"
        )

    n = len(verts)
    for i in range(n):
        p0 = verts[i]
        p1 = verts[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue  # adjacent through the wrap-around
            q0 = verts[j]
            q1 = verts[(j + 1) % n]
            if _segments_intersect(p0, p1, q0, q1, eps):
                raise InvalidDomainError(
                    f"polygon is not simple: edges {i} and {j} intersect"
                )

    area2 = _shoelace(verts)
    if abs(area2) <= eps * diag:
        raise InvalidDomainError("polygon has (near) zero area")
    if area2 < 0.0:
        verts = verts[::-1].copy()
    return verts


def parse_domain(text: str) -> JordanDomain:
    """Parse a domain from a JSON document {"name": ..., "vertices": [[x, y], ...]}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDomainError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise InvalidDomainError('document must be an object with a "vertices" array')
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InvalidDomainError('"name" must be a string')
    try:
        verts = np.asarray(doc["vertices"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidDomainError(f'"vertices" is not a numeric array: {exc}') from exc
    return JordanDomain(verts, name=name)


def load_domain(path) -> JordanDomain:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_domain(fh.read())


def domain_to_json(d: JordanDomain) -> str:
    doc = {"name": d.name, "vertices": [[float(x), float(y)] for x, y in d.vertices]}
    return json.dumps(doc)


def polygon_area(d: JordanDomain) -> float:
    """Shoelace area of the (CCW-normalized) polygon; always positive."""
    return d.area


def polygon_perimeter(d: JordanDomain) -> float:
    """Sum of edge lengths."""
    return d.perimeter
