"""Planar primitives: arc-length parameterized polylines, oriented rectangles,
and the collision predicates used by the roadmap, planner, and validators.

All values are immutable after construction and all operations are pure, so
everything here is safe to share across threads. Touching shapes count as
colliding (closed-set semantics) throughout.

Batch variants of the static-collision tests operate on numpy pose arrays;
they exist because roadmap construction clips thousands of candidate poses
per call and scalar tests would dominate the runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


class GeometryError(ValueError):
    """Violated precondition or invariant of a geometry value."""


def normalize_angle(theta: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    if not math.isfinite(theta):
        raise GeometryError(f"angle must be finite, got {theta!r}")
    wrapped = math.remainder(theta, TWO_PI)
    if wrapped <= -math.pi:
        wrapped += TWO_PI
    return wrapped


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"coordinates must be finite, got ({self.x!r}, {self.y!r})")

    def distance_to(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Pose:
    """A position plus a heading normalized into (-pi, pi] at construction."""

    position: Point2
    heading: float

    def __post_init__(self):
        object.__setattr__(self, "heading", normalize_angle(self.heading))


@dataclass(frozen=True)
class Polyline:
    """An ordered chain of at least two pairwise-distinct consecutive points."""

    points: tuple[Point2, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        if len(pts) < 2:
            raise GeometryError("polyline needs at least 2 points")
        for a, b in zip(pts, pts[1:]):
            if a.x == b.x and a.y == b.y:
                raise GeometryError(f"consecutive duplicate point ({a.x}, {a.y})")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_xy(cls, xy: Iterable[Sequence[float]]) -> "Polyline":
        return cls(tuple(Point2(float(x), float(y)) for x, y in xy))

    def as_array(self) -> np.ndarray:
        """(M, 2) float64 copy of the vertices."""
        return np.array([(p.x, p.y) for p in self.points], dtype=float)


@dataclass(frozen=True)
class OrientedRect:
    center: Point2
    heading: float
    length: float
    width: float

    def __post_init__(self):
        if self.length <= 0 or self.width <= 0:
            raise GeometryError("rect dimensions must be positive")
        object.__setattr__(self, "heading", normalize_angle(self.heading))

    def corners(self) -> list[tuple[float, float]]:
        return rect_corners(self.center.x, self.center.y, self.heading, self.length, self.width)


def polyline_length(p: Polyline) -> float:
    """Total Euclidean length; strictly positive by the type invariants."""
    return sum(a.distance_to(b) for a, b in zip(p.points, p.points[1:]))


def point_at_arclength(p: Polyline, s: float) -> tuple[Point2, tuple[float, float]]:
    """Point at arc-length s along p plus the unit tangent of its segment.

    At a vertex the tangent of the following segment is returned; at the full
    length the endpoint and the last segment's tangent are returned exactly.
    """
    total = polyline_length(p)
    if s < 0.0 or s > total:
        raise GeometryError(f"arc-length {s} outside [0, {total}]")
    pts = p.points
    if s == 0.0:
        a, b = pts[0], pts[1]
        seg = a.distance_to(b)
        return pts[0], ((b.x - a.x) / seg, (b.y - a.y) / seg)
    acc = 0.0
    for a, b in zip(pts, pts[1:]):
        seg = a.distance_to(b)
        if s <= acc + seg:
            t = (s - acc) / seg
            tangent = ((b.x - a.x) / seg, (b.y - a.y) / seg)
            if t == 1.0 or s == total:
                return b, tangent
            return Point2(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)), tangent
        acc += seg
    # float accumulation can land here for s within a hair of total
    a, b = pts[-2], pts[-1]
    seg = a.distance_to(b)
    return pts[-1], ((b.x - a.x) / seg, (b.y - a.y) / seg)


def left_normal(t: Sequence[float]) -> tuple[float, float]:
    """The input unit tangent rotated +90 degrees: (-ty, tx)."""
    tx, ty = float(t[0]), float(t[1])
    if abs(math.hypot(tx, ty) - 1.0) > 1e-9:
        raise GeometryError(f"tangent must be unit length, |t| = {math.hypot(tx, ty)}")
    return (-ty, tx)


def rect_corners(cx: float, cy: float, heading: float, length: float, width: float) -> list[tuple[float, float]]:
    """Corners in CCW order starting front-left."""
    c, s = math.cos(heading), math.sin(heading)
    hl, hw = 0.5 * length, 0.5 * width
    ax, ay = hl * c, hl * s  # half-length axis
    bx, by = -hw * s, hw * c  # half-width axis
    return [
        (cx + ax + bx, cy + ay + by),
        (cx - ax + bx, cy - ay + by),
        (cx - ax - bx, cy - ay - by),
        (cx + ax - bx, cy + ay - by),
    ]


def _project_gap(corners_a: Sequence[tuple[float, float]], corners_b: Sequence[tuple[float, float]],
                 ax: float, ay: float) -> bool:
    """True if the projections of the two corner sets are strictly separated."""
    amin = amax = corners_a[0][0] * ax + corners_a[0][1] * ay
    for x, y in corners_a[1:]:
        d = x * ax + y * ay
        if d < amin:
            amin = d
        elif d > amax:
            amax = d
    bmin = bmax = corners_b[0][0] * ax + corners_b[0][1] * ay
    for x, y in corners_b[1:]:
        d = x * ax + y * ay
        if d < bmin:
            bmin = d
        elif d > bmax:
            bmax = d
    return amax < bmin or bmax < amin


def rects_overlap(a: OrientedRect, b: OrientedRect) -> bool:
    """Closed-set overlap of two oriented rectangles via the separating-axis test."""
    # cheap circle rejection before the four-axis test
    ra = 0.5 * math.hypot(a.length, a.width)
    rb = 0.5 * math.hypot(b.length, b.width)
    if a.center.distance_to(b.center) > ra + rb:
        return False
    ca, cb = a.corners(), b.corners()
    for heading in (a.heading, b.heading):
        c, s = math.cos(heading), math.sin(heading)
        if _project_gap(ca, cb, c, s) or _project_gap(ca, cb, -s, c):
            return False
    return True


def convex_rect_sweep_overlap(corners_a: Sequence[tuple[float, float]], heading_a: float,
                              corners_b: Sequence[tuple[float, float]], heading_b: float,
                              wx: float, wy: float) -> bool:
    """Continuous-time overlap of rect B translating by (wx, wy) relative to rect A.

    Both rects keep fixed headings, so relative motion is linear and the swept
    B is the convex hull of its corners at displacement 0 and (wx, wy). SAT
    over the two rects' axes plus the motion normal is exact for that hull.
    """
    swept_b = list(corners_b) + [(x + wx, y + wy) for x, y in corners_b]
    for heading in (heading_a, heading_b):
        c, s = math.cos(heading), math.sin(heading)
        if _project_gap(corners_a, swept_b, c, s) or _project_gap(corners_a, swept_b, -s, c):
            return False
    wn = math.hypot(wx, wy)
    if wn > 1e-12:
        if _project_gap(corners_a, swept_b, -wy / wn, wx / wn):
            return False
    return True


# ---------------------------------------------------------------------------
# Static environment
# ---------------------------------------------------------------------------


def _polygon_signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _segments_intersect(p1, p2, p3, p4) -> bool:
    """Closed-segment intersection including touching and collinear overlap."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_segment(a, b, c):
        return (min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
                and min(a[1], b[1]) <= c[1] <= max(a[1], b[1]))

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    if d1 == 0 and on_segment(p3, p4, p1):
        return True
    if d2 == 0 and on_segment(p3, p4, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, p3):
        return True
    if d4 == 0 and on_segment(p1, p2, p4):
        return True
    return False


def point_in_polygon(x: float, y: float, pts: np.ndarray) -> bool:
    """Even-odd rule point-in-polygon; boundary points may fall either way."""
    inside = False
    n = len(pts)
    j = n - 1
    for i in range(n):
        xi, yi = pts[i]
        xj, yj = pts[j]
        if (yi > y) != (yj > y) and x < (xj - xi) * (y - yi) / (yj - yi) + xi:
            inside = not inside
        j = i
    return inside


@dataclass(frozen=True)
class Obstacle:
    """A simple polygon stored counter-clockwise, with precomputed edge data."""

    pts: np.ndarray  # (V, 2)
    convex: bool = field(init=False)
    edge_normals: np.ndarray = field(init=False)  # outward unit normals, (V, 2)
    aabb: tuple[float, float, float, float] = field(init=False)  # xmin, ymin, xmax, ymax
    is_box: bool = field(init=False)  # axis-aligned rectangle fast path

    def __post_init__(self):
        pts = np.asarray(self.pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise GeometryError("obstacle polygon needs at least 3 [x, y] vertices")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("obstacle polygon has non-finite vertices")
        area = _polygon_signed_area(pts)
        if area <= 0:
            raise GeometryError("obstacle polygon must be counter-clockwise with positive area")
        n = len(pts)
        for i in range(n):
            a1, a2 = pts[i], pts[(i + 1) % n]
            if np.array_equal(a1, a2):
                raise GeometryError("obstacle polygon repeats consecutive vertices")
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                b1, b2 = pts[j], pts[(j + 1) % n]
                if _segments_intersect(tuple(a1), tuple(a2), tuple(b1), tuple(b2)):
                    raise GeometryError("obstacle polygon is self-intersecting")
        edges = np.roll(pts, -1, axis=0) - pts
        cross = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
        lengths = np.hypot(edges[:, 0], edges[:, 1])
        # CCW polygon: outward normal of edge (dx, dy) is (dy, -dx)
        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1) / lengths[:, None]
        aabb = (float(pts[:, 0].min()), float(pts[:, 1].min()),
                float(pts[:, 0].max()), float(pts[:, 1].max()))
        is_box = n == 4 and bool(
            np.all((np.abs(edges[:, 0]) < 1e-12) | (np.abs(edges[:, 1]) < 1e-12)))
        object.__setattr__(self, "pts", pts)
        object.__setattr__(self, "convex", bool(np.all(cross >= -1e-12)))
        object.__setattr__(self, "edge_normals", normals)
        object.__setattr__(self, "aabb", aabb)
        object.__setattr__(self, "is_box", is_box)


@dataclass(frozen=True)
class Environment:
    """Axis-aligned map rectangle [0, width] x [0, height] plus polygon obstacles."""

    width: float
    height: float
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise GeometryError("map dimensions must be positive")
        for ob in self.obstacles:
            pts = ob.pts
            if pts[:, 0].min() < 0 or pts[:, 0].max() > self.width \
                    or pts[:, 1].min() < 0 or pts[:, 1].max() > self.height:
                raise GeometryError("obstacle extends outside the map bounds")

    @classmethod
    def from_polygons(cls, width: float, height: float,
                      polygons: Iterable[Iterable[Sequence[float]]]) -> "Environment":
        return cls(float(width), float(height),
                   tuple(Obstacle(np.array(list(poly), dtype=float)) for poly in polygons))


def _rect_hits_polygon(corners: Sequence[tuple[float, float]], ob: Obstacle) -> bool:
    pts = ob.pts
    for cx, cy in corners:
        if point_in_polygon(cx, cy, pts):
            return True
    for px, py in pts:
        if point_in_polygon(px, py, np.asarray(corners)):
            return True
    n = len(pts)
    for i in range(4):
        a1, a2 = corners[i], corners[(i + 1) % 4]
        for j in range(n):
            if _segments_intersect(a1, a2, tuple(pts[j]), tuple(pts[(j + 1) % n])):
                return True
    return False


def rect_collides_static(r: OrientedRect, env: Environment) -> bool:
    """True iff the rect exits the map rectangle or intersects any obstacle."""
    corners = r.corners()
    for x, y in corners:
        if x < 0.0 or x > env.width or y < 0.0 or y > env.height:
            return True
    for ob in env.obstacles:
        if _rect_hits_polygon(corners, ob):
            return True
    return False


def batch_rect_collides_static(centers: np.ndarray, headings: np.ndarray,
                               length, width, env: Environment) -> np.ndarray:
    """Vectorized rect_collides_static over M poses; returns a bool mask (M,).

    `length` and `width` may be scalars or per-pose arrays. Convex obstacles
    take a fully vectorized SAT path; the rare non-convex obstacle falls back
    to the scalar test for the poses still undecided.
    """
    centers = np.asarray(centers, dtype=float)
    headings = np.asarray(headings, dtype=float)
    m = len(centers)
    if m == 0:
        return np.zeros(0, dtype=bool)
    c, s = np.cos(headings), np.sin(headings)
    hl = 0.5 * np.broadcast_to(np.asarray(length, dtype=float), (m,))
    hw = 0.5 * np.broadcast_to(np.asarray(width, dtype=float), (m,))
    ax = np.stack([hl * c, hl * s], axis=1)  # (M, 2)
    bx = np.stack([-hw * s, hw * c], axis=1)
    corners = np.stack([
        centers + ax + bx,
        centers - ax + bx,
        centers - ax - bx,
        centers + ax - bx,
    ], axis=1)  # (M, 4, 2)
    return batch_corners_collide_static(corners, c, s, env)


def batch_corners_collide_static(corners: np.ndarray, cos_h: np.ndarray, sin_h: np.ndarray,
                                 env: Environment) -> np.ndarray:
    """batch_rect_collides_static for prebuilt corner arrays (M, 4, 2)."""
    cx_min = corners[:, :, 0].min(axis=1)
    cx_max = corners[:, :, 0].max(axis=1)
    cy_min = corners[:, :, 1].min(axis=1)
    cy_max = corners[:, :, 1].max(axis=1)
    out = (cx_min < 0.0) | (cx_max > env.width) | (cy_min < 0.0) | (cy_max > env.height)

    for ob in env.obstacles:
        xmin, ymin, xmax, ymax = ob.aabb
        cand = ((cx_max >= xmin) & (cx_min <= xmax)
                & (cy_max >= ymin) & (cy_min <= ymax) & ~out)
        if not cand.any():
            continue
        idx = np.nonzero(cand)[0]
        if ob.is_box:
            # the AABB test above is exact on the box's own axes; the rect's
            # two axes are the only remaining SAT candidates
            hit = np.ones(len(idx), dtype=bool)
            sub = corners[idx]
            for axx, axy in ((cos_h[idx], sin_h[idx]), (-sin_h[idx], cos_h[idx])):
                proj = sub[:, :, 0] * axx[:, None] + sub[:, :, 1] * axy[:, None]
                bmin = np.minimum(axx * xmin, axx * xmax) + np.minimum(axy * ymin, axy * ymax)
                bmax = np.maximum(axx * xmin, axx * xmax) + np.maximum(axy * ymin, axy * ymax)
                hit &= ~((proj.max(axis=1) < bmin) | (bmax < proj.min(axis=1)))
                if not hit.any():
                    break
            out[idx] |= hit
        elif ob.convex:
            out[idx] |= _batch_rect_convex_overlap(corners[idx], cos_h[idx], sin_h[idx], ob)
        else:
            for i in idx:
                if _rect_hits_polygon([tuple(p) for p in corners[i]], ob):
                    out[i] = True
    return out


def _batch_rect_convex_overlap(corners: np.ndarray, cos_h: np.ndarray, sin_h: np.ndarray,
                               ob: Obstacle) -> np.ndarray:
    """SAT between M oriented rects and one convex polygon, vectorized over M."""
    m = len(corners)
    poly = ob.pts  # (V, 2)
    overlap = np.ones(m, dtype=bool)

    # polygon's axes: project rect corners once per axis
    for nx, ny in ob.edge_normals:
        proj_poly = poly[:, 0] * nx + poly[:, 1] * ny
        pmin, pmax = proj_poly.min(), proj_poly.max()
        proj_rect = corners[:, :, 0] * nx + corners[:, :, 1] * ny  # (M, 4)
        overlap &= ~((proj_rect.max(axis=1) < pmin) | (proj_rect.min(axis=1) > pmax))
        if not overlap.any():
            return overlap

    # rect axes differ per pose: axes (M, 2) applied to both corner sets
    for axx, axy in ((cos_h, sin_h), (-sin_h, cos_h)):
        proj_rect = corners[:, :, 0] * axx[:, None] + corners[:, :, 1] * axy[:, None]
        proj_poly = poly[None, :, 0] * axx[:, None] + poly[None, :, 1] * axy[:, None]  # (M, V)
        overlap &= ~((proj_rect.max(axis=1) < proj_poly.min(axis=1))
                     | (proj_poly.max(axis=1) < proj_rect.min(axis=1)))
        if not overlap.any():
            break
    return overlap


def batch_point_in_free_space(points: np.ndarray, env: Environment) -> np.ndarray:
    """Bool mask of points inside the map and outside every obstacle."""
    points = np.asarray(points, dtype=float)
    free = ((points[:, 0] >= 0.0) & (points[:, 0] <= env.width)
            & (points[:, 1] >= 0.0) & (points[:, 1] <= env.height))
    for ob in env.obstacles:
        for i in np.nonzero(free)[0]:
            if point_in_polygon(points[i, 0], points[i, 1], ob.pts):
                free[i] = False
    return free
