"""Per-robot lattice roadmaps grown around a reference polyline.

The reference is resampled at uniform arc-length spacing derived from the
base parameter b, giving the on-path vertex band; apex vertices sit at the
segment midpoints offset by the height parameter h to the left (ABOVE) and
right (BELOW). Nine directed edge families connect the bands strictly
forward, so the graph is a DAG and vertex-id order is a topological order.

Vertices whose footprint collides with the static environment are removed
together with their incident edges. Edge sweeps are checked exactly: a rect
translating along its own heading covers an elongated rect centered on the
edge midpoint, so one oriented-rect test per edge replaces interpolation.

Construction runs inside every objective evaluation, so the whole build is
array-based: one batched static-collision call covers all candidate vertices
and edge sweeps of a roadmap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import (
    Environment,
    Point2,
    Polyline,
    Pose,
    batch_rect_collides_static,
    point_at_arclength,
    polyline_length,
)

MID, ABOVE, BELOW = 0, 1, 2
LAYER_NAMES = ("MID", "ABOVE", "BELOW")
_LAYER_TAGS = ("m", "a", "b")


class RoadmapError(ValueError):
    """Roadmap construction cannot proceed (degenerate input or blocked endpoints)."""


@dataclass(frozen=True)
class LatticeVertex:
    layer: str
    index: int
    pose: Pose


@lru_cache(maxsize=512)
def _polyline_arrays(ref: Polyline) -> tuple[np.ndarray, np.ndarray, float]:
    """(vertices (M, 2), cumulative arc length (M,), total length), cached."""
    xy = ref.as_array()
    seg_len = np.hypot(np.diff(xy[:, 0]), np.diff(xy[:, 1]))
    cum = np.concatenate([[0.0], np.cumsum(seg_len)])
    return xy, cum, float(cum[-1])


def resample_points(ref: Polyline, b: float) -> tuple[np.ndarray, float, int]:
    """Reference positions at uniform spacing b' = L / ceil(L / b).

    Returns (positions (R, 2), effective spacing b', R). First and last rows
    equal the reference endpoints exactly.
    """
    if b <= 0:
        raise RoadmapError("base parameter b must be positive")
    xy, cum, total = _polyline_arrays(ref)
    segments = max(1, math.ceil(total / b - 1e-12))
    spacing = total / segments
    r_count = segments + 1

    s_values = spacing * np.arange(r_count)
    px = np.interp(s_values, cum, xy[:, 0])
    py = np.interp(s_values, cum, xy[:, 1])
    pts = np.stack([px, py], axis=1)
    pts[0] = xy[0]
    pts[-1] = xy[-1]
    return pts, spacing, r_count


def resample_reference(ref: Polyline, b: float) -> list[tuple[Point2, tuple[float, float]]]:
    """Resampled points paired with the reference tangent at each arc length."""
    pts, spacing, r_count = resample_points(ref, b)
    total = polyline_length(ref)
    out = []
    for k in range(r_count):
        s = total if k == r_count - 1 else min(spacing * k, total)
        _, tangent = point_at_arclength(ref, s)
        out.append((Point2(float(pts[k, 0]), float(pts[k, 1])), tangent))
    return out


class LatticeRoadmap:
    """Directed lattice graph with flat arrays for the planner's hot loop.

    Vertex slots are fixed even after clipping: slot 3*(j-1) holds MID_j and
    slots 3*(j-1)+1 / +2 hold ABOVE_j / BELOW_j (which exist for j < R).
    `kept` marks the surviving vertices; adjacency only references survivors.
    """

    def __init__(self, pos: np.ndarray, heading: np.ndarray, kept: np.ndarray,
                 edge_from: np.ndarray, edge_to: np.ndarray, edge_len: np.ndarray,
                 r_count: int, params: tuple[float, float]):
        self.pos = pos
        self.heading = heading
        self.kept = kept
        self.R = r_count
        self.params = params
        self.start_id = 0
        self.goal_id = 3 * (r_count - 1)
        self._edge_from = edge_from
        self._edge_to = edge_to
        self._edge_len = edge_len

        self.cos_h = np.cos(heading)
        self.sin_h = np.sin(heading)
        self.pos_x = pos[:, 0].tolist()
        self.pos_y = pos[:, 1].tolist()

        # adjacency tuples: (target id, length, edge cos, edge sin)
        adj: list[list[tuple[int, float, float, float]]] = [[] for _ in range(len(pos))]
        if len(edge_from):
            dx = (pos[edge_to, 0] - pos[edge_from, 0]) / edge_len
            dy = (pos[edge_to, 1] - pos[edge_from, 1]) / edge_len
            for u, v, length, c, s in zip(edge_from.tolist(), edge_to.tolist(),
                                          edge_len.tolist(), dx.tolist(), dy.tolist()):
                adj[u].append((v, length, c, s))
        self.adj = adj
        self.kept_ids = np.nonzero(kept)[0]

    @property
    def layer(self) -> np.ndarray:
        ids = np.arange(len(self.pos))
        return (ids % 3).astype(np.int8)

    @property
    def index(self) -> np.ndarray:
        return (np.arange(len(self.pos)) // 3 + 1).astype(np.int32)

    @property
    def n_vertices(self) -> int:
        return int(self.kept.sum())

    @property
    def n_edges(self) -> int:
        return len(self._edge_from)

    @property
    def vertices(self) -> list[LatticeVertex]:
        return [
            LatticeVertex(LAYER_NAMES[i % 3], i // 3 + 1,
                          Pose(Point2(float(self.pos[i, 0]), float(self.pos[i, 1])),
                               float(self.heading[i])))
            for i in self.kept_ids
        ]

    def vertex_tag(self, vid: int) -> str:
        return f"{_LAYER_TAGS[vid % 3]}{vid // 3 + 1}"

    def edges(self) -> list[tuple[int, int, float]]:
        """Directed edges as (from id, to id, length)."""
        return list(zip(self._edge_from.tolist(), self._edge_to.tolist(),
                        self._edge_len.tolist()))

    def replace_edges(self, edges: list[tuple[int, int, float]]) -> "LatticeRoadmap":
        """Copy of this roadmap with a different edge set (test/diagnostic aid)."""
        if edges:
            ef = np.array([e[0] for e in edges], dtype=np.int64)
            et = np.array([e[1] for e in edges], dtype=np.int64)
            el = np.array([e[2] for e in edges], dtype=float)
        else:
            ef = et = np.zeros(0, dtype=np.int64)
            el = np.zeros(0, dtype=float)
        return LatticeRoadmap(self.pos, self.heading, self.kept, ef, et, el,
                              self.R, self.params)

    def debug_document(self) -> dict:
        """Vertex/edge listing for the roadmap inspection command."""
        return {
            "params": {"b": self.params[0], "h": self.params[1]},
            "R": self.R,
            "vertices": [
                {
                    "id": self.vertex_tag(i),
                    "layer": LAYER_NAMES[i % 3],
                    "index": int(i // 3 + 1),
                    "x": float(self.pos[i, 0]),
                    "y": float(self.pos[i, 1]),
                    "theta": float(self.heading[i]),
                }
                for i in self.kept_ids
            ],
            "edges": [
                {"from": self.vertex_tag(u), "to": self.vertex_tag(v), "length": float(l)}
                for u, v, l in self.edges()
            ],
        }


def _candidate_edges(r_count: int) -> tuple[np.ndarray, np.ndarray]:
    """All nine edge families over their valid 1-based index ranges."""
    j = 3 * np.arange(r_count - 1)  # MID_j slots for j = 1..R-1
    q, p, r, qn = j, j + 1, j + 2, j + 3
    fams = [(q, qn), (q, p), (q, r), (p, qn), (r, qn)]
    if r_count >= 3:
        j2 = 3 * np.arange(r_count - 2)
        q2, p2, r2 = j2, j2 + 1, j2 + 2
        pn, rn = j2 + 4, j2 + 5
        fams += [(p2, pn), (r2, rn), (q2, pn), (q2, rn)]
    edge_from = np.concatenate([f for f, _ in fams])
    edge_to = np.concatenate([t for _, t in fams])
    return edge_from, edge_to


def build_lattice(ref: Polyline, b: float, h: float, env: Environment,
                  footprint: tuple[float, float]) -> LatticeRoadmap:
    """Construct the clipped lattice roadmap for one robot.

    Raises RoadmapError when the start or goal footprint itself collides or
    the resampled chain degenerates (reference folding back onto itself).
    """
    if h <= 0:
        raise RoadmapError("height parameter h must be positive")
    length, width = footprint
    mid, _, r_count = resample_points(ref, b)

    chords = mid[1:] - mid[:-1]  # (R-1, 2)
    chord_len = np.hypot(chords[:, 0], chords[:, 1])
    if np.any(chord_len < 1e-9):
        raise RoadmapError("resampled chain has a degenerate segment")
    tangents = chords / chord_len[:, None]
    midpoints = 0.5 * (mid[:-1] + mid[1:])
    chord_angle = np.arctan2(tangents[:, 1], tangents[:, 0])

    n = 3 * r_count - 2
    pos = np.zeros((n, 2))
    heading = np.zeros(n)
    mid_slots = 3 * np.arange(r_count)
    pos[mid_slots] = mid
    heading[mid_slots[:-1]] = chord_angle
    heading[mid_slots[-1]] = chord_angle[-1]

    above_slots = 3 * np.arange(r_count - 1) + 1
    below_slots = above_slots + 1
    normals = np.stack([-tangents[:, 1], tangents[:, 0]], axis=1)
    pos[above_slots] = midpoints + h * normals
    pos[below_slots] = midpoints - h * normals
    heading[above_slots] = chord_angle
    heading[below_slots] = chord_angle

    edge_from, edge_to = _candidate_edges(r_count)
    delta = pos[edge_to] - pos[edge_from]
    edge_len = np.hypot(delta[:, 0], delta[:, 1])
    if np.any(edge_len < 1e-9):
        raise RoadmapError("degenerate lattice edge (apex coincides with chain)")
    edge_heading = np.arctan2(delta[:, 1], delta[:, 0])
    edge_center = 0.5 * (pos[edge_from] + pos[edge_to])

    # one batched static test: all vertex footprints, then all edge sweeps
    # (a footprint translating along its own heading covers an elongated rect)
    centers = np.concatenate([pos, edge_center])
    headings = np.concatenate([heading, edge_heading])
    lengths = np.concatenate([np.full(n, length), length + edge_len])
    collides = batch_rect_collides_static(centers, headings, lengths, width, env)

    vertex_hit = collides[:n]
    if vertex_hit[0] or vertex_hit[3 * (r_count - 1)]:
        raise RoadmapError("start or goal footprint collides with the static environment")
    kept = ~vertex_hit
    edge_ok = kept[edge_from] & kept[edge_to] & ~collides[n:]

    return LatticeRoadmap(pos, heading, kept,
                          edge_from[edge_ok], edge_to[edge_ok], edge_len[edge_ok],
                          r_count, (b, h))


def shortest_path_length(rm: LatticeRoadmap) -> float:
    """Shortest directed start-to-goal distance; math.inf when unreachable.

    Vertex ids are a topological order, so one relaxation sweep suffices.
    """
    return distances_from_start(rm)[rm.goal_id]


def distances_from_start(rm: LatticeRoadmap) -> list[float]:
    """Shortest distance from the start to every vertex (inf when unreachable)."""
    dist = [math.inf] * len(rm.pos)
    dist[rm.start_id] = 0.0
    adj = rm.adj
    for u in range(len(rm.pos)):
        du = dist[u]
        if du == math.inf:
            continue
        for v, length, _, _ in adj[u]:
            nd = du + length
            if nd < dist[v]:
                dist[v] = nd
    return dist


def distances_to_goal(rm: LatticeRoadmap) -> list[float]:
    """Shortest distance from every vertex to the goal (inf when unreachable).

    One backward sweep in reverse id order (reverse topological order).
    """
    dist = [math.inf] * len(rm.pos)
    dist[rm.goal_id] = 0.0
    adj = rm.adj
    for u in range(len(rm.pos) - 1, -1, -1):
        best = dist[u]
        for v, length, _, _ in adj[u]:
            dv = dist[v]
            if dv < math.inf and dv + length < best:
                best = dv + length
        dist[u] = best
    return dist
