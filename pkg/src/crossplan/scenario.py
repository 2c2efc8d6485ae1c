"""Intersection scenario model, its JSON file format, and built-in instances.

A scenario bundles the static environment, the per-robot start/goal poses,
and the reference polylines the lattice roadmaps are grown around. Files are
strict: unknown keys are rejected and every structural invariant is checked
on load, so a scenario that loads is guaranteed usable by the planner.

The nine built-in instances share one map: a 60 x 60 square crossed by two
12-unit roads (two 3-unit lanes per direction per side) with the four corner
blocks as obstacles. Robots enter the four arms round-robin and are assigned
straight-through, left-turn, and right-turn references cyclically; robots
sharing an entry or exit lane are staggered into queues.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np

from .geometry import (
    Environment,
    GeometryError,
    Point2,
    Polyline,
    Pose,
    batch_rect_collides_static,
    point_at_arclength,
    polyline_length,
)


class ScenarioError(ValueError):
    """Malformed or invalid scenario document."""


@dataclass(frozen=True)
class RobotSpec:
    id: int
    start: Pose
    goal: Pose
    reference: Polyline


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    env: Environment
    robots: tuple[RobotSpec, ...]
    robot_length: float
    robot_width: float

    @property
    def n_robots(self) -> int:
        return len(self.robots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return scenario_to_document(self) == scenario_to_document(other)


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

_TOP_KEYS = {"name", "map", "obstacles", "robot_dims", "robots"}
_MAP_KEYS = {"width", "height"}
_DIM_KEYS = {"length", "width"}
_ROBOT_KEYS = {"id", "start", "goal", "reference"}
_POSE_KEYS = {"x", "y", "theta"}


def _require_keys(obj: dict, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")
    missing = allowed - set(obj)
    if missing:
        raise ScenarioError(f"{where}: missing keys {sorted(missing)}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {type(value).__name__}")
    return float(value)


def _xy_list(value, where: str) -> list[tuple[float, float]]:
    if not isinstance(value, list):
        raise ScenarioError(f"{where}: expected an array of [x, y] pairs")
    out = []
    for k, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ScenarioError(f"{where}[{k}]: expected an [x, y] pair")
        out.append((_number(pair[0], f"{where}[{k}].x"), _number(pair[1], f"{where}[{k}].y")))
    return out


def _parse_pose(obj, where: str) -> Pose:
    _require_keys(obj, _POSE_KEYS, where)
    try:
        return Pose(Point2(_number(obj["x"], where), _number(obj["y"], where)),
                    _number(obj["theta"], where))
    except GeometryError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def sweep_reference_collides(reference: Polyline, env: Environment,
                             length: float, width: float, step: float = 0.5) -> bool:
    """True if the footprint swept along the reference hits anything static.

    Poses are sampled every `step` units of arc length with heading taken
    from the containing segment.
    """
    total = polyline_length(reference)
    n = max(2, int(math.ceil(total / step)) + 1)
    centers = np.empty((n, 2))
    headings = np.empty(n)
    for k in range(n):
        s = total if k == n - 1 else total * k / (n - 1)
        pt, tan = point_at_arclength(reference, min(s, total))
        centers[k] = (pt.x, pt.y)
        headings[k] = math.atan2(tan[1], tan[0])
    return bool(batch_rect_collides_static(centers, headings, length, width, env).any())


def load_scenario(data: bytes | str) -> Scenario:
    """Parse and fully validate a scenario document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc

    _require_keys(doc, _TOP_KEYS, "document")
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise ScenarioError("name: expected a non-empty string")
    _require_keys(doc["map"], _MAP_KEYS, "map")
    width = _number(doc["map"]["width"], "map.width")
    height = _number(doc["map"]["height"], "map.height")
    if not isinstance(doc["obstacles"], list):
        raise ScenarioError("obstacles: expected an array of polygons")
    polygons = [_xy_list(poly, f"obstacles[{k}]") for k, poly in enumerate(doc["obstacles"])]
    try:
        env = Environment.from_polygons(width, height, polygons)
    except GeometryError as exc:
        raise ScenarioError(f"obstacles: {exc}") from exc

    _require_keys(doc["robot_dims"], _DIM_KEYS, "robot_dims")
    r_len = _number(doc["robot_dims"]["length"], "robot_dims.length")
    r_wid = _number(doc["robot_dims"]["width"], "robot_dims.width")
    if r_len <= 0 or r_wid <= 0:
        raise ScenarioError("robot_dims: length and width must be positive")

    if not isinstance(doc["robots"], list) or not doc["robots"]:
        raise ScenarioError("robots: expected a non-empty array")
    robots = []
    for k, robj in enumerate(doc["robots"]):
        _require_keys(robj, _ROBOT_KEYS, f"robots[{k}]")
        if isinstance(robj["id"], bool) or not isinstance(robj["id"], int):
            raise ScenarioError(f"robots[{k}].id: expected an integer")
        rid = robj["id"]
        start = _parse_pose(robj["start"], f"robots[{k}].start")
        goal = _parse_pose(robj["goal"], f"robots[{k}].goal")
        try:
            reference = Polyline.from_xy(_xy_list(robj["reference"], f"robots[{k}].reference"))
        except GeometryError as exc:
            raise ScenarioError(f"robots[{k}].reference: {exc}") from exc
        robots.append(RobotSpec(rid, start, goal, reference))

    ids = sorted(r.id for r in robots)
    if ids != list(range(1, len(robots) + 1)):
        raise ScenarioError(f"robots: ids must be unique and contiguous from 1, got {ids}")
    robots.sort(key=lambda r: r.id)

    for robot in robots:
        ref = robot.reference
        if ref.points[0].distance_to(robot.start.position) > 1e-6:
            raise ScenarioError(
                f"robot {robot.id}: reference must begin at start position, "
                f"begins at ({ref.points[0].x}, {ref.points[0].y})")
        if ref.points[-1].distance_to(robot.goal.position) > 1e-6:
            raise ScenarioError(
                f"robot {robot.id}: reference must end at goal position, "
                f"ends at ({ref.points[-1].x}, {ref.points[-1].y})")
        if sweep_reference_collides(ref, env, r_len, r_wid, step=0.5):
            raise ScenarioError(
                f"robot {robot.id}: reference swept with the {r_len} x {r_wid} "
                f"footprint collides with the static environment")

    return Scenario(doc["name"], env, tuple(robots), r_len, r_wid)


def scenario_to_document(s: Scenario) -> dict[str, Any]:
    """Plain-dict form of a scenario, matching the file schema."""
    return {
        "name": s.name,
        "map": {"width": s.env.width, "height": s.env.height},
        "obstacles": [[[float(x), float(y)] for x, y in ob.pts] for ob in s.env.obstacles],
        "robot_dims": {"length": s.robot_length, "width": s.robot_width},
        "robots": [
            {
                "id": r.id,
                "start": {"x": r.start.position.x, "y": r.start.position.y, "theta": r.start.heading},
                "goal": {"x": r.goal.position.x, "y": r.goal.position.y, "theta": r.goal.heading},
                "reference": [[p.x, p.y] for p in r.reference.points],
            }
            for r in s.robots
        ],
    }


def serialize_scenario(s: Scenario) -> bytes:
    return (json.dumps(scenario_to_document(s), indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Built-in instances
# ---------------------------------------------------------------------------

MAP_SIDE = 60.0
ROAD_HALF = 6.0  # roads span center +- 6
ROBOT_LENGTH = 3.2
ROBOT_WIDTH = 0.8

_CENTER = MAP_SIDE / 2.0
_LO = _CENTER - ROAD_HALF  # 24
_HI = _CENTER + ROAD_HALF  # 36
_OUTER = _LO + 1.5  # first lane center, 25.5
_INNER = _LO + 4.5  # second lane center, 28.5
_QUEUE_GAP = 6.0
_EDGE_MARGIN = 2.0
_ARC_POINTS = 3  # intermediate vertices per quarter turn

_MANEUVERS = ("straight", "left", "right")


def _rotate_point(x: float, y: float, quarter_turns: int) -> tuple[float, float]:
    k = quarter_turns % 4
    if k == 0:
        return x, y
    if k == 1:
        return MAP_SIDE - y, x
    if k == 2:
        return MAP_SIDE - x, MAP_SIDE - y
    return y, MAP_SIDE - x


def _arc(cx: float, cy: float, radius: float, a0: float, a1: float) -> list[tuple[float, float]]:
    """Quarter-turn approximation: endpoints plus _ARC_POINTS chord vertices."""
    pts = []
    for k in range(_ARC_POINTS + 2):
        a = a0 + (a1 - a0) * k / (_ARC_POINTS + 1)
        pts.append((cx + radius * math.cos(a), cy + radius * math.sin(a)))
    return pts


def _arm0_path(maneuver: str, start_dist: float, goal_dist: float) -> list[tuple[float, float]]:
    """Reference polyline for a robot entering from the west edge heading east."""
    if maneuver == "straight":
        return [(start_dist, _OUTER), (MAP_SIDE - goal_dist, _OUTER)]
    if maneuver == "left":
        # quarter arc around the block corner left of entry, radius 7.5
        radius = _HI - _INNER
        pts = [(start_dist, _INNER)]
        pts += _arc(_LO, _HI, radius, -math.pi / 2, 0.0)
        pts.append((_LO + radius, MAP_SIDE - goal_dist))
        return pts
    if maneuver == "right":
        # quarter arc around the block corner right of entry, radius 4.5
        radius = _INNER - _LO
        pts = [(start_dist, _INNER)]
        pts += _arc(_LO, _LO, radius, math.pi / 2, 0.0)
        pts.append((_LO + radius, goal_dist))
        return pts
    raise ValueError(f"unknown maneuver {maneuver!r}")


def _arm0_headings(maneuver: str) -> tuple[float, float]:
    """(start heading, goal heading) in the arm-0 frame."""
    if maneuver == "straight":
        return 0.0, 0.0
    if maneuver == "left":
        return 0.0, math.pi / 2
    return 0.0, -math.pi / 2


def _builtin_robot_layout(n_robots: int) -> list[tuple[int, int, str]]:
    """(robot id, arm, maneuver) with arms and maneuvers assigned round-robin."""
    return [(m, (m - 1) % 4, _MANEUVERS[(m - 1) % 3]) for m in range(1, n_robots + 1)]


def _build_instance(index: int) -> Scenario:
    n_robots = index + 1
    layout = _builtin_robot_layout(n_robots)

    # queue ranks on shared entry lanes (front of queue = lowest id)
    entry_rank: dict[tuple[int, str], int] = {}
    entry_size: dict[tuple[int, str], int] = {}
    for rid, arm, maneuver in layout:
        lane = "outer" if maneuver == "straight" else "inner"
        key = (arm, lane)
        entry_rank[rid] = entry_size.get(key, 0)
        entry_size[key] = entry_rank[rid] + 1
    entry_total = {}
    for rid, arm, maneuver in layout:
        lane = "outer" if maneuver == "straight" else "inner"
        entry_total[rid] = entry_size[(arm, lane)]

    # goal ranks on shared exit lanes, keyed by the world-frame exit lane
    # (probe the final straight segment of a provisional path: rotation
    # changes lane coordinates, so arm-0 values are not usable directly)
    exit_key: dict[int, tuple] = {}
    for rid, arm, maneuver in layout:
        probe = [_rotate_point(x, y, arm) for x, y in _arm0_path(maneuver, _EDGE_MARGIN, _EDGE_MARGIN)[-2:]]
        (x0, y0), (x1, y1) = probe
        if abs(x1 - x0) < 1e-9:
            exit_key[rid] = ("v", round(x0, 6), math.copysign(1.0, y1 - y0))
        else:
            exit_key[rid] = ("h", round(y0, 6), math.copysign(1.0, x1 - x0))
    goal_rank: dict[int, int] = {}
    seen: dict[tuple, int] = {}
    for rid, _, _ in layout:
        goal_rank[rid] = seen.get(exit_key[rid], 0)
        seen[exit_key[rid]] = goal_rank[rid] + 1

    robots = []
    for rid, arm, maneuver in layout:
        start_dist = _EDGE_MARGIN + _QUEUE_GAP * (entry_total[rid] - 1 - entry_rank[rid])
        goal_dist = _EDGE_MARGIN + _QUEUE_GAP * goal_rank[rid]
        path = _arm0_path(maneuver, start_dist, goal_dist)
        h0, h1 = _arm0_headings(maneuver)
        quarter = arm  # arm k enters rotated k quarter turns CCW from west
        pts = [_rotate_point(x, y, quarter) for x, y in path]
        start = Pose(Point2(*pts[0]), h0 + quarter * math.pi / 2)
        goal = Pose(Point2(*pts[-1]), h1 + quarter * math.pi / 2)
        robots.append(RobotSpec(rid, start, goal, Polyline.from_xy(pts)))

    env = Environment.from_polygons(MAP_SIDE, MAP_SIDE, [
        [(0, 0), (_LO, 0), (_LO, _LO), (0, _LO)],
        [(_HI, 0), (MAP_SIDE, 0), (MAP_SIDE, _LO), (_HI, _LO)],
        [(_HI, _HI), (MAP_SIDE, _HI), (MAP_SIDE, MAP_SIDE), (_HI, MAP_SIDE)],
        [(0, _HI), (_LO, _HI), (_LO, MAP_SIDE), (0, MAP_SIDE)],
    ])
    return Scenario(f"instance-{index}", env, tuple(robots), ROBOT_LENGTH, ROBOT_WIDTH)


@lru_cache(maxsize=1)
def builtin_instances() -> tuple[Scenario, ...]:
    """The nine cross-intersection instances with 2 through 10 robots."""
    return tuple(_build_instance(k) for k in range(1, 10))


def get_builtin(name: str) -> Scenario | None:
    for s in builtin_instances():
        if s.name == name:
            return s
    return None
