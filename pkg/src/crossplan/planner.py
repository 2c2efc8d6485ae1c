"""Composite-space planning over per-robot lattice roadmaps.

A composite vertex assigns one roadmap vertex to every robot; the planner
grows a tree of composite vertices from the joint start, expanding toward
sampled targets one synchronized step at a time. Within a step each robot
either traverses one roadmap edge or stays put; stays cost nothing, so the
objective only counts traversed edge lengths.

Step semantics: a moving robot interpolates linearly along its edge with the
heading fixed to the edge direction; a staying robot holds the rest pose of
its vertex (the lattice heading). The planner validates each candidate step
with an exact continuous-time test: with fixed headings the relative motion
of any robot pair is linear, so a separating-axis test of one footprint
against the other's swept hull decides the whole step. Destination rest
poses are checked as well, which makes every tree vertex rest-valid and lets
pairs where both robots stay be skipped outright. `validate_transition`
keeps the simpler sampled semantics used by the exact oracle and by tests.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    Environment,
    OrientedRect,
    Point2,
    Pose,
    rect_collides_static,
    rects_overlap,
)
from .roadmap import LatticeRoadmap, distances_to_goal
from .rng import RngStream

# a composite vertex is one roadmap vertex id per robot
CompositeVertex = tuple[int, ...]

DEFAULT_GOAL_BIAS = 0.1
DEFAULT_K_SAMPLES = 8
DEFAULT_BUDGET = 2000
ORACLE_STATE_LIMIT = 1_000_000


class PlannerError(ValueError):
    """Violated planner contract (illegal move, empty roadmap list, bad grid)."""


class ResourceError(RuntimeError):
    """Exact search would exceed its configured state-space limit."""


@dataclass
class CompositePlan:
    """A synchronized joint plan: step 0 is the joint start, the last step
    the joint goal; `cost` is the sum of traversed edge lengths."""

    steps: list[CompositeVertex]
    cost: float
    roadmaps: list[LatticeRoadmap] = field(repr=False)

    @property
    def n_robots(self) -> int:
        return len(self.steps[0])

    @property
    def n_steps(self) -> int:
        return len(self.steps) - 1

    def per_robot_paths(self) -> list[list[int]]:
        """Vertex sequence per robot, with repeats where the robot waits."""
        n = self.n_robots
        return [[step[i] for step in self.steps] for i in range(n)]


@dataclass(frozen=True)
class PlanFailure:
    """Best partial progress when the budget ran out before reaching the goal."""

    robots_at_goal: int
    robots_total: int
    remaining_distance: float


@dataclass(frozen=True)
class TimedTrajectory:
    robot_id: int
    samples: tuple[tuple[float, Pose], ...]

    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.samples)


@dataclass(frozen=True)
class ValidationEvent:
    kind: str  # "pairwise" or "static"
    time: float
    robots: tuple[int, ...]


@dataclass
class ValidationReport:
    events: list[ValidationEvent]

    @property
    def ok(self) -> bool:
        return not self.events


def _move_data(rm: LatticeRoadmap, frm: int, to: int):
    """(length, cos, sin) of the edge frm->to, or None for a stay; raises on
    anything else."""
    if to == frm:
        return None
    for v, length, c, s in rm.adj[frm]:
        if v == to:
            return (length, c, s)
    raise PlannerError(f"illegal move: {frm} -> {to} is neither an edge nor a stay")


def _corners(cx: float, cy: float, c: float, s: float, hl: float, hw: float):
    ax, ay = hl * c, hl * s
    bx, by = -hw * s, hw * c
    return (
        (cx + ax + bx, cy + ay + by),
        (cx - ax + bx, cy - ay + by),
        (cx - ax - bx, cy - ay - by),
        (cx + ax - bx, cy + ay - by),
    )


def _axis_separates(ca, cb, ax, ay) -> bool:
    amin = amax = ca[0][0] * ax + ca[0][1] * ay
    for x, y in ca[1:]:
        d = x * ax + y * ay
        if d < amin:
            amin = d
        elif d > amax:
            amax = d
    bmin = bmax = cb[0][0] * ax + cb[0][1] * ay
    for x, y in cb[1:]:
        d = x * ax + y * ay
        if d < bmin:
            bmin = d
        elif d > bmax:
            bmax = d
    return amax < bmin or bmax < amin


def _sweep_pair_overlaps(ca, cos_a, sin_a, cb, cos_b, sin_b, wx, wy) -> bool:
    """Exact continuous-time overlap of rect B translating by (wx, wy)
    relative to rect A, both with fixed headings."""
    swept = cb + tuple((x + wx, y + wy) for x, y in cb)
    if _axis_separates(ca, swept, cos_a, sin_a) or _axis_separates(ca, swept, -sin_a, cos_a):
        return False
    if _axis_separates(ca, swept, cos_b, sin_b) or _axis_separates(ca, swept, -sin_b, cos_b):
        return False
    wn = math.hypot(wx, wy)
    if wn > 1e-12 and _axis_separates(ca, swept, -wy / wn, wx / wn):
        return False
    return True


def _static_pair_overlaps(ca, cos_a, sin_a, cb, cos_b, sin_b) -> bool:
    if _axis_separates(ca, cb, cos_a, sin_a) or _axis_separates(ca, cb, -sin_a, cos_a):
        return False
    if _axis_separates(ca, cb, cos_b, sin_b) or _axis_separates(ca, cb, -sin_b, cos_b):
        return False
    return True


class _StepChecker:
    """Exact per-step validation with memoization over (from, to) pairs."""

    def __init__(self, roadmaps: list[LatticeRoadmap], dims: tuple[float, float]):
        self.roadmaps = roadmaps
        self.hl = 0.5 * dims[0]
        self.hw = 0.5 * dims[1]
        self.half_diag = math.hypot(self.hl, self.hw)
        self.memo: dict[tuple[CompositeVertex, CompositeVertex], bool] = {}

    def rest_valid(self, key: CompositeVertex) -> bool:
        """Pairwise validity of all rest poses at a composite vertex."""
        rms = self.roadmaps
        hl, hw = self.hl, self.hw
        n = len(key)
        data = []
        for i in range(n):
            rm, v = rms[i], key[i]
            x, y, c, s = rm.pos_x[v], rm.pos_y[v], rm.cos_h[v], rm.sin_h[v]
            data.append((x, y, c, s, _corners(x, y, c, s, hl, hw)))
        limit = 2.0 * self.half_diag
        for i in range(n):
            xi, yi, ci, si, cor_i = data[i]
            for j in range(i + 1, n):
                xj, yj, cj, sj, cor_j = data[j]
                if math.hypot(xj - xi, yj - yi) > limit:
                    continue
                if _static_pair_overlaps(cor_i, ci, si, cor_j, cj, sj):
                    return False
        return True

    def step_valid(self, frm: CompositeVertex, to: CompositeVertex) -> bool:
        memo = self.memo
        cached = memo.get((frm, to))
        if cached is not None:
            return cached
        result = self._check(frm, to)
        memo[(frm, to)] = result
        return result

    def _check(self, frm: CompositeVertex, to: CompositeVertex) -> bool:
        rms = self.roadmaps
        hl, hw = self.hl, self.hw
        half_diag = self.half_diag
        n = len(frm)
        # per robot: start pose of the step, displacement, step heading
        sx = [0.0] * n
        sy = [0.0] * n
        dx = [0.0] * n
        dy = [0.0] * n
        hc = [0.0] * n
        hs = [0.0] * n
        moved = [False] * n
        for i in range(n):
            rm, v, w = rms[i], frm[i], to[i]
            x, y = rm.pos_x[v], rm.pos_y[v]
            sx[i], sy[i] = x, y
            if w == v:
                hc[i], hs[i] = rm.cos_h[v], rm.sin_h[v]
            else:
                move = _move_data(rm, v, w)
                _, hc[i], hs[i] = move
                dx[i] = rm.pos_x[w] - x
                dy[i] = rm.pos_y[w] - y
                moved[i] = True

        start_corners: list = [None] * n
        for i in range(n):
            for j in range(i + 1, n):
                if not moved[i] and not moved[j]:
                    continue  # both rest poses already valid at `frm`
                # circle prefilter over the whole step, covering rest poses too
                mx = (sx[j] + 0.5 * dx[j]) - (sx[i] + 0.5 * dx[i])
                my = (sy[j] + 0.5 * dy[j]) - (sy[i] + 0.5 * dy[i])
                reach = (2.0 * half_diag + 0.5 * math.hypot(dx[i], dy[i])
                         + 0.5 * math.hypot(dx[j], dy[j]))
                if mx * mx + my * my > reach * reach:
                    continue
                ci = start_corners[i]
                if ci is None:
                    ci = start_corners[i] = _corners(sx[i], sy[i], hc[i], hs[i], hl, hw)
                cj = start_corners[j]
                if cj is None:
                    cj = start_corners[j] = _corners(sx[j], sy[j], hc[j], hs[j], hl, hw)
                if _sweep_pair_overlaps(ci, hc[i], hs[i], cj, hc[j], hs[j],
                                        dx[j] - dx[i], dy[j] - dy[i]):
                    return False
                # destination rest poses keep every tree vertex rest-valid
                rmi, rmj = rms[i], rms[j]
                wi, wj = to[i], to[j]
                ri = _corners(rmi.pos_x[wi], rmi.pos_y[wi], rmi.cos_h[wi], rmi.sin_h[wi], hl, hw)
                rj = _corners(rmj.pos_x[wj], rmj.pos_y[wj], rmj.cos_h[wj], rmj.sin_h[wj], hl, hw)
                if _static_pair_overlaps(ri, rmi.cos_h[wi], rmi.sin_h[wi],
                                         rj, rmj.cos_h[wj], rmj.sin_h[wj]):
                    return False
        return True


def validate_transition(roadmaps: list[LatticeRoadmap], frm: CompositeVertex,
                        to: CompositeVertex, dims: tuple[float, float],
                        k_samples: int = DEFAULT_K_SAMPLES) -> bool:
    """Sampled validity of one synchronized step.

    True iff at every interpolation fraction t in {0, 1/K, ..., 1} no two
    footprints overlap; moving robots take the edge direction as heading and
    staying robots hold their vertex rest pose. Raises PlannerError when a
    robot's move is neither a roadmap edge nor a stay.
    """
    if len(frm) != len(roadmaps) or len(to) != len(roadmaps):
        raise PlannerError("composite vertex arity does not match the roadmap list")
    n = len(frm)
    length, width = dims
    moves = [_move_data(roadmaps[i], frm[i], to[i]) for i in range(n)]
    for k in range(k_samples + 1):
        t = k / k_samples
        rects = []
        for i in range(n):
            rm = roadmaps[i]
            v, w = frm[i], to[i]
            if moves[i] is None:
                rects.append(OrientedRect(Point2(rm.pos_x[v], rm.pos_y[v]),
                                          float(rm.heading[v]), length, width))
            else:
                x = rm.pos_x[v] + t * (rm.pos_x[w] - rm.pos_x[v])
                y = rm.pos_y[v] + t * (rm.pos_y[w] - rm.pos_y[v])
                _, c, s = moves[i]
                rects.append(OrientedRect(Point2(x, y), math.atan2(s, c), length, width))
        for i in range(n):
            for j in range(i + 1, n):
                if rects_overlap(rects[i], rects[j]):
                    return False
    return True


def compute_plan_cost(roadmaps: list[LatticeRoadmap], steps: list[CompositeVertex]) -> float:
    """Sum of traversed edge lengths along a step sequence; stays are free."""
    total = 0.0
    for a, b in zip(steps, steps[1:]):
        for i, rm in enumerate(roadmaps):
            if b[i] != a[i]:
                move = _move_data(rm, a[i], b[i])
                total += move[0]
    return total


def plan_composite(roadmaps: list[LatticeRoadmap], dims: tuple[float, float],
                   budget: int = DEFAULT_BUDGET, rng: RngStream | None = None,
                   p_goal: float = DEFAULT_GOAL_BIAS,
                   stall_window: int | None = None) -> CompositePlan | PlanFailure:
    """Tree search over the implicit composite roadmap.

    Each iteration samples a target (the joint goal with probability p_goal,
    otherwise one random roadmap vertex position per robot), picks the tree
    vertex minimizing the summed Euclidean distance to the target, and
    expands it by the per-robot move (stay or edge) whose endpoint is nearest
    the robot's target component. Valid transitions insert the new composite
    vertex or reparent it when reached more cheaply.

    The search stops at `budget` iterations, immediately when a goal plan
    matches the per-robot shortest-path lower bound (no better plan exists),
    or after `stall_window` iterations without goal-cost improvement once a
    plan is known. Returns the lowest-cost goal-reaching plan, otherwise a
    PlanFailure with the best progress.
    """
    if not roadmaps:
        raise PlannerError("roadmap list is empty")
    if rng is None:
        rng = RngStream(0)
    n = len(roadmaps)
    checker = _StepChecker(roadmaps, dims)

    start_key: CompositeVertex = tuple(rm.start_id for rm in roadmaps)
    goal_key: CompositeVertex = tuple(rm.goal_id for rm in roadmaps)
    goal_x = [rm.pos_x[rm.goal_id] for rm in roadmaps]
    goal_y = [rm.pos_y[rm.goal_id] for rm in roadmaps]
    goal_flat = np.array([c for i in range(n) for c in (goal_x[i], goal_y[i])])

    # roadmap-metric distance to goal, one table per robot; drives the
    # goal-directed move choice and yields the joint lower bound
    dtg = [distances_to_goal(rm) for rm in roadmaps]
    lower_bound = 0.0
    for i, rm in enumerate(roadmaps):
        d = dtg[i][rm.start_id]
        lower_bound += d if d < math.inf else 0.0

    def progress(key: CompositeVertex) -> PlanFailure:
        at_goal = sum(1 for i in range(n) if key[i] == roadmaps[i].goal_id)
        rem = sum(math.hypot(roadmaps[i].pos_x[key[i]] - goal_x[i],
                             roadmaps[i].pos_y[key[i]] - goal_y[i]) for i in range(n))
        return PlanFailure(at_goal, n, rem)

    if not checker.rest_valid(start_key):
        return progress(start_key)

    # tree storage: flat position rows for the vectorized nearest query
    tree_xy = np.empty((budget + 2, 2 * n))
    keys: list[CompositeVertex] = [start_key]
    index: dict[CompositeVertex, int] = {start_key: 0}
    cost = [0.0]
    parent = [-1]
    root_row = [c for i in range(n)
                for c in (roadmaps[i].pos_x[start_key[i]], roadmaps[i].pos_y[start_key[i]])]
    tree_xy[0] = root_row

    def goal_distance_of_row(row) -> float:
        return sum(math.hypot(row[2 * i] - goal_x[i], row[2 * i + 1] - goal_y[i])
                   for i in range(n))

    best_goal_dist = goal_distance_of_row(root_row)
    best_goal_idx = 0
    goal_idx = 0 if start_key == goal_key else -1
    last_improve = 0

    kept_lists = [rm.kept_ids.tolist() for rm in roadmaps]
    pos_x = [rm.pos_x for rm in roadmaps]
    pos_y = [rm.pos_y for rm in roadmaps]
    adj = [rm.adj for rm in roadmaps]
    hypot = math.hypot
    eps = 1e-9

    size = 1
    for it in range(budget):
        if goal_idx >= 0:
            if cost[goal_idx] <= lower_bound + eps:
                break
            if stall_window is not None and it - last_improve >= stall_window:
                break

        if rng.next_uniform() < p_goal:
            near = best_goal_idx
            target = None  # goal positions
        else:
            target = [0.0] * (2 * n)
            for i in range(n):
                kl = kept_lists[i]
                vid = kl[rng.next_below(len(kl))]
                target[2 * i] = pos_x[i][vid]
                target[2 * i + 1] = pos_y[i][vid]
            diff = tree_xy[:size] - target
            sq = diff * diff
            per_robot = sq[:, 0::2] + sq[:, 1::2]
            np.sqrt(per_robot, out=per_robot)
            near = int(per_robot.sum(axis=1).argmin())

        frm = keys[near]
        new_key_list = list(frm)
        step_len = 0.0
        moved = False
        for i in range(n):
            vi = frm[i]
            if target is None:
                # toward the goal, nearest is measured along the roadmap so
                # the walk follows each robot's shortest path exactly
                dtg_i = dtg[i]
                best_d = dtg_i[vi]
                best_v = vi
                best_len = 0.0
                for w, elen, _, _ in adj[i][vi]:
                    d = dtg_i[w] + elen
                    if d < best_d:
                        best_d = d
                        best_v = w
                        best_len = elen
            else:
                tx, ty = target[2 * i], target[2 * i + 1]
                px, py = pos_x[i], pos_y[i]
                best_d = hypot(px[vi] - tx, py[vi] - ty)
                best_v = vi
                best_len = 0.0
                for w, elen, _, _ in adj[i][vi]:
                    d = hypot(px[w] - tx, py[w] - ty)
                    if d < best_d:
                        best_d = d
                        best_v = w
                        best_len = elen
            if best_v != vi:
                new_key_list[i] = best_v
                step_len += best_len
                moved = True
        if not moved:
            continue
        new_key = tuple(new_key_list)

        if not checker.step_valid(frm, new_key):
            continue

        new_cost = cost[near] + step_len
        existing = index.get(new_key)
        if existing is None:
            idx = len(keys)
            keys.append(new_key)
            index[new_key] = idx
            cost.append(new_cost)
            parent.append(near)
            row = [c for i in range(n)
                   for c in (pos_x[i][new_key[i]], pos_y[i][new_key[i]])]
            tree_xy[size] = row
            size += 1
            gd = goal_distance_of_row(row)
            if gd < best_goal_dist:
                best_goal_dist = gd
                best_goal_idx = idx
            if new_key == goal_key:
                goal_idx = idx
                last_improve = it
        elif new_cost < cost[existing] - 1e-12:
            cost[existing] = new_cost
            parent[existing] = near
            if existing == goal_idx:
                last_improve = it

    if goal_idx < 0:
        return progress(keys[best_goal_idx])

    chain = []
    at = goal_idx
    while at >= 0:
        chain.append(keys[at])
        at = parent[at]
    chain.reverse()
    return CompositePlan(chain, compute_plan_cost(roadmaps, chain), list(roadmaps))


def oracle_time_expanded(roadmaps: list[LatticeRoadmap], dims: tuple[float, float],
                         horizon: int, k_samples: int = DEFAULT_K_SAMPLES,
                         state_limit: int = ORACLE_STATE_LIMIT) -> CompositePlan | None:
    """Exact minimum-cost plan within `horizon` steps, or None when infeasible.

    Uniform-cost search over the time-expanded product graph with wait
    actions; step semantics are validate_transition's. Intended for small
    two-robot roadmaps; raises ResourceError beyond `state_limit` states.
    """
    if not roadmaps:
        raise PlannerError("roadmap list is empty")
    n = len(roadmaps)
    product = 1
    for rm in roadmaps:
        product *= max(1, len(rm.kept_ids))
    if product * (horizon + 1) > state_limit:
        raise ResourceError(
            f"time-expanded product has ~{product * (horizon + 1)} states "
            f"(limit {state_limit})")

    start_key = tuple(rm.start_id for rm in roadmaps)
    goal_key = tuple(rm.goal_id for rm in roadmaps)
    valid_memo: dict[tuple[CompositeVertex, CompositeVertex], bool] = {}

    def step_ok(frm: CompositeVertex, to: CompositeVertex) -> bool:
        got = valid_memo.get((frm, to))
        if got is None:
            got = validate_transition(roadmaps, frm, to, dims, k_samples)
            valid_memo[(frm, to)] = got
        return got

    best: dict[tuple[CompositeVertex, int], float] = {(start_key, 0): 0.0}
    came: dict[tuple[CompositeVertex, int], tuple[CompositeVertex, int] | None] = {
        (start_key, 0): None}
    heap: list = [(0.0, 0, start_key, 0)]
    tie = 0

    while heap:
        c, _, key, t = heapq.heappop(heap)
        if c > best.get((key, t), math.inf):
            continue
        if key == goal_key:
            steps = []
            node = (key, t)
            while node is not None:
                steps.append(node[0])
                node = came[node]
            steps.reverse()
            return CompositePlan(steps, c, list(roadmaps))
        if t == horizon:
            continue
        options = []
        for i in range(n):
            rm = roadmaps[i]
            vi = key[i]
            opts = [(vi, 0.0)]
            opts.extend((w, elen) for w, elen, _, _ in rm.adj[vi])
            options.append(opts)
        for combo in itertools.product(*options):
            to = tuple(w for w, _ in combo)
            if to == key:
                continue
            add = sum(elen for _, elen in combo)
            state = (to, t + 1)
            nc = c + add
            if nc < best.get(state, math.inf) - 1e-12 and step_ok(key, to):
                best[state] = nc
                came[state] = (key, t)
                tie += 1
                heapq.heappush(heap, (nc, tie, to, t + 1))
    return None


def extract_trajectories(plan: CompositePlan, samples_per_step: int = DEFAULT_K_SAMPLES,
                         robot_ids: list[int] | None = None) -> list[TimedTrajectory]:
    """Time-parameterized per-robot trajectories; step k spans [k, k+1].

    Moving steps emit `samples_per_step` samples with edge-direction heading;
    stays hold the vertex rest pose. A final sample at the plan's end time
    carries the goal rest pose. All robots share one time grid.
    """
    if samples_per_step < 2:
        raise PlannerError("samples_per_step must be at least 2")
    rms = plan.roadmaps
    n = plan.n_robots
    ids = robot_ids if robot_ids is not None else list(range(1, n + 1))
    if len(ids) != n:
        raise PlannerError("robot_ids length does not match the plan")
    out = []
    m = samples_per_step
    for i in range(n):
        rm = rms[i]
        samples: list[tuple[float, Pose]] = []
        for k in range(plan.n_steps):
            v, w = plan.steps[k][i], plan.steps[k + 1][i]
            x0, y0 = rm.pos_x[v], rm.pos_y[v]
            if w == v:
                pose = Pose(Point2(x0, y0), float(rm.heading[v]))
                samples.extend((k + j / m, pose) for j in range(m))
            else:
                x1, y1 = rm.pos_x[w], rm.pos_y[w]
                heading = math.atan2(y1 - y0, x1 - x0)
                for j in range(m):
                    t = j / m
                    samples.append((k + t, Pose(Point2(x0 + t * (x1 - x0),
                                                       y0 + t * (y1 - y0)), heading)))
        last = plan.steps[-1][i]
        samples.append((float(plan.n_steps),
                        Pose(Point2(rm.pos_x[last], rm.pos_y[last]), float(rm.heading[last]))))
        out.append(TimedTrajectory(ids[i], tuple(samples)))
    return out


def validate_plan(trajs: list[TimedTrajectory], env: Environment,
                  dims: tuple[float, float], resolution: int) -> ValidationReport:
    """Independent audit of trajectories at `resolution` checks per step.

    Positions between trajectory samples interpolate linearly with the
    heading held from the earlier sample. Reports every pairwise-overlap
    and static-collision event; an empty report means validated.
    """
    if not trajs:
        return ValidationReport([])
    grid = trajs[0].times()
    for tr in trajs[1:]:
        if tr.times() != grid:
            raise PlannerError("trajectories do not share a time grid")
    length, width = dims
    horizon = grid[-1]
    total_checks = max(1, int(round(resolution * horizon))) if horizon > 0 else 1
    events: list[ValidationEvent] = []
    n = len(trajs)

    def pose_at(tr: TimedTrajectory, seg: int, t: float) -> Pose:
        t0, p0 = tr.samples[seg]
        if seg + 1 >= len(tr.samples):
            return p0
        t1, p1 = tr.samples[seg + 1]
        if t1 <= t0:
            return p0
        a = (t - t0) / (t1 - t0)
        return Pose(Point2(p0.position.x + a * (p1.position.x - p0.position.x),
                           p0.position.y + a * (p1.position.y - p0.position.y)),
                    p0.heading)

    seg_ptr = [0] * n
    for q in range(total_checks + 1):
        t = horizon * q / total_checks if horizon > 0 else 0.0
        rects = []
        for i, tr in enumerate(trajs):
            while seg_ptr[i] + 1 < len(tr.samples) and tr.samples[seg_ptr[i] + 1][0] <= t:
                seg_ptr[i] += 1
            pose = pose_at(tr, seg_ptr[i], t)
            rects.append(OrientedRect(pose.position, pose.heading, length, width))
        for i in range(n):
            if rect_collides_static(rects[i], env):
                events.append(ValidationEvent("static", t, (trajs[i].robot_id,)))
            for j in range(i + 1, n):
                if rects_overlap(rects[i], rects[j]):
                    events.append(ValidationEvent(
                        "pairwise", t, (trajs[i].robot_id, trajs[j].robot_id)))
    return ValidationReport(events)


def trajectories_to_document(trajs: list[TimedTrajectory]) -> dict:
    """Plan export: per robot, an array of {t, x, y, theta} waypoints."""
    return {
        "robots": [
            {
                "id": tr.robot_id,
                "samples": [
                    {"t": t, "x": p.position.x, "y": p.position.y, "theta": p.heading}
                    for t, p in tr.samples
                ],
            }
            for tr in trajs
        ]
    }
