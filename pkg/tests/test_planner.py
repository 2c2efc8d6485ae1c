import math

import pytest

from crossplan.geometry import Environment, Point2, Polyline, Pose
from crossplan.planner import (
    CompositePlan,
    PlanFailure,
    PlannerError,
    ResourceError,
    TimedTrajectory,
    compute_plan_cost,
    extract_trajectories,
    oracle_time_expanded,
    plan_composite,
    trajectories_to_document,
    validate_plan,
    validate_transition,
)
from crossplan.roadmap import build_lattice, shortest_path_length
from crossplan.rng import RngStream

DIMS = (3.2, 0.8)


def rm_from(ref_pts, b, h, env):
    return build_lattice(Polyline.from_xy(ref_pts), b, h, env, DIMS)


@pytest.fixture
def open20():
    return Environment(20, 20)


@pytest.fixture
def open60():
    return Environment(60, 60)


class TestValidateTransition:
    def test_parallel_lanes_clear(self, open20):
        a = rm_from([(2, 3), (10, 3)], 8.0, 1.0, open20)
        b = rm_from([(2, 7), (10, 7)], 8.0, 1.0, open20)
        frm = (a.start_id, b.start_id)
        to = (a.goal_id, b.goal_id)
        assert validate_transition([a, b], frm, to, DIMS)

    def test_swap_along_same_segment(self, open20):
        a = rm_from([(2, 5), (6, 5)], 4.0, 1.0, open20)
        b = rm_from([(6, 5), (2, 5)], 4.0, 1.0, open20)
        frm = (a.start_id, b.start_id)
        to = (a.goal_id, b.goal_id)
        assert not validate_transition([a, b], frm, to, DIMS)

    def test_stationary_robot_grazed(self, open20):
        a = rm_from([(10, 5), (10, 12)], 8.0, 1.0, open20)  # stays at start
        b = rm_from([(4, 5.5), (16, 5.5)], 12.0, 1.0, open20)
        frm = (a.start_id, b.start_id)
        to = (a.start_id, b.goal_id)
        assert not validate_transition([a, b], frm, to, DIMS)

    def test_illegal_move_rejected(self, open20):
        a = rm_from([(2, 5), (10, 5)], 2.0, 1.0, open20)
        with pytest.raises(PlannerError, match="illegal move"):
            validate_transition([a], (a.start_id,), (a.goal_id,), DIMS)


class TestPlanComposite:
    def test_single_robot_straight_corridor(self):
        env = Environment(60, 20)
        rm = rm_from([(2, 10), (42, 10)], 2.0, 1.0, env)
        plan = plan_composite([rm], DIMS, budget=500, rng=RngStream(3))
        assert isinstance(plan, CompositePlan)
        assert plan.cost == pytest.approx(40.0, abs=1e-9)
        assert plan.cost == pytest.approx(shortest_path_length(rm), abs=1e-9)

    def test_perpendicular_crossing_waits_or_deviates(self, open20):
        a = rm_from([(2, 10), (18, 10)], 2.0, 1.0, open20)
        b = rm_from([(10, 2), (10, 18)], 2.0, 1.0, open20)
        plan = plan_composite([a, b], DIMS, budget=10_000, rng=RngStream(11))
        assert isinstance(plan, CompositePlan)
        waited = any(s1[i] == s0[i] for s0, s1 in zip(plan.steps, plan.steps[1:])
                     for i in range(2))
        deviated = any(vid % 3 != 0 for step in plan.steps for vid in step)
        assert waited or deviated
        oracle = oracle_time_expanded([a, b], DIMS, horizon=3 * max(a.R, b.R))
        assert oracle is not None

    def test_swap_in_narrow_corridor_fails(self):
        env = Environment.from_polygons(
            14, 10,
            [[(0, 0), (14, 0), (14, 3.9), (0, 3.9)],
             [(0, 6.1), (14, 6.1), (14, 10), (0, 10)]],
        )
        a = rm_from([(3, 5), (11, 5)], 2.0, 0.5, env)
        b = rm_from([(11, 5), (3, 5)], 2.0, 0.5, env)
        result = plan_composite([a, b], DIMS, budget=4000, rng=RngStream(5))
        assert isinstance(result, PlanFailure)
        assert result.robots_total == 2
        assert result.remaining_distance > 0
        # the exact search proves infeasibility within the horizon
        assert oracle_time_expanded([a, b], DIMS, horizon=3 * max(a.R, b.R)) is None

    def test_deterministic_same_seed(self, open20):
        a = rm_from([(2, 10), (18, 10)], 2.0, 1.0, open20)
        b = rm_from([(10, 2), (10, 18)], 2.0, 1.0, open20)
        p1 = plan_composite([a, b], DIMS, budget=2000, rng=RngStream(42))
        p2 = plan_composite([a, b], DIMS, budget=2000, rng=RngStream(42))
        assert isinstance(p1, CompositePlan)
        assert p1.steps == p2.steps
        assert p1.cost == p2.cost  # bit-for-bit

    def test_cost_never_below_individual_lower_bound(self, open20):
        a = rm_from([(2, 10), (18, 10)], 2.0, 1.0, open20)
        b = rm_from([(10, 2), (10, 18)], 2.0, 1.0, open20)
        lb = shortest_path_length(a) + shortest_path_length(b)
        for seed in range(5):
            plan = plan_composite([a, b], DIMS, budget=3000, rng=RngStream(seed))
            if isinstance(plan, CompositePlan):
                assert plan.cost >= lb - 1e-9

    def test_empty_roadmap_list_rejected(self):
        with pytest.raises(PlannerError, match="empty"):
            plan_composite([], DIMS, budget=10, rng=RngStream(0))

    def test_waits_cost_zero(self, open20):
        a = rm_from([(2, 10), (18, 10)], 2.0, 1.0, open20)
        plan = plan_composite([a], DIMS, budget=500, rng=RngStream(9))
        assert isinstance(plan, CompositePlan)
        padded = plan.steps + [plan.steps[-1], plan.steps[-1]]
        assert compute_plan_cost([a], padded) == pytest.approx(plan.cost)


class TestOracle:
    def test_single_robot_matches_shortest_path(self, open20):
        rm = rm_from([(2, 10), (14, 10)], 3.0, 1.0, open20)
        plan = oracle_time_expanded([rm], DIMS, horizon=2 * rm.R)
        assert plan is not None
        assert plan.cost == pytest.approx(shortest_path_length(rm), abs=1e-9)

    def test_parallel_lanes_costs_add(self, open20):
        a = rm_from([(2, 6), (14, 6)], 3.0, 1.0, open20)
        b = rm_from([(2, 14), (14, 14)], 3.0, 1.0, open20)
        plan = oracle_time_expanded([a, b], DIMS, horizon=2 * max(a.R, b.R))
        assert plan is not None
        expected = shortest_path_length(a) + shortest_path_length(b)
        assert plan.cost == pytest.approx(expected, abs=1e-9)

    def test_crossing_cost_at_least_lower_bound(self, open20):
        a = rm_from([(4, 10), (16, 10)], 3.0, 1.0, open20)
        b = rm_from([(10, 4), (10, 16)], 3.0, 1.0, open20)
        plan = oracle_time_expanded([a, b], DIMS, horizon=3 * max(a.R, b.R))
        assert plan is not None
        lb = shortest_path_length(a) + shortest_path_length(b)
        assert plan.cost >= lb - 1e-9

    def test_planner_dominates_oracle(self, open20):
        a = rm_from([(4, 10), (16, 10)], 4.0, 1.0, open20)
        b = rm_from([(10, 4), (10, 16)], 4.0, 1.0, open20)
        opt = oracle_time_expanded([a, b], DIMS, horizon=3 * max(a.R, b.R))
        assert opt is not None
        for seed in range(8):
            plan = plan_composite([a, b], DIMS, budget=10_000, rng=RngStream(seed))
            if isinstance(plan, CompositePlan):
                assert plan.cost >= opt.cost - 1e-9

    def test_state_limit_guard(self, open60):
        a = rm_from([(2, 30), (58, 30)], 1.0, 1.0, open60)
        b = rm_from([(30, 2), (30, 58)], 1.0, 1.0, open60)
        with pytest.raises(ResourceError):
            oracle_time_expanded([a, b], DIMS, horizon=400, state_limit=10_000)


class TestTrajectories:
    def make_plan(self, open20):
        rm = rm_from([(2, 10), (8, 10)], 2.0, 1.0, open20)
        return plan_composite([rm], DIMS, budget=400, rng=RngStream(1))

    def test_final_time_equals_step_count(self, open20):
        plan = self.make_plan(open20)
        assert isinstance(plan, CompositePlan)
        trajs = extract_trajectories(plan, samples_per_step=4)
        assert trajs[0].samples[-1][0] == pytest.approx(plan.n_steps)

    def test_waiting_robot_constant_pose(self, open20):
        rm = rm_from([(2, 10), (8, 10)], 2.0, 1.0, open20)
        steps = [(rm.start_id,), (rm.start_id,), (rm.start_id,)]
        plan = CompositePlan(steps, 0.0, [rm])
        (traj,) = extract_trajectories(plan, samples_per_step=3)
        poses = {(p.position.x, p.position.y, p.heading) for _, p in traj.samples}
        assert len(poses) == 1

    def test_shared_time_grid(self, open20):
        a = rm_from([(2, 6), (14, 6)], 3.0, 1.0, open20)
        b = rm_from([(2, 14), (14, 14)], 3.0, 1.0, open20)
        plan = plan_composite([a, b], DIMS, budget=2000, rng=RngStream(2))
        assert isinstance(plan, CompositePlan)
        t1, t2 = extract_trajectories(plan, samples_per_step=5)
        assert t1.times() == t2.times()

    def test_times_strictly_increasing(self, open20):
        plan = self.make_plan(open20)
        (traj,) = extract_trajectories(plan, samples_per_step=6)
        times = traj.times()
        assert all(b > a for a, b in zip(times, times[1:]))

    def test_document_shape(self, open20):
        plan = self.make_plan(open20)
        doc = trajectories_to_document(extract_trajectories(plan, 4, robot_ids=[7]))
        assert doc["robots"][0]["id"] == 7
        sample = doc["robots"][0]["samples"][0]
        assert set(sample) == {"t", "x", "y", "theta"}


class TestValidatePlan:
    def test_planner_output_audits_clean(self, open20):
        a = rm_from([(2, 10), (18, 10)], 2.0, 1.0, open20)
        b = rm_from([(10, 2), (10, 18)], 2.0, 1.0, open20)
        plan = plan_composite([a, b], DIMS, budget=10_000, rng=RngStream(21))
        assert isinstance(plan, CompositePlan)
        trajs = extract_trajectories(plan, samples_per_step=8)
        report = validate_plan(trajs, open20, DIMS, resolution=80)
        assert report.ok, report.events[:3]

    def test_hand_built_collision_reported(self, open20):
        def straight(rid, y):
            poses = [(t / 4.0, Pose(Point2(2 + 4 * t / 4.0, y), 0.0)) for t in range(5)]
            return TimedTrajectory(rid, tuple(poses))

        report = validate_plan([straight(1, 10.0), straight(2, 10.5)], open20, DIMS, 8)
        assert not report.ok
        ev = report.events[0]
        assert ev.kind == "pairwise"
        assert ev.robots == (1, 2)

    def test_static_event_reported(self):
        env = Environment.from_polygons(20, 20, [[(8, 8), (12, 8), (12, 12), (8, 12)]])
        traj = TimedTrajectory(1, ((0.0, Pose(Point2(10, 10), 0.0)),
                                   (1.0, Pose(Point2(10, 10), 0.0))))
        report = validate_plan([traj], env, DIMS, 4)
        assert any(e.kind == "static" for e in report.events)

    def test_single_robot_no_pairwise_events(self, open20):
        plan = plan_composite([rm_from([(2, 10), (10, 10)], 2.0, 1.0, open20)],
                              DIMS, budget=300, rng=RngStream(4))
        assert isinstance(plan, CompositePlan)
        report = validate_plan(extract_trajectories(plan, 4), open20, DIMS, 40)
        assert not any(e.kind == "pairwise" for e in report.events)
        assert report.ok

    def test_mismatched_grids_rejected(self, open20):
        t1 = TimedTrajectory(1, ((0.0, Pose(Point2(1, 1), 0.0)), (1.0, Pose(Point2(2, 1), 0.0))))
        t2 = TimedTrajectory(2, ((0.0, Pose(Point2(5, 5), 0.0)), (0.5, Pose(Point2(6, 5), 0.0))))
        with pytest.raises(PlannerError, match="time grid"):
            validate_plan([t1, t2], open20, DIMS, 4)


class TestSoundnessSample:
    """Randomized mini-batch; the acceptance suite runs the full protocol."""

    def test_random_crossings_audit_clean(self):
        rng = RngStream(505)
        env = Environment(30, 30)
        checked = 0
        for trial in range(15):
            y = rng.uniform(12, 18)
            x = rng.uniform(12, 18)
            a = rm_from([(4, y), (26, y)], rng.uniform(1, 6), rng.uniform(0.5, 3), env)
            b = rm_from([(x, 4), (x, 26)], rng.uniform(1, 6), rng.uniform(0.5, 3), env)
            plan = plan_composite([a, b], DIMS, budget=4000,
                                  rng=RngStream(900 + trial))
            if isinstance(plan, CompositePlan):
                trajs = extract_trajectories(plan, samples_per_step=8)
                report = validate_plan(trajs, env, DIMS, resolution=80)
                assert report.ok, (trial, report.events[:3])
                checked += 1
        assert checked >= 10
