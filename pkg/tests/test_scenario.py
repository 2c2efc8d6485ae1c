import json

import pytest

from crossplan.geometry import OrientedRect, rects_overlap
from crossplan.scenario import (
    ScenarioError,
    builtin_instances,
    get_builtin,
    load_scenario,
    scenario_to_document,
    serialize_scenario,
    sweep_reference_collides,
)

MINIMAL = {
    "name": "corridor",
    "map": {"width": 50, "height": 10},
    "obstacles": [],
    "robot_dims": {"length": 3.2, "width": 0.8},
    "robots": [
        {
            "id": 1,
            "start": {"x": 2.0, "y": 5.0, "theta": 0.0},
            "goal": {"x": 48.0, "y": 5.0, "theta": 0.0},
            "reference": [[2.0, 5.0], [48.0, 5.0]],
        }
    ],
}


def doc_bytes(doc) -> bytes:
    return json.dumps(doc).encode()


class TestLoad:
    def test_minimal_document(self):
        s = load_scenario(doc_bytes(MINIMAL))
        assert s.n_robots == 1
        assert s.robots[0].reference.points[0].x == 2.0

    def test_reference_not_at_start_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["robots"][0]["reference"][0] = [3.0, 5.0]
        with pytest.raises(ScenarioError, match="robot 1.*begin at start"):
            load_scenario(doc_bytes(doc))

    def test_reference_not_at_goal_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["robots"][0]["reference"][-1] = [40.0, 5.0]
        with pytest.raises(ScenarioError, match="robot 1.*end at goal"):
            load_scenario(doc_bytes(doc))

    def test_unknown_key_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["extra"] = 1
        with pytest.raises(ScenarioError, match="unknown keys.*extra"):
            load_scenario(doc_bytes(doc))
        doc = json.loads(json.dumps(MINIMAL))
        doc["robots"][0]["speed"] = 2
        with pytest.raises(ScenarioError, match="unknown keys.*speed"):
            load_scenario(doc_bytes(doc))

    def test_parse_error_carries_location(self):
        with pytest.raises(ScenarioError, match=r"line \d+, column \d+"):
            load_scenario(b'{"name": }')

    def test_duplicate_ids_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["robots"].append(json.loads(json.dumps(doc["robots"][0])))
        with pytest.raises(ScenarioError, match="contiguous"):
            load_scenario(doc_bytes(doc))

    def test_reference_through_obstacle_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["obstacles"] = [[[20, 0], [30, 0], [30, 10], [20, 10]]]
        with pytest.raises(ScenarioError, match="robot 1.*collides"):
            load_scenario(doc_bytes(doc))

    def test_bad_dims_rejected(self):
        doc = json.loads(json.dumps(MINIMAL))
        doc["robot_dims"]["length"] = 0
        with pytest.raises(ScenarioError, match="robot_dims"):
            load_scenario(doc_bytes(doc))


class TestBuiltins:
    def test_robot_counts(self):
        insts = builtin_instances()
        assert len(insts) == 9
        assert insts[0].n_robots == 2
        assert insts[8].n_robots == 10
        for k, s in enumerate(insts, start=1):
            assert s.n_robots == k + 1
            assert s.name == f"instance-{k}"

    def test_all_validate_under_loader(self):
        for s in builtin_instances():
            reloaded = load_scenario(serialize_scenario(s))
            assert reloaded == s

    def test_instance3_roundtrip_equality(self):
        s = get_builtin("instance-3")
        assert s is not None
        assert load_scenario(serialize_scenario(s)) == s

    def test_footprint_sweep_quarter_step(self):
        for s in builtin_instances():
            for r in s.robots:
                assert not sweep_reference_collides(
                    r.reference, s.env, s.robot_length, s.robot_width, step=0.25
                ), f"{s.name} robot {r.id}"

    def test_start_goal_rest_poses_pairwise_clear(self):
        for s in builtin_instances():
            rects_start = [
                OrientedRect(r.start.position, r.start.heading, s.robot_length, s.robot_width)
                for r in s.robots
            ]
            rects_goal = [
                OrientedRect(r.goal.position, r.goal.heading, s.robot_length, s.robot_width)
                for r in s.robots
            ]
            for i in range(len(rects_start)):
                for j in range(i + 1, len(rects_start)):
                    assert not rects_overlap(rects_start[i], rects_start[j])
                    assert not rects_overlap(rects_goal[i], rects_goal[j])

    def test_document_schema_shape(self):
        doc = scenario_to_document(builtin_instances()[0])
        assert set(doc) == {"name", "map", "obstacles", "robot_dims", "robots"}
        assert len(doc["obstacles"]) == 4
        assert all(set(r) == {"id", "start", "goal", "reference"} for r in doc["robots"])

    def test_unknown_builtin(self):
        assert get_builtin("instance-99") is None
