"""Environment dynamics, session generation, reward accounting, pathing."""

import numpy as np
import pytest

from util import build_state
from xwgrid.world import (
    ACTIONS,
    GRID,
    MAX_STEPS,
    GenerationError,
    ProtocolError,
    SessionConfig,
    WALL,
    bfs_path,
    bfs_reachable,
    generate_world,
    goal_reachable,
    instance_color,
    load_session_replay,
    new_session,
    save_session_replay,
    step,
    trace_record,
)


class TestSessionGeneration:
    def test_max_steps_is_four_times_map_size(self):
        state = generate_world(SessionConfig(open_size=7, seed=1))
        assert state.max_steps == 28 == 4 * GRID

    def test_minimal_config(self):
        state = generate_world(SessionConfig(open_size=3, n_objects=1, n_walls=0, seed=5))
        r0, c0, h, w = state.open_rect
        assert (h, w) == (3, 3)
        open_cells = [(r, c) for r in range(r0, r0 + 3) for c in range(c0, c0 + 3)]
        assert all(state.grid[cell] == WALL for cell in np.ndindex(GRID, GRID)
                   if (cell[0], cell[1]) not in open_cells)
        assert len(state.objects) == 1
        assert state.agent in open_cells
        assert state.agent != state.objects[0].cell

    def test_fixed_seed_reproducible(self):
        a = generate_world(SessionConfig(open_size=6, n_objects=3, n_walls=4, seed=77))
        b = generate_world(SessionConfig(open_size=6, n_objects=3, n_walls=4, seed=77))
        assert np.array_equal(a.grid, b.grid)
        assert a.agent == b.agent
        assert [(o.class_id, o.instance_id, o.color_id, o.cell) for o in a.objects] == [
            (o.class_id, o.instance_id, o.color_id, o.cell) for o in b.objects
        ]

    def test_objects_on_distinct_cells_inside_open_rect(self):
        for seed in range(30):
            state = generate_world(SessionConfig(open_size=5, n_objects=5, n_walls=3, seed=seed))
            cells = [o.cell for o in state.objects]
            assert len(set(cells)) == len(cells)
            r0, c0, h, w = state.open_rect
            for r, c in cells + [state.agent]:
                assert r0 <= r < r0 + h and c0 <= c < c0 + w
                assert state.grid[r, c] != WALL

    def test_instance_colors_fixed(self):
        assert instance_color(3, 1) == instance_color(3, 1)
        colors = {instance_color(c, i) for c in range(119) for i in range(3)}
        assert colors <= set(range(8))

    def test_invalid_configs_rejected(self):
        with pytest.raises(ValueError):
            SessionConfig(open_size=2).validate()
        with pytest.raises(ValueError):
            SessionConfig(n_objects=6).validate()
        with pytest.raises(ValueError):
            SessionConfig(open_size=3, n_objects=5, n_walls=5).validate()

    def test_new_session_pins_goal(self):
        cfg = SessionConfig(open_size=7, n_objects=2, n_walls=5, seed=3)
        state = new_session(cfg, goal=(2, 2))
        assert state.goal == (2, 2)
        assert goal_reachable(state, (2, 2))

    def test_new_session_unsatisfiable(self):
        # an out-of-map goal can never become reachable, so retries exhaust
        cfg = SessionConfig(open_size=3, n_objects=1, n_walls=0, seed=3)
        with pytest.raises(GenerationError, match="retries"):
            new_session(cfg, goal=(8, 8))


class TestStepDynamics:
    def test_plain_move_time_penalty(self):
        state = build_state(agent=(3, 3), goal=(0, 0))
        out = step(state, "right")
        assert out.reward == pytest.approx(-0.1)
        assert not out.done and out.events == frozenset()
        assert state.agent == (3, 4)

    def test_wall_hit(self):
        state = build_state(agent=(3, 3), walls=[(3, 4)], goal=(0, 0))
        out = step(state, "right")
        assert out.reward == pytest.approx(-0.3)
        assert state.agent == (3, 3)
        assert out.events == frozenset({"hit_wall"})

    def test_goal_reached(self):
        state = build_state(agent=(3, 3), goal=(3, 4))
        out = step(state, "right")
        assert out.reward == pytest.approx(0.9)
        assert out.done and out.events == frozenset({"reached_goal"})

    def test_wrong_object_penalty_session_continues(self):
        state = build_state(agent=(3, 3), objects=[(5, 0, (3, 4))], goal=(0, 0))
        out = step(state, "right")
        assert out.reward == pytest.approx(-1.1)
        assert not out.done
        assert state.agent == (3, 4)  # stays on the object's cell
        out2 = step(state, "left")
        assert out2.reward == pytest.approx(-0.1)

    def test_goal_on_object_cell_counts_as_goal(self):
        state = build_state(agent=(3, 3), objects=[(5, 0, (3, 4))], goal=(3, 4))
        out = step(state, "right")
        assert out.events == frozenset({"reached_goal"})
        assert out.reward == pytest.approx(0.9)

    def test_grid_edge_is_wall(self):
        state = build_state(agent=(0, 0), goal=(6, 6))
        out = step(state, "up")
        assert out.events == frozenset({"hit_wall"})
        assert state.agent == (0, 0)

    def test_timeout(self):
        state = build_state(agent=(3, 3), goal=(0, 0))
        for i in range(MAX_STEPS):
            out = step(state, "left" if i % 2 else "right")
        assert out.done and "timeout" in out.events
        assert state.step_count == MAX_STEPS

    def test_step_after_done_raises(self):
        state = build_state(agent=(3, 3), goal=(3, 4))
        step(state, "right")
        with pytest.raises(ProtocolError):
            step(state, "left")

    def test_reward_accounting_identity(self):
        # total reward decomposes exactly into the event tallies
        rng = np.random.default_rng(12)
        for seed in range(20):
            state = generate_world(SessionConfig(open_size=5, n_objects=3, n_walls=3, seed=seed))
            empties = [
                (r, c)
                for r in range(GRID)
                for c in range(GRID)
                if state.grid[r, c] != WALL and (r, c) != state.agent
            ]
            state.goal = empties[rng.integers(len(empties))]
            total = 0.0
            walls = wrongs = 0
            reached = False
            while not state.finished:
                out = step(state, ACTIONS[rng.integers(4)])
                total += out.reward
                walls += "hit_wall" in out.events
                wrongs += "stepped_wrong_object" in out.events
                reached = reached or "reached_goal" in out.events
            expected = -0.1 * state.step_count - 0.2 * walls - 1.0 * wrongs + 1.0 * reached
            assert total == pytest.approx(expected, abs=1e-9)
            assert state.step_count <= MAX_STEPS


class TestPathing:
    def test_same_cell(self):
        state = build_state(agent=(3, 3))
        ok, length = bfs_reachable(state, (3, 3), (3, 3))
        assert ok and length == 0

    def test_enclosed_goal(self):
        walls = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 4), (4, 2), (4, 3), (4, 4)]
        state = build_state(agent=(0, 0), walls=walls)
        ok, length = bfs_reachable(state, (0, 0), (3, 3))
        assert not ok and length == -1

    def test_corridor_length(self):
        walls = [(r, c) for r in (2, 4) for c in range(1, 6)]
        state = build_state(agent=(3, 1), walls=walls)
        ok, length = bfs_reachable(state, (3, 1), (3, 6))
        assert ok and length == 5

    def test_objects_traversable_by_default_blocking_when_avoided(self):
        walls = [(r, 3) for r in range(GRID) if r != 3]
        state = build_state(agent=(3, 0), objects=[(1, 0, (3, 3))], walls=walls)
        # the only wall-free gap holds an object at (3,3)
        ok, length = bfs_reachable(state, (3, 0), (3, 6))
        assert ok and length == 6
        assert bfs_path(state, (3, 0), (3, 6), avoid_objects=True) is None
        assert goal_reachable(state, (3, 6)) is False


class TestIo:
    def test_trace_record_is_json_line(self):
        import json

        state = build_state(agent=(3, 3), goal=(3, 4))
        out = step(state, "right")
        rec = json.loads(trace_record(state, "right", out))
        assert rec["action"] == "right"
        assert rec["reward"] == pytest.approx(0.9)
        assert rec["events"] == ["reached_goal"]
        assert len(rec["state"]) == 16

    def test_session_replay_round_trip(self, tmp_path):
        cfg = SessionConfig(open_size=5, n_objects=2, n_walls=1, class_pool=(1, 2, 3), seed=99)
        path = tmp_path / "session.json"
        save_session_replay(path, cfg, goal=(2, 2))
        cfg2, goal = load_session_replay(path)
        assert cfg2 == cfg and goal == (2, 2)
        a = generate_world(cfg)
        b = generate_world(cfg2)
        assert np.array_equal(a.grid, b.grid) and a.agent == b.agent
