"""World state containers and step dynamics."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .palette import N_COLORS

GRID = 7
CANVAS = 2 * GRID - 1  # 13: worst-case egocentric footprint
CELL_PX = 12
IMAGE_PX = CANVAS * CELL_PX  # 156
MAX_STEPS = 4 * GRID  # 28

N_CLASSES = 119
N_INSTANCES = 3

EMPTY, WALL = 0, 1

ACTIONS = ("left", "right", "up", "down")
ACTION_OFFSETS = {"left": (0, -1), "right": (0, 1), "up": (-1, 0), "down": (1, 0)}

STEP_PENALTY = -0.1
WALL_PENALTY = -0.2
WRONG_OBJECT_PENALTY = -1.0
GOAL_REWARD = 1.0

Cell = tuple[int, int]

_COLOR_TABLE_SEED = 0x5EED0C01


def instance_color(class_id: int, instance_id: int) -> int:
    """Fixed color attribute of a class instance, stable across runs."""
    ss = np.random.SeedSequence([_COLOR_TABLE_SEED, class_id, instance_id])
    return int(np.random.default_rng(ss).integers(N_COLORS))


class ProtocolError(RuntimeError):
    """An operation was applied to a session in the wrong phase."""


class GenerationError(RuntimeError):
    """Layout sampling could not satisfy the session constraints."""


@dataclass
class ObjectPlacement:
    class_id: int
    instance_id: int
    color_id: int
    cell: Cell


@dataclass
class SessionConfig:
    open_size: int = GRID
    n_objects: int = 1
    n_walls: int = 0
    class_pool: tuple[int, ...] = tuple(range(N_CLASSES))
    seed: int = 0

    def validate(self) -> None:
        if not 3 <= self.open_size <= GRID:
            raise ValueError(f"open_size {self.open_size} outside [3,{GRID}]")
        if not 1 <= self.n_objects <= 5:
            raise ValueError(f"n_objects {self.n_objects} outside [1,5]")
        if not 0 <= self.n_walls <= 15:
            raise ValueError(f"n_walls {self.n_walls} outside [0,15]")
        if not self.class_pool:
            raise ValueError("class_pool is empty")
        if any(not 0 <= c < N_CLASSES for c in self.class_pool):
            raise ValueError("class_pool contains an unknown class id")
        open_cells = self.open_size * self.open_size
        if open_cells - self.n_walls < self.n_objects + 1:
            raise ValueError(
                f"open {self.open_size}x{self.open_size} minus {self.n_walls} walls "
                f"cannot hold {self.n_objects} objects plus the agent"
            )


@dataclass
class StepOutcome:
    reward: float
    done: bool
    events: frozenset[str]


@dataclass
class WorldState:
    grid: np.ndarray  # [GRID, GRID] of EMPTY/WALL
    open_rect: tuple[int, int, int, int]  # r0, c0, height, width
    agent: Cell
    objects: list[ObjectPlacement]
    step_count: int = 0
    max_steps: int = MAX_STEPS
    goal: Optional[Cell] = None
    finished: bool = False

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < GRID and 0 <= cell[1] < GRID

    def is_wall(self, cell: Cell) -> bool:
        return not self.in_bounds(cell) or self.grid[cell] == WALL

    def object_at(self, cell: Cell) -> Optional[ObjectPlacement]:
        for obj in self.objects:
            if obj.cell == cell:
                return obj
        return None

    def copy(self) -> "WorldState":
        return replace(
            self,
            grid=self.grid.copy(),
            objects=[replace(o) for o in self.objects],
        )

    def state_hash(self) -> str:
        digest = hashlib.sha256()
        digest.update(self.grid.tobytes())
        digest.update(repr((self.agent, self.step_count, self.goal, self.finished)).encode())
        digest.update(
            repr(sorted((o.class_id, o.instance_id, o.color_id, o.cell) for o in self.objects)).encode()
        )
        return digest.hexdigest()[:16]


def step(state: WorldState, action: str) -> StepOutcome:
    """Advance one time step; mutates state and returns the reward accounting."""
    if state.finished:
        raise ProtocolError("step() on a finished session")
    if action not in ACTION_OFFSETS:
        raise ValueError(f"unknown action {action!r}")
    dr, dc = ACTION_OFFSETS[action]
    target = (state.agent[0] + dr, state.agent[1] + dc)
    events = set()
    reward = STEP_PENALTY
    if state.is_wall(target):
        events.add("hit_wall")
        reward += WALL_PENALTY
    else:
        state.agent = target
        if state.goal is not None and target == state.goal:
            events.add("reached_goal")
            reward += GOAL_REWARD
        elif state.object_at(target) is not None:
            events.add("stepped_wrong_object")
            reward += WRONG_OBJECT_PENALTY
    state.step_count += 1
    done = "reached_goal" in events
    if not done and state.step_count >= state.max_steps:
        events.add("timeout")
        done = True
    if done:
        state.finished = True
    return StepOutcome(reward=reward, done=done, events=frozenset(events))
