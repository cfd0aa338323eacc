"""Session layout sampling."""

from __future__ import annotations

import numpy as np

from .pathing import goal_reachable
from .types import (
    EMPTY,
    GRID,
    WALL,
    Cell,
    GenerationError,
    ObjectPlacement,
    SessionConfig,
    WorldState,
    instance_color,
)

MAX_LAYOUT_RETRIES = 1000


def sample_world(cfg: SessionConfig, rng: np.random.Generator) -> WorldState:
    """Draw one layout from cfg using the provided generator."""
    cfg.validate()
    size = cfg.open_size
    r0 = int(rng.integers(0, GRID - size + 1))
    c0 = int(rng.integers(0, GRID - size + 1))
    grid = np.full((GRID, GRID), WALL, dtype=np.int8)
    grid[r0 : r0 + size, c0 : c0 + size] = EMPTY

    open_cells = [(r, c) for r in range(r0, r0 + size) for c in range(c0, c0 + size)]
    order = rng.permutation(len(open_cells))
    picks = [open_cells[i] for i in order]
    for cell in picks[: cfg.n_walls]:
        grid[cell] = WALL
    free = picks[cfg.n_walls :]

    objects = []
    for i in range(cfg.n_objects):
        class_id = int(rng.choice(np.asarray(cfg.class_pool)))
        instance_id = int(rng.integers(0, 3))
        objects.append(
            ObjectPlacement(
                class_id=class_id,
                instance_id=instance_id,
                color_id=instance_color(class_id, instance_id),
                cell=free[i],
            )
        )
    agent = free[cfg.n_objects]
    return WorldState(grid=grid, open_rect=(r0, c0, size, size), agent=agent, objects=objects)


def generate_world(cfg: SessionConfig) -> WorldState:
    """Deterministic layout for cfg.seed (no goal attached)."""
    return sample_world(cfg, np.random.default_rng(cfg.seed))


def new_session(cfg: SessionConfig, goal: Cell) -> WorldState:
    """Sample layouts from cfg.seed until `goal` is reachable over empty cells.

    The goal cell is pinned by the caller; layouts that wall it off or leave
    it unreachable from the agent start are re-drawn, up to a retry bound.
    """
    rng = np.random.default_rng(cfg.seed)
    for _ in range(MAX_LAYOUT_RETRIES):
        state = sample_world(cfg, rng)
        if state.is_wall(goal) or state.agent == goal:
            continue
        if goal_reachable(state, goal):
            state.goal = goal
            return state
    raise GenerationError(
        f"no layout with reachable goal {goal} after {MAX_LAYOUT_RETRIES} retries (cfg={cfg})"
    )
