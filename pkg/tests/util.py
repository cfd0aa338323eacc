"""Hand-built world states for teacher and environment tests."""

import numpy as np

from xwgrid.world.types import EMPTY, GRID, WALL, ObjectPlacement, WorldState


def build_state(agent=(3, 3), objects=(), walls=(), open_size=GRID, origin=(0, 0), goal=None):
    """objects: iterable of (class_id, color_id, cell) or (class_id, instance, color_id, cell)."""
    grid = np.full((GRID, GRID), WALL, dtype=np.int8)
    r0, c0 = origin
    grid[r0 : r0 + open_size, c0 : c0 + open_size] = EMPTY
    for cell in walls:
        grid[cell] = WALL
    placements = []
    for spec in objects:
        if len(spec) == 3:
            class_id, color_id, cell = spec
            instance = 0
        else:
            class_id, instance, color_id, cell = spec
        placements.append(
            ObjectPlacement(class_id=class_id, instance_id=instance, color_id=color_id, cell=cell)
        )
    return WorldState(
        grid=grid,
        open_rect=(r0, c0, open_size, open_size),
        agent=agent,
        objects=placements,
        goal=goal,
    )
