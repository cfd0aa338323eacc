"""Breadth-first search over the grid."""

from __future__ import annotations

from collections import deque
from typing import Optional

from .types import GRID, Cell, WorldState

_NEIGHBORS = ((-1, 0), (1, 0), (0, -1), (0, 1))


def bfs_path(
    state: WorldState, src: Cell, dst: Cell, avoid_objects: bool = False
) -> Optional[list[Cell]]:
    """Shortest 4-connected path from src to dst, or None.

    Walls always block.  With avoid_objects, object cells block too, except
    the endpoints (the goal may itself be an object).
    """
    if state.is_wall(src) or state.is_wall(dst):
        return None
    occupied = {o.cell for o in state.objects} if avoid_objects else set()
    occupied.discard(src)
    occupied.discard(dst)
    if src == dst:
        return [src]
    prev: dict[Cell, Cell] = {src: src}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        for dr, dc in _NEIGHBORS:
            nxt = (cur[0] + dr, cur[1] + dc)
            if nxt in prev or not (0 <= nxt[0] < GRID and 0 <= nxt[1] < GRID):
                continue
            if state.is_wall(nxt) or nxt in occupied:
                continue
            prev[nxt] = cur
            if nxt == dst:
                path = [dst]
                while path[-1] != src:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(nxt)
    return None


def bfs_reachable(state: WorldState, src: Cell, dst: Cell) -> tuple[bool, int]:
    """(reachable, shortest length); objects are traversable, walls are not."""
    path = bfs_path(state, src, dst, avoid_objects=False)
    if path is None:
        return False, -1
    return True, len(path) - 1


def goal_reachable(state: WorldState, goal: Cell) -> bool:
    """Session-generation rule: a path over empty cells must exist."""
    return bfs_path(state, state.agent, goal, avoid_objects=True) is not None
