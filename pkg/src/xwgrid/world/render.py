"""Egocentric RGB rendering with procedural 12x12 sprites.

Sprites are derived from fixed seeds (independent of any run configuration):
an object glyph's shape comes from its class with a small per-instance
perturbation, and its fill color is the instance's color attribute.
"""

from __future__ import annotations

import numpy as np

from .palette import COLOR_NAMES, COLOR_RGB
from .types import CANVAS, CELL_PX, GRID, IMAGE_PX, WALL, WorldState

_SPRITE_SEED = 0x5EED5B17

FLOOR_BASE = (44, 44, 44)
FLOOR_ACCENT = (52, 52, 52)
WALL_BASE = (128, 128, 128)
WALL_MORTAR = (92, 92, 92)
AGENT_COLOR = (255, 255, 255)


def _floor_tile() -> np.ndarray:
    tile = np.empty((CELL_PX, CELL_PX, 3), dtype=np.uint8)
    tile[:, :] = FLOOR_BASE
    ii, jj = np.meshgrid(np.arange(CELL_PX), np.arange(CELL_PX), indexing="ij")
    tile[(ii + jj) % 4 == 0] = FLOOR_ACCENT
    return tile


def _wall_tile() -> np.ndarray:
    tile = np.empty((CELL_PX, CELL_PX, 3), dtype=np.uint8)
    tile[:, :] = WALL_BASE
    tile[(3, 7, 11), :] = WALL_MORTAR
    for band, offset in ((slice(0, 3), 5), (slice(4, 7), 9), (slice(8, 11), 2)):
        tile[band, offset] = WALL_MORTAR
    return tile


def _agent_tile() -> np.ndarray:
    tile = _floor_tile().copy()
    for i in range(1, 11):
        half = (i - 1) // 2 + 1
        lo, hi = 6 - half, 6 + half
        tile[i, max(lo, 1) : min(hi, 11)] = AGENT_COLOR
    return tile


def _glyph_mask(class_id: int, instance_id: int) -> np.ndarray:
    base_rng = np.random.default_rng(np.random.SeedSequence([_SPRITE_SEED, class_id]))
    half = base_rng.random((CELL_PX, CELL_PX // 2)) < 0.45
    mask = np.concatenate([half, half[:, ::-1]], axis=1)
    inst_rng = np.random.default_rng(np.random.SeedSequence([_SPRITE_SEED, class_id, instance_id]))
    flips = inst_rng.integers(0, CELL_PX, size=(10, 2))
    mask[flips[:, 0], flips[:, 1]] ^= True
    mask[4:8, 4:8] = True  # keep every glyph clearly visible
    mask[0, :] = mask[-1, :] = mask[:, 0] = mask[:, -1] = False
    return mask


_TILE_CACHE: dict = {}


def object_tile(class_id: int, instance_id: int, color_id: int) -> np.ndarray:
    key = (class_id, instance_id, color_id)
    tile = _TILE_CACHE.get(key)
    if tile is None:
        tile = _floor_tile().copy()
        tile[_glyph_mask(class_id, instance_id)] = COLOR_RGB[COLOR_NAMES[color_id]]
        _TILE_CACHE[key] = tile
    return tile


_FLOOR = _floor_tile()
_WALL = _wall_tile()
_AGENT = _agent_tile()


def render_ego(state: WorldState) -> np.ndarray:
    """156x156x3 agent-centered image; cells outside the map stay black."""
    img = np.zeros((IMAGE_PX, IMAGE_PX, 3), dtype=np.uint8)
    ar, ac = state.agent
    objects = {o.cell: o for o in state.objects}
    center = CANVAS // 2
    for dr in range(-center, center + 1):
        for dc in range(-center, center + 1):
            r, c = ar + dr, ac + dc
            if not (0 <= r < GRID and 0 <= c < GRID):
                continue
            if state.grid[r, c] == WALL:
                tile = _WALL
            else:
                obj = objects.get((r, c))
                tile = _FLOOR if obj is None else object_tile(obj.class_id, obj.instance_id, obj.color_id)
            y, x = (center + dr) * CELL_PX, (center + dc) * CELL_PX
            img[y : y + CELL_PX, x : x + CELL_PX] = tile
    y = x = center * CELL_PX
    agent_tile = img[y : y + CELL_PX, x : x + CELL_PX].copy()
    agent_tile[(_AGENT == np.array(AGENT_COLOR)).all(axis=-1)] = AGENT_COLOR
    img[y : y + CELL_PX, x : x + CELL_PX] = agent_tile
    return img


def canvas_cell_of(state: WorldState, cell) -> tuple[int, int] | None:
    """Canvas (row, col) where a map cell lands for the current agent pose."""
    dr, dc = cell[0] - state.agent[0], cell[1] - state.agent[1]
    center = CANVAS // 2
    rr, cc = center + dr, center + dc
    if 0 <= rr < CANVAS and 0 <= cc < CANVAS:
        return rr, cc
    return None


def ascii_map(state: WorldState, names=None) -> str:
    """Terminal view of the map: '#' wall, '.' floor, 'A' agent, '*' goal,
    letters for objects (first letter of the class name when provided)."""
    rows = []
    objects = {o.cell: o for o in state.objects}
    for r in range(GRID):
        row = []
        for c in range(GRID):
            cell = (r, c)
            if cell == state.agent:
                ch = "A"
            elif state.grid[r, c] == WALL:
                ch = "#"
            elif cell in objects:
                o = objects[cell]
                ch = names[o.class_id][0].upper() if names else "o"
            elif state.goal is not None and cell == state.goal:
                ch = "*"
            else:
                ch = "."
            row.append(ch)
        rows.append("".join(row))
    return "\n".join(rows)


def write_ppm(path, img: np.ndarray) -> None:
    h, w = img.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode())
        fh.write(np.ascontiguousarray(img, dtype=np.uint8).tobytes())


def write_pgm(path, values: np.ndarray) -> None:
    """Heatmap dump: values are max-normalized to the 0..255 gray range."""
    arr = np.asarray(values, dtype=np.float64)
    peak = arr.max()
    gray = np.zeros_like(arr) if peak <= 0 else arr / peak * 255.0
    gray = gray.clip(0, 255).astype(np.uint8)
    h, w = gray.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(gray.tobytes())
