from .io import load_session_replay, save_session_replay, trace_record
from .palette import COLOR_NAMES, COLOR_RGB, N_COLORS, color_id
from .pathing import bfs_path, bfs_reachable, goal_reachable
from .render import canvas_cell_of, object_tile, render_ego, write_pgm, write_ppm
from .session import MAX_LAYOUT_RETRIES, generate_world, new_session, sample_world
from .types import (
    ACTION_OFFSETS,
    ACTIONS,
    CANVAS,
    CELL_PX,
    EMPTY,
    GOAL_REWARD,
    GRID,
    IMAGE_PX,
    MAX_STEPS,
    N_CLASSES,
    N_INSTANCES,
    STEP_PENALTY,
    WALL,
    WALL_PENALTY,
    WRONG_OBJECT_PENALTY,
    Cell,
    GenerationError,
    ObjectPlacement,
    ProtocolError,
    SessionConfig,
    StepOutcome,
    WorldState,
    instance_color,
    step,
)

__all__ = [
    "ACTIONS",
    "ACTION_OFFSETS",
    "CANVAS",
    "CELL_PX",
    "COLOR_NAMES",
    "COLOR_RGB",
    "Cell",
    "EMPTY",
    "GOAL_REWARD",
    "GRID",
    "GenerationError",
    "IMAGE_PX",
    "MAX_LAYOUT_RETRIES",
    "MAX_STEPS",
    "N_CLASSES",
    "N_COLORS",
    "N_INSTANCES",
    "ObjectPlacement",
    "ProtocolError",
    "STEP_PENALTY",
    "SessionConfig",
    "StepOutcome",
    "WALL",
    "WALL_PENALTY",
    "WRONG_OBJECT_PENALTY",
    "WorldState",
    "bfs_path",
    "bfs_reachable",
    "canvas_cell_of",
    "color_id",
    "generate_world",
    "goal_reachable",
    "instance_color",
    "load_session_replay",
    "new_session",
    "object_tile",
    "render_ego",
    "sample_world",
    "save_session_replay",
    "step",
    "trace_record",
    "write_pgm",
    "write_ppm",
]
