"""Session orchestration: draw a map, let the teacher attach a command."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .language import NAV_TYPES, NO_SPLIT, TeacherUtterance, candidates, gen_command
from .language.splits import ZeroShotSplit
from .curriculum import CurriculumLevel, SessionRanges, max_level
from .world import GenerationError, SessionConfig, WorldState, generate_world

SESSION_RETRIES = 128


@dataclass
class ActiveSession:
    state: WorldState
    command: Optional[TeacherUtterance]
    cfg: SessionConfig


def draw_session_config(
    ranges: SessionRanges, level: CurriculumLevel, env_rng: np.random.Generator
) -> SessionConfig:
    open_size = level.open_size
    open_cells = open_size * open_size
    max_walls = min(level.walls_max, open_cells - 1 - level.objects_max - 1)
    n_objects = int(env_rng.integers(ranges.objects_min, level.objects_max + 1))
    n_walls = int(env_rng.integers(ranges.walls_min, max(ranges.walls_min, max_walls) + 1))
    pool = ranges.class_pool[: level.n_classes]
    return SessionConfig(
        open_size=open_size,
        n_objects=n_objects,
        n_walls=n_walls,
        class_pool=pool,
        seed=int(env_rng.integers(0, 2**63 - 1)),
    )


def start_session(
    ranges: SessionRanges,
    env_rng: np.random.Generator,
    teacher_rng: np.random.Generator,
    level: Optional[CurriculumLevel] = None,
    split: ZeroShotSplit = NO_SPLIT,
    nav_types=NAV_TYPES,
    require_holdout: bool = False,
    on_blocked: str = "proceed",
) -> ActiveSession:
    """Sample maps until the teacher can speak.

    A map with no triggering NAV type is re-drawn.  When types trigger but the
    zero-shot split rejects every instantiation, `on_blocked` decides: with
    "proceed" the session runs without a command (and without NAV reward),
    with "resample" a fresh map is drawn.
    """
    level = level if level is not None else max_level(ranges)
    for _ in range(SESSION_RETRIES):
        cfg = draw_session_config(ranges, level, env_rng)
        state = generate_world(cfg)
        command = gen_command(
            state,
            split,
            teacher_rng,
            types=nav_types,
            max_len=level.max_len,
            require_holdout=require_holdout,
        )
        if command is not None:
            state.goal = command.payload
            return ActiveSession(state=state, command=command, cfg=cfg)
        triggered = any(candidates(state, t) for t in nav_types)
        if triggered and on_blocked == "proceed":
            return ActiveSession(state=state, command=None, cfg=cfg)
    raise GenerationError(
        f"no session with a speakable command after {SESSION_RETRIES} attempts "
        f"(level={level}, split={split.kind})"
    )
