"""Difficulty schedule shared by session generation, training, and evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _lerp(lo: int, hi: int, f: float) -> int:
    return int(np.floor(lo + f * (hi - lo) + 0.5))


@dataclass(frozen=True)
class SessionRanges:
    open_min: int = 3
    open_max: int = 7
    objects_min: int = 1
    objects_max: int = 5
    walls_min: int = 0
    walls_max: int = 15
    class_pool: tuple[int, ...] = tuple(range(119))
    classes_min: int = 2
    len_min: int = 6
    len_max: int = 13


@dataclass(frozen=True)
class CurriculumLevel:
    fraction: float
    open_size: int
    objects_max: int
    walls_max: int
    n_classes: int
    max_len: int


def curriculum_level(sessions_trained: int, total: int, ranges: SessionRanges) -> CurriculumLevel:
    """Difficulty at min(1, G'/G): every quantity interpolates linearly."""
    if sessions_trained < 0:
        raise ValueError("sessions_trained must be non-negative")
    f = min(1.0, sessions_trained / total) if total > 0 else 1.0
    return CurriculumLevel(
        fraction=f,
        open_size=_lerp(ranges.open_min, ranges.open_max, f),
        objects_max=_lerp(ranges.objects_min, ranges.objects_max, f),
        walls_max=_lerp(ranges.walls_min, ranges.walls_max, f),
        n_classes=_lerp(min(ranges.classes_min, len(ranges.class_pool)), len(ranges.class_pool), f),
        max_len=_lerp(ranges.len_min, ranges.len_max, f),
    )


def max_level(ranges: SessionRanges) -> CurriculumLevel:
    """Test-time difficulty: no curriculum, everything at its maximum."""
    return curriculum_level(1, 1, ranges)
