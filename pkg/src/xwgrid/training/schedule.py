"""Exploration schedule and the action mixture."""

from __future__ import annotations

import numpy as np

from ..curriculum import CurriculumLevel, SessionRanges, curriculum_level, max_level

__all__ = [
    "CurriculumLevel",
    "SessionRanges",
    "act_explore",
    "curriculum_level",
    "epsilon",
    "max_level",
]


def epsilon(t: int, exploration_steps: float = 1e6, start: float = 1.0, end: float = 0.1) -> float:
    """Linear decay from `start` to `end` over the exploration phase."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return max(end, start - (start - end) * t / exploration_steps)


def act_explore(policy: np.ndarray, eps: float, rng: np.random.Generator) -> int:
    """Sample from the mixture eps*uniform + (1-eps)*policy."""
    probs = np.asarray(policy, dtype=np.float64).ravel()
    n = probs.size
    mix = eps / n + (1.0 - eps) * probs
    mix = mix / mix.sum()
    return int(rng.choice(n, p=mix))
