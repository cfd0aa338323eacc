from .replay import Experience, ReplayBuffer
from .schedule import (
    CurriculumLevel,
    SessionRanges,
    act_explore,
    curriculum_level,
    epsilon,
    max_level,
)
from .trainer import TrainConfig, Trainer, TrainingAborted, qa_loss, td_factor

__all__ = [
    "CurriculumLevel",
    "Experience",
    "ReplayBuffer",
    "SessionRanges",
    "TrainConfig",
    "Trainer",
    "TrainingAborted",
    "act_explore",
    "curriculum_level",
    "epsilon",
    "max_level",
    "qa_loss",
    "td_factor",
]
