"""Run configuration: flat key=value files with [section] headers.

Defaults are the full-scale settings; the desk-scale overlay shrinks the
world, model, and schedule so a run fits a single CPU.  Unknown keys, type
mismatches, and out-of-range values are rejected with the offending line.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, fields, replace

from .language import ALL_TYPES, NAV_TYPES, QA_TYPES
from .language.splits import ZeroShotSplit, make_split
from .model import ModelConfig
from .training.schedule import SessionRanges
from .training.trainer import TrainConfig
from .world.types import GRID, N_CLASSES


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    profile: str = "full"
    interpreter_output: str = "gated"

    lr: float = 1e-5
    batch: int = 16
    minibatches: int = 200_000
    gamma: float = 0.99
    weight_decay: float = 16e-4
    exploration_steps: float = 1e6
    eps_start: float = 1.0
    eps_end: float = 0.1
    curriculum_sessions: int = 25_000
    target_update: int = 2_500
    qa_weight: float = 1.0
    nava: bool = False
    replay_capacity: int = 10_000
    metrics_window: int = 8_000
    checkpoint_every: int = 20_000

    open_min: int = 3
    open_max: int = GRID
    objects_min: int = 1
    objects_max: int = 5
    walls_min: int = 0
    walls_max: int = 15
    classes: int = N_CLASSES
    classes_min: int = 2
    len_min: int = 6
    len_max: int = 13

    nav_types: tuple[str, ...] = NAV_TYPES
    qa_types: tuple[str, ...] = QA_TYPES

    split_kind: str = "none"
    split_percent: float = 0.0
    split_seed: int = -1  # -1: reuse the run seed

    eval_sessions: int = 1_000
    eval_questions: int = 1_000

    # -- derived views ----------------------------------------------------------

    def model_config(self) -> ModelConfig:
        base = ModelConfig.desk() if self.profile == "desk" else ModelConfig()
        return replace(base, interpreter_output=self.interpreter_output)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            lr=self.lr,
            batch=self.batch,
            max_minibatches=self.minibatches,
            gamma=self.gamma,
            weight_decay=self.weight_decay,
            exploration_steps=self.exploration_steps,
            eps_start=self.eps_start,
            eps_end=self.eps_end,
            curriculum_sessions=self.curriculum_sessions,
            target_update=self.target_update,
            qa_weight=self.qa_weight,
            nava=self.nava,
            replay_capacity=self.replay_capacity,
            metrics_window=self.metrics_window,
            checkpoint_every=self.checkpoint_every,
            nav_types=self.nav_types,
            qa_types=self.qa_types,
        )

    def session_ranges(self) -> SessionRanges:
        return SessionRanges(
            open_min=self.open_min,
            open_max=self.open_max,
            objects_min=self.objects_min,
            objects_max=self.objects_max,
            walls_min=self.walls_min,
            walls_max=self.walls_max,
            class_pool=tuple(range(self.classes)),
            classes_min=self.classes_min,
            len_min=self.len_min,
            len_max=self.len_max,
        )

    def split(self) -> ZeroShotSplit:
        seed = self.seed if self.split_seed < 0 else self.split_seed
        from .language.lexicon import OBJECT_WORDS

        pool_words = tuple(OBJECT_WORDS[c] for c in range(self.classes))
        return make_split(self.split_kind, self.split_percent, seed, object_words=pool_words)

    def config_hash(self) -> str:
        return hashlib.sha256(serialize_config(self).encode()).hexdigest()[:12]


def _parse_bool(v: str) -> bool:
    if v.lower() in ("true", "1", "yes", "on"):
        return True
    if v.lower() in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _parse_types(v: str) -> tuple[str, ...]:
    items = tuple(x.strip() for x in v.split(",") if x.strip())
    for item in items:
        if item not in ALL_TYPES:
            raise ValueError(f"unknown sentence type {item!r}")
    return items


# section.key -> (attribute, parser, validator, description of the valid range)
SCHEMA = {
    "run.seed": ("seed", int, lambda v: v >= 0, ">= 0"),
    "model.profile": ("profile", str, lambda v: v in ("full", "desk"), "full|desk"),
    "model.interpreter_output": (
        "interpreter_output", str, lambda v: v in ("gated", "raw"), "gated|raw",
    ),
    "train.lr": ("lr", float, lambda v: v > 0, "> 0"),
    "train.batch": ("batch", int, lambda v: v >= 1, ">= 1"),
    "train.minibatches": ("minibatches", int, lambda v: v >= 1, ">= 1"),
    "train.gamma": ("gamma", float, lambda v: 0 < v <= 1, "(0,1]"),
    "train.weight_decay": ("weight_decay", float, lambda v: v >= 0, ">= 0"),
    "train.exploration_steps": ("exploration_steps", float, lambda v: v > 0, "> 0"),
    "train.eps_start": ("eps_start", float, lambda v: 0 <= v <= 1, "[0,1]"),
    "train.eps_end": ("eps_end", float, lambda v: 0 <= v <= 1, "[0,1]"),
    "train.curriculum_sessions": ("curriculum_sessions", int, lambda v: v >= 1, ">= 1"),
    "train.target_update": ("target_update", int, lambda v: v >= 1, ">= 1"),
    "train.qa_weight": ("qa_weight", float, lambda v: v >= 0, ">= 0"),
    "train.nava": ("nava", _parse_bool, lambda v: True, "bool"),
    "train.replay_capacity": ("replay_capacity", int, lambda v: v >= 1, ">= 1"),
    "train.metrics_window": ("metrics_window", int, lambda v: v >= 1, ">= 1"),
    "train.checkpoint_every": ("checkpoint_every", int, lambda v: v >= 1, ">= 1"),
    "session.open_min": ("open_min", int, lambda v: 3 <= v <= GRID, f"[3,{GRID}]"),
    "session.open_max": ("open_max", int, lambda v: 3 <= v <= GRID, f"[3,{GRID}]"),
    "session.objects_min": ("objects_min", int, lambda v: 1 <= v <= 5, "[1,5]"),
    "session.objects_max": ("objects_max", int, lambda v: 1 <= v <= 5, "[1,5]"),
    "session.walls_min": ("walls_min", int, lambda v: 0 <= v <= 15, "[0,15]"),
    "session.walls_max": ("walls_max", int, lambda v: 0 <= v <= 15, "[0,15]"),
    "session.classes": ("classes", int, lambda v: 1 <= v <= N_CLASSES, f"[1,{N_CLASSES}]"),
    "session.classes_min": ("classes_min", int, lambda v: v >= 1, ">= 1"),
    "session.len_min": ("len_min", int, lambda v: 2 <= v <= 13, "[2,13]"),
    "session.len_max": ("len_max", int, lambda v: 2 <= v <= 13, "[2,13]"),
    "language.nav_types": ("nav_types", _parse_types, lambda v: all(t in NAV_TYPES for t in v), "nav types"),
    "language.qa_types": ("qa_types", _parse_types, lambda v: all(t in QA_TYPES for t in v), "qa types"),
    "split.kind": ("split_kind", str, lambda v: v in ("none", "ZS1", "ZS2"), "none|ZS1|ZS2"),
    "split.percent": ("split_percent", float, lambda v: 0 <= v < 100, "[0,100)"),
    "split.seed": ("split_seed", int, lambda v: v >= -1, ">= -1"),
    "eval.sessions": ("eval_sessions", int, lambda v: v >= 1, ">= 1"),
    "eval.questions": ("eval_questions", int, lambda v: v >= 1, ">= 1"),
}

_TUPLE_KEYS = ("nav_types", "qa_types")

DESK_OVERLAY = {
    "model.profile": "desk",
    "train.lr": "0.02",
    "train.weight_decay": "1e-5",
    "train.minibatches": "20000",
    "train.exploration_steps": "8000",
    "train.curriculum_sessions": "400",
    "train.target_update": "200",
    "train.metrics_window": "1000",
    "train.checkpoint_every": "5000",
    "session.open_min": "5",
    "session.open_max": "5",
    "session.objects_max": "2",
    "session.walls_max": "2",
    "session.classes": "8",
    "session.len_min": "6",
    "language.nav_types": "nav_obj,nav_nr_obj",
    "language.qa_types": "rec_obj2col,rec_loc2obj",
    "eval.sessions": "1000",
    "eval.questions": "1000",
}


def apply_entries(cfg: RunConfig, entries: dict[str, str], where: dict | None = None) -> RunConfig:
    values = {}
    for key, raw in entries.items():
        line = (where or {}).get(key, "?")
        spec = SCHEMA.get(key)
        if spec is None:
            raise ConfigError(f"line {line}: unknown key '{key}'")
        attr, caster, validator, valid_range = spec
        try:
            value = caster(raw)
        except (ValueError, TypeError) as e:
            raise ConfigError(f"line {line}: key '{key}': {e}") from None
        if not validator(value):
            raise ConfigError(f"line {line}: key '{key}' value {raw!r} outside {valid_range}")
        values[attr] = value
    cfg = replace(cfg, **values)
    _cross_validate(cfg)
    return cfg


def _cross_validate(cfg: RunConfig) -> None:
    for lo, hi in (("open_min", "open_max"), ("objects_min", "objects_max"),
                   ("walls_min", "walls_max"), ("len_min", "len_max")):
        if getattr(cfg, lo) > getattr(cfg, hi):
            raise ConfigError(f"{lo} exceeds {hi}")
    if cfg.eps_end > cfg.eps_start:
        raise ConfigError("eps_end exceeds eps_start")
    if not cfg.nav_types or not cfg.qa_types:
        raise ConfigError("nav_types and qa_types must be non-empty")


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    cfg = base if base is not None else RunConfig()
    section = None
    entries: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if section:
            key = f"{section}.{key}"
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        entries[key] = value.strip()
        lines[key] = lineno
    return apply_entries(cfg, entries, lines)


def parse_config(path, base: RunConfig | None = None) -> RunConfig:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config_text(text, base=base)


def desk_overlay(cfg: RunConfig) -> RunConfig:
    return apply_entries(cfg, DESK_OVERLAY)


def serialize_config(cfg: RunConfig) -> str:
    by_section: dict[str, list[str]] = {}
    for key, (attr, _c, _v, _r) in SCHEMA.items():
        section, _, name = key.partition(".")
        value = getattr(cfg, attr)
        if attr in _TUPLE_KEYS:
            value = ",".join(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, float):
            value = repr(value)
        by_section.setdefault(section, []).append(f"{name} = {value}")
    parts = []
    for section in ("run", "model", "train", "session", "language", "split", "eval"):
        parts.append(f"[{section}]")
        parts.extend(by_section.get(section, []))
        parts.append("")
    return "\n".join(parts)
