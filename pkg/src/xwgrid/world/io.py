"""Episode traces and session replay files."""

from __future__ import annotations

import json
from dataclasses import asdict

from .types import SessionConfig, StepOutcome, WorldState


def trace_record(state: WorldState, action: str, outcome: StepOutcome) -> str:
    """One JSON line per step: state hash, action, reward, events."""
    return json.dumps(
        {
            "state": state.state_hash(),
            "action": action,
            "reward": round(outcome.reward, 6),
            "events": sorted(outcome.events),
        },
        sort_keys=True,
    )


def save_session_replay(path, cfg: SessionConfig, goal=None) -> None:
    payload = asdict(cfg)
    payload["class_pool"] = list(cfg.class_pool)
    payload["goal"] = list(goal) if goal is not None else None
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)


def load_session_replay(path) -> tuple[SessionConfig, tuple | None]:
    with open(path) as fh:
        payload = json.load(fh)
    goal = payload.pop("goal", None)
    payload["class_pool"] = tuple(payload["class_pool"])
    cfg = SessionConfig(**payload)
    return cfg, tuple(goal) if goal is not None else None
