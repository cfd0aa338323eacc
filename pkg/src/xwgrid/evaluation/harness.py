"""NAV success-rate and QA accuracy evaluation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..language import NAV_TYPES, NO_SPLIT, QA_TYPES, gen_question
from ..language.splits import ZeroShotSplit
from ..model import GroundingModel
from ..nn import RngHub
from ..sessions import ActiveSession, start_session
from ..training.schedule import SessionRanges, max_level
from ..world import ACTIONS, ACTION_OFFSETS, bfs_path, render_ego, step as world_step


@dataclass
class EvalReport:
    n_sessions: int = 0
    nav_by_type: dict[str, list[int]] = field(default_factory=dict)  # type -> [successes, total]
    qa_by_type: dict[str, list[int]] = field(default_factory=dict)  # type -> [correct, total]
    split_kind: str = "none"
    seed: int = 0

    def record_nav(self, type_id: str, success: bool) -> None:
        bucket = self.nav_by_type.setdefault(type_id, [0, 0])
        bucket[0] += int(success)
        bucket[1] += 1

    def record_qa(self, type_id: str, correct: bool) -> None:
        bucket = self.qa_by_type.setdefault(type_id, [0, 0])
        bucket[0] += int(correct)
        bucket[1] += 1

    @property
    def nav_success_rate(self) -> float:
        done = sum(b[1] for b in self.nav_by_type.values())
        return sum(b[0] for b in self.nav_by_type.values()) / done if done else 0.0

    @property
    def qa_accuracy(self) -> float:
        done = sum(b[1] for b in self.qa_by_type.values())
        return sum(b[0] for b in self.qa_by_type.values()) / done if done else 0.0

    def to_csv(self) -> str:
        lines = ["kind,type,hits,total,rate"]
        for type_id, (hits, total) in sorted(self.nav_by_type.items()):
            lines.append(f"nav,{type_id},{hits},{total},{hits / total:.6f}")
        for type_id, (hits, total) in sorted(self.qa_by_type.items()):
            lines.append(f"qa,{type_id},{hits},{total},{hits / total:.6f}")
        lines.append(f"nav,overall,,,{self.nav_success_rate:.6f}")
        lines.append(f"qa,overall,,,{self.qa_accuracy:.6f}")
        return "\n".join(lines) + "\n"


def scripted_action(session: ActiveSession) -> Optional[str]:
    """Next action along the shortest wall- and object-avoiding path to the goal."""
    state = session.state
    if state.goal is None:
        return None
    path = bfs_path(state, state.agent, state.goal, avoid_objects=True)
    if path is None or len(path) < 2:
        return None
    dr, dc = path[1][0] - state.agent[0], path[1][1] - state.agent[1]
    for name, off in ACTION_OFFSETS.items():
        if off == (dr, dc):
            return name
    return None


def run_session(
    session: ActiveSession,
    policy_fn,
    gamma: float = 0.99,
) -> dict:
    """Roll a session to completion; policy_fn(state, frame, tokens) -> action name."""
    state = session.state
    tokens = session.command.tokens if session.command else None
    discounted = total = 0.0
    disc = 1.0
    events: dict[str, int] = {}
    while not state.finished:
        frame = render_ego(state)
        action = policy_fn(state, frame, tokens)
        outcome = world_step(state, action)
        for ev in outcome.events:
            events[ev] = events.get(ev, 0) + 1
        total += outcome.reward
        discounted += disc * outcome.reward
        disc *= gamma
    return {
        "success": events.get("reached_goal", 0) > 0,
        "steps": state.step_count,
        "return": total,
        "discounted": discounted,
        "events": events,
    }


def greedy_policy(model: GroundingModel):
    def policy_fn(state, frame, tokens):
        policy, _, _ = model.nav_forward(frame[None], np.array([tokens]))
        return ACTIONS[int(np.argmax(policy.data[0]))]

    return policy_fn


def eval_nav(
    model: GroundingModel,
    n_sessions: int,
    ranges: SessionRanges,
    seed: int = 0,
    split: ZeroShotSplit = NO_SPLIT,
    nav_types=NAV_TYPES,
    zero_shot: bool = False,
    gamma: float = 0.99,
) -> EvalReport:
    """Greedy-policy success rate over freshly generated sessions.

    With zero_shot=True only sentences exercising the held-out items are used.
    """
    hub = RngHub(seed)
    env_rng, teacher_rng = hub.stream("eval/env"), hub.stream("eval/teacher")
    report = EvalReport(n_sessions=n_sessions, split_kind=split.kind, seed=seed)
    policy_fn = greedy_policy(model)
    for _ in range(n_sessions):
        session = start_session(
            ranges,
            env_rng,
            teacher_rng,
            level=max_level(ranges),
            split=split,
            nav_types=nav_types,
            require_holdout=zero_shot,
            on_blocked="resample",
        )
        result = run_session(session, policy_fn, gamma=gamma)
        report.record_nav(session.command.type_id, result["success"])
    return report


def eval_qa(
    model: GroundingModel,
    n_questions: int,
    ranges: SessionRanges,
    seed: int = 0,
    split: ZeroShotSplit = NO_SPLIT,
    qa_types=QA_TYPES,
    zero_shot: bool = False,
) -> EvalReport:
    """Answer accuracy against the teacher's groundtruth on fresh states."""
    hub = RngHub(seed)
    env_rng, teacher_rng = hub.stream("eval/env"), hub.stream("eval/teacher")
    report = EvalReport(n_sessions=0, split_kind=split.kind, seed=seed)
    asked = 0
    while asked < n_questions:
        session = start_session(
            ranges,
            env_rng,
            teacher_rng,
            level=max_level(ranges),
            split=split,
            nav_types=NAV_TYPES,
            on_blocked="proceed",
        )
        question = gen_question(
            session.state, split, teacher_rng, types=qa_types, require_holdout=zero_shot
        )
        if question is None:
            continue
        frame = render_ego(session.state)
        _, answers, _ = model.qa_forward(frame[None], np.array([question.tokens]))
        report.record_qa(question.type_id, int(answers[0]) == question.payload)
        asked += 1
    return report
