"""Joint NAV/QA training: epsilon-mixture exploration, prioritized replay,
off-policy actor-critic with a delayed target network, online supervised QA,
and curriculum scheduling."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .. import nn
from ..language import LEXICON, NAV_TYPES, QA_TYPES, NO_SPLIT, gen_question
from ..language.splits import ZeroShotSplit
from ..model import GroundingModel, ModelConfig
from ..nn import RngHub, Tape, Tensor
from ..sessions import ActiveSession, start_session
from ..world import ACTIONS, render_ego, step as world_step
from .replay import Experience, ReplayBuffer
from .schedule import SessionRanges, act_explore, curriculum_level, epsilon


class TrainingAborted(RuntimeError):
    def __init__(self, message: str, last_checkpoint: Optional[str]):
        super().__init__(message)
        self.last_checkpoint = last_checkpoint


@dataclass
class TrainConfig:
    lr: float = 1e-5
    batch: int = 16
    max_minibatches: int = 200_000
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
    nav_types: tuple[str, ...] = NAV_TYPES
    qa_types: tuple[str, ...] = QA_TYPES

    def validate(self) -> None:
        for key in ("lr", "batch", "max_minibatches", "exploration_steps",
                    "curriculum_sessions", "target_update", "replay_capacity",
                    "metrics_window", "checkpoint_every"):
            if getattr(self, key) <= 0:
                raise ValueError(f"{key} must be positive")
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma {self.gamma} outside (0,1]")
        if self.weight_decay < 0 or self.qa_weight < 0:
            raise ValueError("weight_decay and qa_weight must be non-negative")


def td_factor(reward: float, gamma: float, v_next_target: float, v_live: float, done: bool) -> float:
    """The constant multiplier on (grad log pi + grad v) for one sample."""
    bootstrap = 0.0 if done else gamma * v_next_target
    return reward + bootstrap - v_live


def qa_loss(m: Tensor, answer_ids) -> Tensor:
    """Multiclass cross entropy over the full lexicon logits, summed over the batch."""
    nll = nn.pick(nn.log_softmax(m, axis=-1), np.asarray(answer_ids), axis=-1)
    return nn.mul(nn.tsum(nll), -1.0)


def _group_by_length(token_lists) -> dict[int, list[int]]:
    groups: dict[int, list[int]] = {}
    for i, toks in enumerate(token_lists):
        groups.setdefault(len(toks), []).append(i)
    return groups


@dataclass
class _SessionStats:
    discounted: float = 0.0
    discount: float = 1.0


class Trainer:
    def __init__(
        self,
        cfg: TrainConfig,
        model_cfg: ModelConfig,
        ranges: SessionRanges,
        seed: int = 0,
        split: ZeroShotSplit = NO_SPLIT,
        out_dir: Optional[str] = None,
        meta: Optional[dict] = None,
    ):
        cfg.validate()
        self.cfg = cfg
        self.ranges = ranges
        self.split = split
        self.seed = seed
        self.meta = dict(meta or {})
        self.hub = RngHub(seed)
        self.model = GroundingModel(model_cfg, len(LEXICON), self.hub)
        self.target = GroundingModel(model_cfg, len(LEXICON), self.hub)
        self.target.store.load_values(self.model.store.snapshot())
        self.replay = ReplayBuffer(cfg.replay_capacity)
        self.out_dir = out_dir
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        self.env_steps = 0
        self.sessions_done = 0
        self.last_checkpoint: Optional[str] = None
        self.metrics_rows: list[tuple] = []
        self._window_returns: list[float] = []
        self._window_qa = [0, 0]  # correct, asked
        self.session: Optional[ActiveSession] = None
        self._frame: Optional[np.ndarray] = None
        self._stats = _SessionStats()

    # -- session plumbing ------------------------------------------------------

    def _level(self):
        return curriculum_level(self.sessions_done, self.cfg.curriculum_sessions, self.ranges)

    def _begin_session(self) -> None:
        self.session = start_session(
            self.ranges,
            self.hub.stream("env"),
            self.hub.stream("teacher"),
            level=self._level(),
            split=self.split,
            nav_types=self.cfg.nav_types,
        )
        self._frame = render_ego(self.session.state)
        self._stats = _SessionStats()

    def _end_session(self) -> None:
        self.sessions_done += 1
        self._window_returns.append(self._stats.discounted)
        self._begin_session()

    # -- gradient computations -------------------------------------------------

    def _target_values(self, batch: list[Experience]) -> np.ndarray:
        values = np.zeros(len(batch), dtype=np.float64)
        alive = [i for i, e in enumerate(batch) if not e.done]
        if not alive:
            return values
        imgs = np.stack([batch[i].next_image for i in alive])
        h = self.target.encode_image(imgs)
        for _length, rows in _group_by_length([batch[i].next_tokens for i in alive]).items():
            idx = np.array(rows)
            toks = np.array([batch[alive[i]].next_tokens for i in rows])
            hg = nn.take_rows(h, idx)
            grounding = self.target.interpret(hg, toks)
            x_terr = self.target.terrain_map(hg)
            _, v, _ = self.target.nav_head(grounding.x_loc, x_terr)
            for j, row in enumerate(rows):
                values[alive[row]] = float(v.data[j])
        return values

    def ac_gradient(self, batch: list[Experience]) -> np.ndarray:
        """Accumulate the actor-critic gradient for one replay batch.

        Returns the TD factors (used both as the per-sample constant in the
        gradient and as refreshed replay priorities).
        """
        v_next = self._target_values(batch)
        tds = np.zeros(len(batch), dtype=np.float64)
        with Tape() as tape:
            imgs = np.stack([e.image for e in batch])
            h = self.model.encode_image(imgs)
            total = None
            for _length, rows in _group_by_length([e.tokens for e in batch]).items():
                idx = np.array(rows)
                toks = np.array([batch[i].tokens for i in rows])
                hg = nn.take_rows(h, idx)
                grounding = self.model.interpret(hg, toks)
                x_terr = self.model.terrain_map(hg)
                _, value, logits = self.model.nav_head(grounding.x_loc, x_terr)
                actions = np.array([batch[i].action for i in rows])
                logp = nn.reshape(nn.pick(nn.log_softmax(logits, axis=-1), actions), (len(rows),))
                for j, i in enumerate(rows):
                    tds[i] = td_factor(
                        batch[i].reward, self.cfg.gamma, v_next[i], float(value.data[j]), batch[i].done
                    )
                neg_td = Tensor((-tds[idx]).astype(self.model.store.dtype))
                contrib = nn.tsum(nn.mul(nn.add(logp, value), neg_td))
                total = contrib if total is None else nn.add(total, contrib)
            if not np.isfinite(total.data).all() or not np.isfinite(tds).all():
                raise TrainingAborted("non-finite actor-critic loss", self.last_checkpoint)
            tape.backward(total)
        return tds

    def qa_gradient(self, frame: np.ndarray, tokens, answer_id: int) -> tuple[float, bool]:
        """Online supervised QA update for one asked question."""
        with Tape() as tape:
            m, answers, _ = self.model.qa_forward(frame[None], np.array([tokens]))
            loss = qa_loss(m, np.array([answer_id]))
            if self.cfg.qa_weight != 1.0:
                loss = nn.mul(loss, self.cfg.qa_weight)
            if not np.isfinite(loss.data).all():
                raise TrainingAborted("non-finite QA loss", self.last_checkpoint)
            tape.backward(loss)
        return float(loss.data), int(answers[0]) == int(answer_id)

    # -- the loop ---------------------------------------------------------------

    def _act(self, eps: float) -> int:
        explore = self.hub.stream("exploration")
        if self.session.command is None:
            return int(explore.integers(len(ACTIONS)))
        policy, _, _ = self.model.nav_forward(
            self._frame[None], np.array([self.session.command.tokens])
        )
        return act_explore(policy.data[0], eps, explore)

    def _maybe_question(self):
        if self.cfg.nava:
            return None
        return gen_question(
            self.session.state,
            self.split,
            self.hub.stream("teacher"),
            types=self.cfg.qa_types,
            max_len=self._level().max_len,
        )

    def train_step(self, minibatch_index: int) -> None:
        eps = epsilon(self.env_steps, self.cfg.exploration_steps, self.cfg.eps_start, self.cfg.eps_end)
        question = self._maybe_question()
        action = self._act(eps)
        state = self.session.state
        frame = self._frame
        command = self.session.command
        outcome = world_step(state, ACTIONS[action])
        next_frame = render_ego(state)
        self.env_steps += 1
        self._stats.discounted += self._stats.discount * outcome.reward
        self._stats.discount *= self.cfg.gamma
        if command is not None:
            self.replay.push(
                Experience(
                    tokens=tuple(command.tokens),
                    image=frame,
                    action=action,
                    reward=outcome.reward,
                    next_tokens=tuple(command.tokens),
                    next_image=next_frame,
                    done=outcome.done,
                )
            )

        if question is not None:
            _, correct = self.qa_gradient(frame, question.tokens, question.payload)
            self._window_qa[0] += int(correct)
            self._window_qa[1] += 1

        if len(self.replay):
            idx = self.replay.sample(self.cfg.batch, self.hub.stream("replay"))
            batch = [self.replay[i] for i in idx]
            tds = self.ac_gradient(batch)
            self.replay.update_priorities(idx, tds)

        self.model.store.fill_missing_grads()
        self.model.store.adagrad_step(self.cfg.lr, self.cfg.weight_decay)

        if minibatch_index % self.cfg.target_update == 0:
            self.target.store.load_values(self.model.store.snapshot())
        if outcome.done:
            self._end_session()
        else:
            self._frame = next_frame

    def _flush_metrics(self, step: int) -> tuple:
        eps = epsilon(self.env_steps, self.cfg.exploration_steps, self.cfg.eps_start, self.cfg.eps_end)
        avg_ret = float(np.mean(self._window_returns)) if self._window_returns else 0.0
        qa_acc = self._window_qa[0] / self._window_qa[1] if self._window_qa[1] else 0.0
        row = (step, avg_ret, qa_acc, eps, self._level().fraction)
        self.metrics_rows.append(row)
        self._window_returns = []
        self._window_qa = [0, 0]
        return row

    def save_checkpoint(self, name: str) -> Optional[str]:
        if not self.out_dir:
            return None
        path = os.path.join(self.out_dir, name)
        meta = dict(self.meta)
        meta.update({"step": self.env_steps, "sessions": self.sessions_done, "seed": self.seed})
        nn.save_checkpoint(path, self.model.store, meta)
        self.last_checkpoint = path
        return path

    def write_metrics(self) -> Optional[str]:
        if not self.out_dir:
            return None
        path = os.path.join(self.out_dir, "metrics.csv")
        with open(path, "w") as fh:
            fh.write(f"# config_hash={self.meta.get('config_hash', 'none')} seed={self.seed}\n")
            fh.write("step,avg_discounted_reward,qa_accuracy_running,epsilon,curriculum_fraction\n")
            for row in self.metrics_rows:
                fh.write("%d,%.6f,%.6f,%.6f,%.6f\n" % row)
        return path

    def train(self, log=None) -> dict:
        if self.session is None:
            self._begin_session()
        for mb in range(1, self.cfg.max_minibatches + 1):
            self.train_step(mb)
            if mb % self.cfg.metrics_window == 0:
                row = self._flush_metrics(mb)
                if log:
                    log("step=%d reward=%.3f qa=%.3f eps=%.2f cur=%.2f" % row)
            if mb % self.cfg.checkpoint_every == 0:
                self.save_checkpoint("latest.ckpt")
                self.write_metrics()
        if self.cfg.max_minibatches % self.cfg.metrics_window != 0:
            self._flush_metrics(self.cfg.max_minibatches)
        final = self.save_checkpoint("final.ckpt")
        metrics = self.write_metrics()
        return {
            "checkpoint": final,
            "metrics": metrics,
            "sessions": self.sessions_done,
            "env_steps": self.env_steps,
            "rows": self.metrics_rows,
        }
