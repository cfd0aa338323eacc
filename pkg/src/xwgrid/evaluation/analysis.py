"""Channel-mask geometry and word-transfer probes on a trained model."""

from __future__ import annotations

import warnings
from typing import Optional

import numpy as np

from ..language import LEXICON, NAV_TYPES, NO_SPLIT, OBJECT_WORDS, QA_TYPES, gen_question
from ..language.splits import ZeroShotSplit
from ..model import GroundingModel, detect
from ..nn import RngHub, Tensor
from ..sessions import start_session
from ..training.schedule import SessionRanges, max_level
from ..world import CANVAS
from ..world.render import canvas_cell_of, render_ego


def collect_questions(
    n_questions: int,
    ranges: SessionRanges,
    seed: int = 0,
    split: ZeroShotSplit = NO_SPLIT,
    qa_types=QA_TYPES,
):
    """(tokens, answer word id, type id) triples from fresh random states."""
    hub = RngHub(seed)
    env_rng, teacher_rng = hub.stream("analyze/env"), hub.stream("analyze/teacher")
    out = []
    while len(out) < n_questions:
        session = start_session(
            ranges, env_rng, teacher_rng, level=max_level(ranges),
            split=split, nav_types=NAV_TYPES, on_blocked="proceed",
        )
        q = gen_question(session.state, split, teacher_rng, types=qa_types)
        if q is not None:
            out.append((tuple(q.tokens), q.payload, q.type_id))
    return out


def _mask_batch(model: GroundingModel, token_lists) -> np.ndarray:
    """Channel masks for many sentences, batched by length."""
    masks = np.zeros((len(token_lists), model.cfg.d), dtype=np.float64)
    groups: dict[int, list[int]] = {}
    for i, toks in enumerate(token_lists):
        groups.setdefault(len(toks), []).append(i)
    for _length, rows in groups.items():
        toks = np.array([token_lists[i] for i in rows])
        x_feat = model.channel_mask(toks)
        masks[np.array(rows)] = x_feat.data
    return masks


def xfeat_distance_matrix(
    model: GroundingModel,
    n_questions: int,
    ranges: SessionRanges,
    seed: int = 0,
    split: ZeroShotSplit = NO_SPLIT,
    qa_types=QA_TYPES,
):
    """Mean Euclidean distances between channel masks, grouped by answer word.

    Returns (labels, topics, matrix).  Groups with no sampled questions are
    omitted with a warning; a singleton group has within-distance 0.
    """
    questions = collect_questions(n_questions, ranges, seed, split, qa_types)
    masks = _mask_batch(model, [q[0] for q in questions])
    by_answer: dict[int, list[int]] = {}
    for i, (_toks, answer, _t) in enumerate(questions):
        by_answer.setdefault(answer, []).append(i)

    possible = set(LEXICON.analysis_group_ids())
    missing = possible - set(by_answer)
    if missing:
        warnings.warn(f"{len(missing)} answer groups had no sampled questions and are omitted")

    labels = [LEXICON.word_of(a) for a in sorted(by_answer)]
    topics = []
    for a in sorted(by_answer):
        roles = LEXICON.roles_of(LEXICON.word_of(a))
        if "color" in roles and "object" in roles:
            topics.append("object")  # "orange": one group, pick the object topic
        elif "color" in roles:
            topics.append("color")
        elif "spatial" in roles:
            topics.append("spatial")
        elif "object" in roles:
            topics.append("object")
        else:
            topics.append("other")
    groups = [np.array(by_answer[a]) for a in sorted(by_answer)]
    k = len(groups)
    matrix = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        xi = masks[groups[i]]
        for j in range(i, k):
            xj = masks[groups[j]]
            d2 = (
                (xi * xi).sum(axis=1)[:, None]
                + (xj * xj).sum(axis=1)[None, :]
                - 2.0 * xi @ xj.T
            )
            dist = np.sqrt(np.maximum(d2, 0.0))
            if i == j:
                n = len(xi)
                value = 0.0 if n < 2 else dist[np.triu_indices(n, k=1)].mean()
            else:
                value = dist.mean()
            matrix[i, j] = matrix[j, i] = value
    return labels, topics, matrix


def write_distance_csv(path, labels, topics, matrix) -> None:
    with open(path, "w") as fh:
        fh.write("label," + ",".join(labels) + "\n")
        fh.write("topic," + ",".join(topics) + "\n")
        for label, row in zip(labels, matrix):
            fh.write(label + "," + ",".join("%.6f" % v for v in row) + "\n")


def read_distance_csv(path):
    with open(path) as fh:
        labels = fh.readline().strip().split(",")[1:]
        topics = fh.readline().strip().split(",")[1:]
        matrix = np.array(
            [[float(v) for v in line.strip().split(",")[1:]] for line in fh]
        )
    return labels, topics, matrix


def topic_distance_summary(topics, matrix) -> tuple[float, float]:
    """(mean within-topic distance, mean cross-topic distance), diagonal excluded."""
    topics = np.array(topics)
    same = topics[:, None] == topics[None, :]
    off = ~np.eye(len(topics), dtype=bool)
    return float(matrix[same & off].mean()), float(matrix[~same].mean())


def transfer_probe(
    model: GroundingModel,
    word: str,
    n_frames: int,
    ranges: SessionRanges,
    seed: int = 0,
    max_attempts_per_frame: int = 200,
) -> float:
    """How well a bare word embedding localizes its object through detection.

    Scores chi = phi(h, 1, u_word) on frames containing the object and reports
    the fraction whose argmax cell lies on the object.
    """
    word_id = LEXICON.id_of(word)
    class_id = OBJECT_WORDS.index(word)
    if class_id not in ranges.class_pool:
        raise ValueError(f"word {word!r} is outside the configured class pool")
    hub = RngHub(seed)
    env_rng, teacher_rng = hub.stream("probe/env"), hub.stream("probe/teacher")
    hits = 0
    ones = Tensor(np.ones(model.cfg.d, dtype=np.float32))
    u = Tensor(model.store["embed"].data[word_id])
    for _ in range(n_frames):
        state = None
        for _attempt in range(max_attempts_per_frame):
            session = start_session(
                ranges, env_rng, teacher_rng, level=max_level(ranges),
                nav_types=NAV_TYPES, on_blocked="proceed",
            )
            if any(o.class_id == class_id for o in session.state.objects):
                state = session.state
                break
        if state is None:
            raise RuntimeError(f"could not place an object for {word!r}")
        h = model.encode_image(render_ego(state)[None])
        chi = detect(h, ones, u).data[0]
        best = int(np.argmax(chi))
        target_cells = {
            canvas_cell_of(state, o.cell) for o in state.objects if o.class_id == class_id
        }
        target_idx = {r * CANVAS + c for rc in target_cells if rc is not None for r, c in [rc]}
        hits += int(best in target_idx)
    return hits / n_frames
