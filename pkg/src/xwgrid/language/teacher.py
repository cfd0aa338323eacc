"""The scripted teacher: triggering conditions, generation, answer payloads.

Triggering conditions over a WorldState:
  C0 beginning of a session          C1 reference object uniquely named
  C2 name/color ambiguity            C3 unique pair separated by one block
  C4 unique color                    C5 agent adjacent to an object
  C6 object adjacent to reference    C7 as C3 with an object in the middle
  C8 agent adjacent to the middle block
Adjacency is 8-connected, matching the eight direction words.  NAV types
additionally require the goal to be reachable over empty cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..world.pathing import goal_reachable
from ..world.types import Cell, ObjectPlacement, WorldState
from .grammar import MAX_LEN, NAV_TYPES, QA_TYPES, TEMPLATES, instantiate
from .lexicon import (
    COLOR_WORDS,
    DIRECTION_OFFSETS,
    DIRECTION_WORDS,
    LEXICON,
    OBJECT_WORDS,
    Lexicon,
)
from .splits import NO_SPLIT, ZeroShotSplit

BW_TYPES = frozenset(t for t in NAV_TYPES + QA_TYPES if "bw" in t)


@dataclass
class TeacherUtterance:
    type_id: str
    tokens: list[int]
    text: str
    payload: object  # goal Cell for NAV, answer word id for QA


@dataclass(frozen=True)
class Candidate:
    binding: tuple[tuple[str, str], ...]  # slot -> word
    payload: object

    def content_words(self) -> list[str]:
        return [w for _, w in self.binding]


# --- state predicates -------------------------------------------------------


def name_counts(state: WorldState) -> dict[int, int]:
    counts: dict[int, int] = {}
    for o in state.objects:
        counts[o.class_id] = counts.get(o.class_id, 0) + 1
    return counts


def unique_named(state: WorldState) -> list[ObjectPlacement]:
    counts = name_counts(state)
    return [o for o in state.objects if counts[o.class_id] == 1]


def ambiguous_color_targets(state: WorldState) -> list[ObjectPlacement]:
    """C2 targets: (color, name) unique and part of a name/color ambiguity."""
    out = []
    for o in state.objects:
        pair_unique = True
        ambiguous = False
        for other in state.objects:
            if other is o:
                continue
            same_name = other.class_id == o.class_id
            same_color = other.color_id == o.color_id
            if same_name and same_color:
                pair_unique = False
            if (same_name and not same_color) or (not same_name and same_color):
                ambiguous = True
        if pair_unique and ambiguous:
            out.append(o)
    return out


def unique_colored(state: WorldState) -> list[ObjectPlacement]:
    by_color: dict[int, list[ObjectPlacement]] = {}
    for o in state.objects:
        by_color.setdefault(o.color_id, []).append(o)
    return [objs[0] for objs in by_color.values() if len(objs) == 1]


def adjacent_objects(state: WorldState, cell: Cell) -> list[tuple[str, ObjectPlacement]]:
    """(direction word, object) for the 8-neighborhood of `cell`."""
    at = {o.cell: o for o in state.objects}
    out = []
    for word in DIRECTION_WORDS:
        dr, dc = DIRECTION_OFFSETS[word]
        obj = at.get((cell[0] + dr, cell[1] + dc))
        if obj is not None and obj.cell != cell:
            out.append((word, obj))
    return out


def direction_of(src: Cell, dst: Cell) -> Optional[str]:
    delta = (dst[0] - src[0], dst[1] - src[1])
    for word, off in DIRECTION_OFFSETS.items():
        if off == delta:
            return word
    return None


def between_pairs(state: WorldState) -> list[tuple[ObjectPlacement, ObjectPlacement, Cell]]:
    """Unique-named object pairs in the same row/column with a one-cell gap."""
    uniq = unique_named(state)
    out = []
    for i, o1 in enumerate(uniq):
        for o2 in uniq[i + 1 :]:
            (r1, c1), (r2, c2) = o1.cell, o2.cell
            if r1 == r2 and abs(c1 - c2) == 2:
                out.append((o1, o2, (r1, (c1 + c2) // 2)))
            elif c1 == c2 and abs(r1 - r2) == 2:
                out.append((o1, o2, ((r1 + r2) // 2, c1)))
    return out


def _nav_goal_ok(state: WorldState, goal: Cell) -> bool:
    return (
        state.in_bounds(goal)
        and not state.is_wall(goal)
        and goal != state.agent
        and goal_reachable(state, goal)
    )


# --- candidate enumeration per sentence type --------------------------------


def _obj_word(o: ObjectPlacement) -> str:
    return OBJECT_WORDS[o.class_id]


def _color_word(o: ObjectPlacement) -> str:
    return COLOR_WORDS[o.color_id]


def candidates(state: WorldState, type_id: str, allow_empty: bool = False) -> list[Candidate]:
    lex = LEXICON
    out: list[Candidate] = []
    if type_id == "nav_obj":
        for o in unique_named(state):
            if _nav_goal_ok(state, o.cell):
                out.append(Candidate((("{OBJ}", _obj_word(o)),), o.cell))
    elif type_id == "nav_col_obj":
        for o in ambiguous_color_targets(state):
            if _nav_goal_ok(state, o.cell):
                out.append(
                    Candidate((("{COLOR}", _color_word(o)), ("{OBJ}", _obj_word(o))), o.cell)
                )
    elif type_id == "nav_nr_obj":
        for o in unique_named(state):
            for word in DIRECTION_WORDS:
                dr, dc = DIRECTION_OFFSETS[word]
                goal = (o.cell[0] + dr, o.cell[1] + dc)
                if _nav_goal_ok(state, goal):
                    out.append(
                        Candidate((("{DIR}", word), ("{OBJ}", _obj_word(o))), goal)
                    )
    elif type_id == "nav_bw_obj":
        for o1, o2, middle in between_pairs(state):
            if _nav_goal_ok(state, middle):
                for a, b in ((o1, o2), (o2, o1)):
                    out.append(
                        Candidate((("{OBJ}", _obj_word(a)), ("{OBJ2}", _obj_word(b))), middle)
                    )
    elif type_id == "rec_col2obj":
        for o in unique_colored(state):
            out.append(
                Candidate((("{COLOR}", _color_word(o)),), lex.id_of(_obj_word(o)))
            )
    elif type_id == "rec_obj2col":
        for o in unique_named(state):
            out.append(
                Candidate((("{OBJ}", _obj_word(o)),), lex.id_of(_color_word(o)))
            )
    elif type_id == "rec_loc2obj":
        near = adjacent_objects(state, state.agent)
        for word, o in near:
            out.append(Candidate((("{DIR}", word),), lex.id_of(_obj_word(o))))
        if allow_empty and near:
            taken = {w for w, _ in near}
            for word in DIRECTION_WORDS:
                if word not in taken:
                    out.append(Candidate((("{DIR}", word),), lex.id_of("nothing")))
    elif type_id == "rec_obj2loc":
        counts = name_counts(state)
        for word, o in adjacent_objects(state, state.agent):
            if counts[o.class_id] == 1:
                out.append(Candidate((("{OBJ}", _obj_word(o)),), lex.id_of(word)))
    elif type_id == "rec_loc2col":
        near = adjacent_objects(state, state.agent)
        for word, o in near:
            out.append(Candidate((("{DIR}", word),), lex.id_of(_color_word(o))))
        if allow_empty and near:
            taken = {w for w, _ in near}
            for word in DIRECTION_WORDS:
                if word not in taken:
                    out.append(Candidate((("{DIR}", word),), lex.id_of("nothing")))
    elif type_id == "rec_col2loc":
        for o in unique_colored(state):
            word = direction_of(state.agent, o.cell)
            if word is not None:
                out.append(Candidate((("{COLOR}", _color_word(o)),), lex.id_of(word)))
    elif type_id == "rec_loc_obj2obj":
        for ref in unique_named(state):
            found = adjacent_objects(state, ref.cell)
            for word, other in found:
                out.append(
                    Candidate(
                        (("{DIR}", word), ("{OBJ}", _obj_word(ref))),
                        lex.id_of(_obj_word(other)),
                    )
                )
            if allow_empty and found:
                taken = {w for w, _ in found}
                for word in DIRECTION_WORDS:
                    if word not in taken:
                        out.append(
                            Candidate(
                                (("{DIR}", word), ("{OBJ}", _obj_word(ref))),
                                lex.id_of("nothing"),
                            )
                        )
    elif type_id == "rec_loc_obj2col":
        for ref in unique_named(state):
            for word, other in adjacent_objects(state, ref.cell):
                out.append(
                    Candidate(
                        (("{DIR}", word), ("{OBJ}", _obj_word(ref))),
                        lex.id_of(_color_word(other)),
                    )
                )
    elif type_id == "rec_col_obj2loc":
        for o in ambiguous_color_targets(state):
            word = direction_of(state.agent, o.cell)
            if word is not None:
                out.append(
                    Candidate(
                        (("{COLOR}", _color_word(o)), ("{OBJ}", _obj_word(o))),
                        lex.id_of(word),
                    )
                )
    elif type_id in ("rec_bw_obj2obj", "rec_bw_obj2loc", "rec_bw_obj2col"):
        at = {o.cell: o for o in state.objects}
        for o1, o2, middle in between_pairs(state):
            mid_obj = at.get(middle)
            if mid_obj is None:
                continue
            if type_id == "rec_bw_obj2obj":
                payload = lex.id_of(_obj_word(mid_obj))
            elif type_id == "rec_bw_obj2col":
                payload = lex.id_of(_color_word(mid_obj))
            else:  # rec_bw_obj2loc also needs C8: agent next to the middle block
                word = direction_of(state.agent, middle)
                if word is None:
                    continue
                payload = lex.id_of(word)
            for a, b in ((o1, o2), (o2, o1)):
                out.append(
                    Candidate((("{OBJ}", _obj_word(a)), ("{OBJ2}", _obj_word(b))), payload)
                )
    else:
        raise ValueError(f"unknown sentence type {type_id!r}")
    return out


def eligible_types(state: WorldState, phase: str = "session_start") -> list[str]:
    """Sentence types whose triggering condition currently holds."""
    types = []
    if phase == "session_start":
        types += [t for t in NAV_TYPES if candidates(state, t)]
    types += [t for t in QA_TYPES if candidates(state, t)]
    return types


# --- generation --------------------------------------------------------------


def _candidate_token_words(type_id: str, cand: Candidate) -> list[str]:
    words = cand.content_words()
    if type_id in BW_TYPES:
        words.append("between")
    return words


def _passes_split(type_id, cand, split: ZeroShotSplit, require_holdout: bool) -> bool:
    ids = [LEXICON.id_of(w) for w in _candidate_token_words(type_id, cand)]
    if split.blocks(ids):
        return require_holdout
    return not require_holdout


def _pick_template(type_id: str, rng: np.random.Generator, max_len: Optional[int]):
    templates = TEMPLATES[type_id]
    if max_len is not None:
        fitting = [t for t in templates if len(t) <= max_len]
        if not fitting:
            fitting = [min(templates, key=len)]  # cap below the shortest: fall back
        templates = fitting
    return templates[int(rng.integers(len(templates)))]


def _generate(
    state: WorldState,
    type_pool,
    split: ZeroShotSplit,
    rng: np.random.Generator,
    max_len: Optional[int],
    require_holdout: bool,
    allow_empty: bool,
) -> Optional[TeacherUtterance]:
    viable: list[tuple[str, list[Candidate]]] = []
    for type_id in type_pool:
        cands = [
            c
            for c in candidates(state, type_id, allow_empty=allow_empty)
            if _passes_split(type_id, c, split, require_holdout)
        ]
        if cands:
            viable.append((type_id, cands))
    if not viable:
        return None
    type_id, cands = viable[int(rng.integers(len(viable)))]
    template = _pick_template(type_id, rng, max_len)
    cand = cands[int(rng.integers(len(cands)))]
    words = instantiate(template, dict(cand.binding))
    tokens = [LEXICON.id_of(w) for w in words]
    return TeacherUtterance(
        type_id=type_id, tokens=tokens, text=" ".join(words), payload=cand.payload
    )


def gen_command(
    state: WorldState,
    split: ZeroShotSplit = NO_SPLIT,
    rng: Optional[np.random.Generator] = None,
    types=NAV_TYPES,
    max_len: Optional[int] = None,
    require_holdout: bool = False,
) -> Optional[TeacherUtterance]:
    """NAV command at session start; None when the split excludes everything."""
    rng = rng if rng is not None else np.random.default_rng(0)
    pool = [t for t in NAV_TYPES if t in types]
    return _generate(state, pool, split, rng, max_len, require_holdout, allow_empty=False)


def gen_question(
    state: WorldState,
    split: ZeroShotSplit = NO_SPLIT,
    rng: Optional[np.random.Generator] = None,
    types=QA_TYPES,
    max_len: Optional[int] = None,
    require_holdout: bool = False,
    allow_empty: bool = False,
) -> Optional[TeacherUtterance]:
    """QA question about the current state; None when nothing triggers."""
    rng = rng if rng is not None else np.random.default_rng(0)
    pool = [t for t in QA_TYPES if t in types]
    return _generate(state, pool, split, rng, max_len, require_holdout, allow_empty)


def count_sentences(lexicon: Lexicon = LEXICON) -> tuple[int, int]:
    """Exhaustively enumerate the sentence space; dedupe identical token strings."""
    nav: set[tuple[str, ...]] = set()
    qa: set[tuple[str, ...]] = set()
    for type_id, templates in TEMPLATES.items():
        bucket = nav if type_id in NAV_TYPES else qa
        for template in templates:
            slots = [tok for tok in template if tok.startswith("{")]
            fillings: list[list[str]] = [[]]
            for slot in slots:
                pool = {
                    "{OBJ}": OBJECT_WORDS,
                    "{OBJ2}": OBJECT_WORDS,
                    "{COLOR}": COLOR_WORDS,
                    "{DIR}": DIRECTION_WORDS,
                }[slot]
                fillings = [f + [w] for f in fillings for w in pool]
            for filling in fillings:
                if "{OBJ}" in slots and "{OBJ2}" in slots:
                    a, b = filling[slots.index("{OBJ}")], filling[slots.index("{OBJ2}")]
                    if a == b:
                        continue
                sentence = []
                it = iter(filling)
                for tok in template:
                    sentence.append(next(it) if tok.startswith("{") else tok)
                bucket.add(tuple(sentence))
    return len(nav), len(qa)
