"""Independent re-derivations used to check the production code.

Everything here is deliberately written from the definitions (plain loops,
no shared helpers from the package) so that generator and checker cannot
share a bug.
"""

from collections import deque

import numpy as np

from xwgrid.language.lexicon import (
    COLOR_WORDS,
    DIRECTION_OFFSETS,
    LEXICON,
    OBJECT_WORDS,
)
from xwgrid.world.types import GRID, WALL


def brute_conv2d(x, kernels, stride=1, pad=0):
    """True convolution by its definition: flip the kernel, slide, accumulate."""
    x = np.asarray(x, dtype=np.float64)
    k = np.asarray(kernels, dtype=np.float64)
    c_in, h, w = x.shape
    o, _, kh, kw = k.shape
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (w + 2 * pad - kw) // stride + 1
    xp = np.zeros((c_in, h + 2 * pad, w + 2 * pad))
    xp[:, pad : pad + h, pad : pad + w] = x
    out = np.zeros((o, oh, ow))
    for oc in range(o):
        for i in range(oh):
            for j in range(ow):
                acc = 0.0
                for c in range(c_in):
                    for u in range(kh):
                        for v in range(kw):
                            acc += k[oc, c, u, v] * xp[c, i * stride + kh - 1 - u, j * stride + kw - 1 - v]
                out[oc, i, j] = acc
    return out


def shift_map(y, dr, dc):
    """Translate a 13x13 map by (dr, dc), truncating at the boundary."""
    out = np.zeros_like(y)
    h, w = y.shape
    for r in range(h):
        for c in range(w):
            sr, sc = r - dr, c - dc
            if 0 <= sr < h and 0 <= sc < w:
                out[r, c] = y[sr, sc]
    return out


# --- independent world predicates -------------------------------------------


def _cells_with_objects(state):
    return {o.cell: o for o in state.objects}


def _class_count(state, class_id):
    return sum(1 for o in state.objects if o.class_id == class_id)


def _empty_reachable(state, src, dst):
    """Flood fill over non-wall, non-object cells (dst itself exempt)."""
    blocked = {o.cell for o in state.objects}
    blocked.discard(dst)
    blocked.discard(src)
    seen = {src}
    queue = deque([src])
    while queue:
        r, c = queue.popleft()
        if (r, c) == dst:
            return True
        for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nxt = (r + dr, c + dc)
            if nxt in seen or not (0 <= nxt[0] < GRID and 0 <= nxt[1] < GRID):
                continue
            if state.grid[nxt] == WALL or nxt in blocked:
                continue
            seen.add(nxt)
            queue.append(nxt)
    return False


def _extract_slots(tokens, type_id):
    """Assign content tokens to the type's slot sequence in order of appearance."""
    slot_seq = {
        "nav_obj": ["OBJ"],
        "nav_col_obj": ["COLOR", "OBJ"],
        "nav_nr_obj": ["DIR", "OBJ"],
        "nav_bw_obj": ["OBJ", "OBJ2"],
        "rec_col2obj": ["COLOR"],
        "rec_obj2col": ["OBJ"],
        "rec_loc2obj": ["DIR"],
        "rec_obj2loc": ["OBJ"],
        "rec_loc2col": ["DIR"],
        "rec_col2loc": ["COLOR"],
        "rec_loc_obj2obj": ["DIR", "OBJ"],
        "rec_loc_obj2col": ["DIR", "OBJ"],
        "rec_col_obj2loc": ["COLOR", "OBJ"],
        "rec_bw_obj2obj": ["OBJ", "OBJ2"],
        "rec_bw_obj2loc": ["OBJ", "OBJ2"],
        "rec_bw_obj2col": ["OBJ", "OBJ2"],
    }[type_id]
    out = {}
    pos = 0
    for tok in tokens:
        word = LEXICON.word_of(tok)
        if pos >= len(slot_seq):
            break
        want = slot_seq[pos]
        roles = LEXICON.roles_of(word)
        if want in ("OBJ", "OBJ2") and "object" in roles and word in OBJECT_WORDS:
            out[want] = word
            pos += 1
        elif want == "COLOR" and "color" in roles:
            out[want] = word
            pos += 1
        elif want == "DIR" and word in DIRECTION_OFFSETS:
            out[want] = word
            pos += 1
    if pos != len(slot_seq):
        raise AssertionError(f"could not extract slots {slot_seq} from {tokens} ({type_id})")
    return out


def check_utterance(state, utt) -> None:
    """Assert that the utterance's trigger condition holds and its payload is right.

    Raises AssertionError with a description on any inconsistency.
    """
    slots = _extract_slots(utt.tokens, utt.type_id)
    objs_at = _cells_with_objects(state)
    t = utt.type_id

    def single_of_class(word):
        cid = OBJECT_WORDS.index(word)
        found = [o for o in state.objects if o.class_id == cid]
        assert len(found) == 1, f"{t}: {word} not unique ({len(found)})"
        return found[0]

    if t == "nav_obj":
        o = single_of_class(slots["OBJ"])
        assert utt.payload == o.cell
        assert _empty_reachable(state, state.agent, o.cell)
    elif t == "nav_col_obj":
        cid = OBJECT_WORDS.index(slots["OBJ"])
        col = COLOR_WORDS.index(slots["COLOR"])
        found = [o for o in state.objects if o.class_id == cid and o.color_id == col]
        assert len(found) == 1, f"{t}: colored pair not unique"
        ambiguous = any(
            (o.class_id == cid) != (o.color_id == col)
            for o in state.objects
            if o is not found[0]
        )
        assert ambiguous, f"{t}: no name/color ambiguity in state"
        assert utt.payload == found[0].cell
        assert _empty_reachable(state, state.agent, found[0].cell)
    elif t == "nav_nr_obj":
        o = single_of_class(slots["OBJ"])
        dr, dc = DIRECTION_OFFSETS[slots["DIR"]]
        goal = (o.cell[0] + dr, o.cell[1] + dc)
        assert utt.payload == goal
        assert 0 <= goal[0] < GRID and 0 <= goal[1] < GRID and state.grid[goal] != WALL
        assert _empty_reachable(state, state.agent, goal)
    elif t == "nav_bw_obj":
        o1 = single_of_class(slots["OBJ"])
        o2 = single_of_class(slots["OBJ2"])
        (r1, c1), (r2, c2) = o1.cell, o2.cell
        assert (r1 == r2 and abs(c1 - c2) == 2) or (c1 == c2 and abs(r1 - r2) == 2)
        middle = ((r1 + r2) // 2, (c1 + c2) // 2)
        assert utt.payload == middle
        assert _empty_reachable(state, state.agent, middle)
    elif t == "rec_col2obj":
        col = COLOR_WORDS.index(slots["COLOR"])
        found = [o for o in state.objects if o.color_id == col]
        assert len(found) == 1, f"{t}: color not unique"
        assert utt.payload == LEXICON.id_of(OBJECT_WORDS[found[0].class_id])
    elif t == "rec_obj2col":
        o = single_of_class(slots["OBJ"])
        assert utt.payload == LEXICON.id_of(COLOR_WORDS[o.color_id])
    elif t in ("rec_loc2obj", "rec_loc2col"):
        dr, dc = DIRECTION_OFFSETS[slots["DIR"]]
        cell = (state.agent[0] + dr, state.agent[1] + dc)
        o = objs_at.get(cell)
        if o is None:
            assert utt.payload == LEXICON.id_of("nothing")
        elif t == "rec_loc2obj":
            assert utt.payload == LEXICON.id_of(OBJECT_WORDS[o.class_id])
        else:
            assert utt.payload == LEXICON.id_of(COLOR_WORDS[o.color_id])
    elif t == "rec_obj2loc":
        o = single_of_class(slots["OBJ"])
        delta = (o.cell[0] - state.agent[0], o.cell[1] - state.agent[1])
        matches = [w for w, off in DIRECTION_OFFSETS.items() if off == delta]
        assert matches, f"{t}: object not adjacent to agent"
        assert utt.payload == LEXICON.id_of(matches[0])
    elif t == "rec_col2loc":
        col = COLOR_WORDS.index(slots["COLOR"])
        found = [o for o in state.objects if o.color_id == col]
        assert len(found) == 1
        delta = (found[0].cell[0] - state.agent[0], found[0].cell[1] - state.agent[1])
        matches = [w for w, off in DIRECTION_OFFSETS.items() if off == delta]
        assert matches and utt.payload == LEXICON.id_of(matches[0])
    elif t in ("rec_loc_obj2obj", "rec_loc_obj2col"):
        ref = single_of_class(slots["OBJ"])
        dr, dc = DIRECTION_OFFSETS[slots["DIR"]]
        cell = (ref.cell[0] + dr, ref.cell[1] + dc)
        o = objs_at.get(cell)
        if o is None:
            assert utt.payload == LEXICON.id_of("nothing")
        elif t == "rec_loc_obj2obj":
            assert utt.payload == LEXICON.id_of(OBJECT_WORDS[o.class_id])
        else:
            assert utt.payload == LEXICON.id_of(COLOR_WORDS[o.color_id])
    elif t == "rec_col_obj2loc":
        cid = OBJECT_WORDS.index(slots["OBJ"])
        col = COLOR_WORDS.index(slots["COLOR"])
        found = [o for o in state.objects if o.class_id == cid and o.color_id == col]
        assert len(found) == 1
        delta = (found[0].cell[0] - state.agent[0], found[0].cell[1] - state.agent[1])
        matches = [w for w, off in DIRECTION_OFFSETS.items() if off == delta]
        assert matches and utt.payload == LEXICON.id_of(matches[0])
    elif t in ("rec_bw_obj2obj", "rec_bw_obj2loc", "rec_bw_obj2col"):
        o1 = single_of_class(slots["OBJ"])
        o2 = single_of_class(slots["OBJ2"])
        (r1, c1), (r2, c2) = o1.cell, o2.cell
        assert (r1 == r2 and abs(c1 - c2) == 2) or (c1 == c2 and abs(r1 - r2) == 2)
        middle = ((r1 + r2) // 2, (c1 + c2) // 2)
        mid_obj = objs_at.get(middle)
        assert mid_obj is not None, f"{t}: nothing between the pair"
        if t == "rec_bw_obj2obj":
            assert utt.payload == LEXICON.id_of(OBJECT_WORDS[mid_obj.class_id])
        elif t == "rec_bw_obj2col":
            assert utt.payload == LEXICON.id_of(COLOR_WORDS[mid_obj.color_id])
        else:
            delta = (middle[0] - state.agent[0], middle[1] - state.agent[1])
            matches = [w for w, off in DIRECTION_OFFSETS.items() if off == delta]
            assert matches, f"{t}: agent not adjacent to the middle block"
            assert utt.payload == LEXICON.id_of(matches[0])
    else:
        raise AssertionError(f"unknown type {t}")
