"""Zero-shot holdout splits.

ZS1 withholds word pairs of three kinds — (object, spatial), (object, color),
(object, object) — from all commands and questions.  ZS2 withholds whole
object words from commands and questions while still permitting them as QA
answers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .lexicon import (
    COLOR_WORDS,
    LEXICON,
    OBJECT_WORDS,
    SPATIAL_WORDS,
    Lexicon,
)


@dataclass(frozen=True)
class ZeroShotSplit:
    kind: str  # "none" | "ZS1" | "ZS2"
    percent: float = 0.0
    seed: int = 0
    held_pairs: frozenset[frozenset[int]] = field(default_factory=frozenset)
    held_words: frozenset[int] = field(default_factory=frozenset)

    @property
    def empty(self) -> bool:
        return not self.held_pairs and not self.held_words

    def blocks(self, token_ids) -> bool:
        """True if the sentence contains a held-out word or word pair."""
        if self.held_words and any(t in self.held_words for t in token_ids):
            return True
        if self.held_pairs:
            content = LEXICON.content_ids(token_ids)
            for i, a in enumerate(content):
                for b in content[i + 1 :]:
                    if a != b and frozenset((a, b)) in self.held_pairs:
                        return True
        return False

    def touches(self, token_ids) -> bool:
        """True if the sentence exercises the holdout (zero-shot sentence)."""
        return self.blocks(token_ids)


NO_SPLIT = ZeroShotSplit(kind="none")


def enumerate_zs1_pairs(lexicon: Lexicon = LEXICON) -> list[frozenset[int]]:
    objs = [lexicon.id_of(w) for w in OBJECT_WORDS]
    spatials = [lexicon.id_of(w) for w in SPATIAL_WORDS]
    colors = [lexicon.id_of(w) for w in COLOR_WORDS]
    pairs: list[frozenset[int]] = []
    seen = set()

    def push(a, b):
        if a == b:
            return  # "orange" paired with itself has no two-word reading
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            pairs.append(key)

    for o in objs:
        for s in spatials:
            push(o, s)
    for o in objs:
        for c in colors:
            push(o, c)
    for i, o1 in enumerate(objs):
        for o2 in objs[i + 1 :]:
            push(o1, o2)
    return pairs


def make_split(
    kind: str,
    percent: float,
    seed: int,
    object_words: tuple[str, ...] | None = None,
    lexicon: Lexicon = LEXICON,
) -> ZeroShotSplit:
    """Draw a holdout: ceil(percent% of the candidate set), uniformly."""
    if not 0 <= percent < 100:
        raise ValueError(f"holdout percent {percent} outside [0,100)")
    if kind == "none" or percent == 0:
        return ZeroShotSplit(kind="none", percent=0.0, seed=seed)
    rng = np.random.default_rng(np.random.SeedSequence([seed, hash_kind(kind)]))
    if kind == "ZS1":
        pairs = enumerate_zs1_pairs(lexicon)
        n_hold = math.ceil(len(pairs) * percent / 100.0)
        idx = rng.choice(len(pairs), size=n_hold, replace=False)
        return ZeroShotSplit(
            kind="ZS1", percent=percent, seed=seed,
            held_pairs=frozenset(pairs[i] for i in idx),
        )
    if kind == "ZS2":
        words = object_words if object_words is not None else OBJECT_WORDS
        n_hold = math.ceil(len(words) * percent / 100.0)
        idx = rng.choice(len(words), size=n_hold, replace=False)
        return ZeroShotSplit(
            kind="ZS2", percent=percent, seed=seed,
            held_words=frozenset(lexicon.id_of(words[i]) for i in idx),
        )
    raise ValueError(f"unknown split kind {kind!r}")


def hash_kind(kind: str) -> int:
    return {"ZS1": 1, "ZS2": 2}.get(kind, 0)


def save_split(path, split: ZeroShotSplit, lexicon: Lexicon = LEXICON) -> None:
    payload = {
        "kind": split.kind,
        "percent": split.percent,
        "seed": split.seed,
        "held_pairs": sorted(sorted(lexicon.word_of(w) for w in p) for p in split.held_pairs),
        "held_words": sorted(lexicon.word_of(w) for w in split.held_words),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)


def load_split(path, lexicon: Lexicon = LEXICON) -> ZeroShotSplit:
    with open(path) as fh:
        payload = json.load(fh)
    return ZeroShotSplit(
        kind=payload["kind"],
        percent=payload["percent"],
        seed=payload["seed"],
        held_pairs=frozenset(
            frozenset(lexicon.id_of(w) for w in pair) for pair in payload["held_pairs"]
        ),
        held_words=frozenset(lexicon.id_of(w) for w in payload["held_words"]),
    )
