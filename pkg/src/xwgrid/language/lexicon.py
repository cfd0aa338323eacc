"""The teacher's vocabulary: 185 words with role tags and dense ids.

119 object words double as the world's object class names (class id = index
into OBJECT_WORDS).  "orange" is both an object and a color and carries a
single id with both roles, which is why 119+9+8+50 word slots fold into 185
distinct entries.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..world.palette import COLOR_NAMES

OBJECT_WORDS = (
    "apple", "armadillo", "artichoke", "avocado", "banana", "bat",
    "bathtub", "beans", "bear", "bed", "bee", "beet",
    "beetle", "bird", "blueberry", "bookshelf", "broccoli", "bull",
    "butterfly", "cabbage", "cactus", "camel", "carpet", "carrot",
    "cat", "centipede", "chair", "cherry", "circle", "clock",
    "coconut", "corn", "cow", "crab", "crocodile", "cucumber",
    "deer", "desk", "dinosaur", "dog", "donkey", "dragon",
    "dragonfly", "duck", "eggplant", "elephant", "fan", "fig",
    "fireplace", "fish", "fox", "frog", "garlic", "giraffe",
    "glove", "goat", "grape", "greenonion", "greenpepper", "hedgehog",
    "horse", "kangaroo", "knife", "koala", "ladybug", "lemon",
    "light", "lion", "lizard", "microwave", "mirror", "monitor",
    "monkey", "monster", "mushroom", "octopus", "onion", "orange",
    "ostrich", "owl", "panda", "peacock", "penguin", "pepper",
    "pig", "pineapple", "plunger", "potato", "pumpkin", "rabbit",
    "racoon", "rat", "rhinoceros", "rooster", "seahorse", "seashell",
    "seaurchin", "shrimp", "snail", "snake", "sofa", "spider",
    "square", "squirrel", "stairs", "star", "strawberry", "tiger",
    "toilet", "tomato", "triangle", "turtle", "vacuum", "wardrobe",
    "washingmachine", "watermelon", "whale", "wheat", "zebra",
)

SPATIAL_WORDS = (
    "between", "east", "north", "northeast", "northwest",
    "south", "southeast", "southwest", "west",
)

COLOR_WORDS = COLOR_NAMES  # blue, brown, gray, green, orange, purple, red, yellow

GRAMMATICAL_WORDS = (
    "?", ".", "and", "block", "by", "can", "color", "could", "destination",
    "direction", "does", "find", "go", "goal", "grid", "have", "identify",
    "in", "is", "locate", "located", "location", "me", "move", "name",
    "navigate", "near", "nothing", "object", "of", "on", "one", "please",
    "property", "reach", "say", "side", "target", "tell", "the", "thing",
    "three", "to", "two", "what", "where", "which", "will", "you", "your",
)

# north = row-1, east = col+1; the 8 direction words exclude "between"
DIRECTION_OFFSETS = {
    "north": (-1, 0),
    "south": (1, 0),
    "east": (0, 1),
    "west": (0, -1),
    "northeast": (-1, 1),
    "northwest": (-1, -1),
    "southeast": (1, 1),
    "southwest": (1, -1),
}
DIRECTION_WORDS = tuple(sorted(DIRECTION_OFFSETS))


class LexiconError(KeyError):
    pass


@dataclass
class Lexicon:
    words: tuple[str, ...]
    roles: dict[str, frozenset[str]]
    ids: dict[str, int] = field(init=False)

    def __post_init__(self):
        self.ids = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def id_of(self, word: str) -> int:
        try:
            return self.ids[word]
        except KeyError:
            raise LexiconError(f"unknown token {word!r}") from None

    def word_of(self, wid: int) -> str:
        return self.words[wid]

    def roles_of(self, word: str) -> frozenset[str]:
        return self.roles[word]

    def has_role(self, wid: int, role: str) -> bool:
        return role in self.roles[self.words[wid]]

    def object_id(self, class_id: int) -> int:
        return self.id_of(OBJECT_WORDS[class_id])

    def class_of_word(self, wid: int) -> int:
        return OBJECT_WORDS.index(self.words[wid])

    def color_word_id(self, color_id: int) -> int:
        return self.id_of(COLOR_WORDS[color_id])

    def tokenize(self, text: str) -> list[int]:
        """Lowercase, whitespace split, '?' and '.' as standalone tokens."""
        pieces = re.findall(r"[?.]|[^\s?.]+", text.lower())
        return [self.id_of(p) for p in pieces]

    def detokenize(self, ids) -> str:
        return " ".join(self.words[i] for i in ids)

    def content_ids(self, ids) -> list[int]:
        return [i for i in ids if self.roles[self.words[i]] & {"object", "color", "spatial"}]

    def answer_slots(self) -> list[tuple[int, str]]:
        """The 136 (word id, role) answer slots: objects, directions, colors, nothing."""
        slots = [(self.id_of(w), "object") for w in OBJECT_WORDS]
        slots += [(self.id_of(w), "spatial") for w in SPATIAL_WORDS if w != "between"]
        slots += [(self.id_of(w), "color") for w in COLOR_WORDS]
        slots.append((self.id_of("nothing"), "grammatical"))
        return slots

    def answer_word_ids(self) -> list[int]:
        seen: dict[int, None] = {}
        for wid, _ in self.answer_slots():
            seen.setdefault(wid)
        return list(seen)

    def analysis_group_ids(self) -> list[int]:
        """Distinct content-word answers (the distance-matrix grouping): 134 ids."""
        nothing = self.id_of("nothing")
        return [wid for wid in self.answer_word_ids() if wid != nothing]


def build_lexicon() -> Lexicon:
    words: list[str] = []
    roles: dict[str, set[str]] = {}
    for group, role in (
        (OBJECT_WORDS, "object"),
        (SPATIAL_WORDS, "spatial"),
        (COLOR_WORDS, "color"),
        (GRAMMATICAL_WORDS, "grammatical"),
    ):
        for w in group:
            if w not in roles:
                words.append(w)
                roles[w] = set()
            roles[w].add(role)
    return Lexicon(words=tuple(words), roles={w: frozenset(r) for w, r in roles.items()})


LEXICON = build_lexicon()
