"""Sentence types and their non-recursive templates.

Slots: {OBJ} {OBJ2} object words, {COLOR} color words, {DIR} one of the 8
direction words.  Template lengths (slots count as one token) span 2..13.
"""

from __future__ import annotations

from .lexicon import LEXICON, LexiconError

NAV_TYPES = ("nav_obj", "nav_col_obj", "nav_nr_obj", "nav_bw_obj")
QA_TYPES = (
    "rec_col2obj",
    "rec_obj2col",
    "rec_loc2obj",
    "rec_obj2loc",
    "rec_loc2col",
    "rec_col2loc",
    "rec_loc_obj2obj",
    "rec_loc_obj2col",
    "rec_col_obj2loc",
    "rec_bw_obj2obj",
    "rec_bw_obj2loc",
    "rec_bw_obj2col",
)
ALL_TYPES = NAV_TYPES + QA_TYPES

SLOTS = ("{OBJ}", "{OBJ2}", "{COLOR}", "{DIR}")

TEMPLATES: dict[str, tuple[tuple[str, ...], ...]] = {
    "nav_obj": (
        ("{OBJ}", "."),
        ("go", "to", "the", "{OBJ}", "."),
        ("please", "go", "to", "the", "{OBJ}", "."),
        ("reach", "the", "{OBJ}", "."),
        ("{OBJ}", "is", "your", "target", "."),
        ("could", "you", "please", "go", "to", "the", "{OBJ}", "?"),
    ),
    "nav_col_obj": (
        ("go", "to", "the", "{COLOR}", "{OBJ}", "."),
        ("find", "the", "{COLOR}", "{OBJ}", "."),
        ("please", "reach", "the", "{COLOR}", "{OBJ}", "."),
        ("the", "{COLOR}", "{OBJ}", "is", "your", "destination", "."),
        ("could", "you", "please", "move", "to", "the", "{COLOR}", "{OBJ}", "?"),
    ),
    "nav_nr_obj": (
        ("go", "{DIR}", "of", "the", "{OBJ}", "."),
        ("reach", "the", "{DIR}", "of", "the", "{OBJ}", "."),
        ("go", "to", "the", "{DIR}", "of", "the", "{OBJ}", "."),
        ("the", "{DIR}", "of", "the", "{OBJ}", "is", "your", "destination", "."),
        ("please", "move", "to", "the", "{DIR}", "side", "of", "the", "{OBJ}", "."),
    ),
    "nav_bw_obj": (
        ("move", "between", "{OBJ}", "and", "{OBJ2}", "."),
        ("go", "to", "the", "grid", "between", "{OBJ}", "and", "{OBJ2}", "."),
        ("navigate", "to", "the", "grid", "between", "{OBJ}", "and", "{OBJ2}", "please", "."),
        ("please", "navigate", "to", "the", "grid", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "."),
        ("will", "you", "move", "to", "the", "block", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "?"),
    ),
    "rec_col2obj": (
        ("what", "is", "the", "{COLOR}", "object", "?"),
        ("which", "object", "is", "{COLOR}", "?"),
        ("identify", "the", "{COLOR}", "object", "."),
        ("tell", "the", "name", "of", "the", "{COLOR}", "object", "."),
        ("say", "the", "name", "of", "the", "{COLOR}", "thing", "."),
    ),
    "rec_obj2col": (
        ("what", "is", "the", "color", "of", "the", "{OBJ}", "?"),
        ("what", "color", "does", "the", "{OBJ}", "have", "?"),
        ("tell", "the", "color", "of", "the", "{OBJ}", "."),
        ("identify", "the", "color", "of", "the", "{OBJ}", "."),
        ("say", "the", "color", "of", "the", "{OBJ}", "please", "."),
    ),
    "rec_loc2obj": (
        ("what", "is", "in", "the", "{DIR}", "?"),
        ("what", "object", "is", "in", "the", "{DIR}", "?"),
        ("identify", "the", "object", "in", "the", "{DIR}", "."),
        ("name", "the", "thing", "in", "the", "{DIR}", "."),
        ("please", "tell", "the", "name", "of", "the", "object", "in", "the", "{DIR}", "."),
    ),
    "rec_obj2loc": (
        ("where", "is", "the", "{OBJ}", "?"),
        ("where", "is", "the", "{OBJ}", "located", "?"),
        ("which", "direction", "is", "the", "{OBJ}", "?"),
        ("what", "is", "the", "location", "of", "the", "{OBJ}", "?"),
        ("tell", "the", "location", "of", "the", "{OBJ}", "."),
    ),
    "rec_loc2col": (
        ("what", "color", "does", "the", "object", "in", "the", "{DIR}", "have", "?"),
        ("what", "is", "the", "color", "of", "the", "object", "in", "the", "{DIR}", "?"),
        ("tell", "the", "color", "of", "the", "thing", "in", "the", "{DIR}", "."),
        ("identify", "the", "color", "of", "the", "object", "in", "the", "{DIR}", "."),
    ),
    "rec_col2loc": (
        ("where", "is", "the", "{COLOR}", "object", "located", "?"),
        ("where", "is", "the", "{COLOR}", "thing", "?"),
        ("what", "is", "the", "location", "of", "the", "{COLOR}", "object", "?"),
        ("tell", "the", "location", "of", "the", "{COLOR}", "object", "."),
    ),
    "rec_loc_obj2obj": (
        ("what", "is", "{DIR}", "of", "the", "{OBJ}", "?"),
        ("what", "is", "in", "the", "{DIR}", "of", "the", "{OBJ}", "?"),
        ("name", "the", "object", "in", "the", "{DIR}", "of", "the", "{OBJ}", "."),
        ("identify", "the", "object", "which", "is", "in", "the", "{DIR}", "of", "the", "{OBJ}", "."),
    ),
    "rec_loc_obj2col": (
        ("what", "is", "the", "color", "of", "the", "{DIR}", "to", "the", "{OBJ}", "?"),
        ("what", "color", "does", "the", "object", "in", "the", "{DIR}", "of", "the", "{OBJ}", "have", "?"),
        ("tell", "the", "color", "of", "the", "object", "in", "the", "{DIR}", "of", "the", "{OBJ}", "."),
        ("identify", "the", "color", "of", "the", "thing", "in", "the", "{DIR}", "of", "the", "{OBJ}", "."),
    ),
    "rec_col_obj2loc": (
        ("where", "is", "the", "{COLOR}", "{OBJ}", "?"),
        ("where", "is", "the", "{COLOR}", "{OBJ}", "located", "?"),
        ("what", "is", "the", "location", "of", "the", "{COLOR}", "{OBJ}", "?"),
        ("tell", "the", "location", "of", "the", "{COLOR}", "{OBJ}", "."),
    ),
    "rec_bw_obj2obj": (
        ("what", "is", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "?"),
        ("what", "is", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "?"),
        ("name", "the", "thing", "between", "{OBJ}", "and", "{OBJ2}", "."),
        ("identify", "the", "object", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "."),
    ),
    "rec_bw_obj2loc": (
        ("where", "is", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "?"),
        ("where", "is", "the", "block", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "located", "?"),
        ("tell", "the", "location", "of", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "."),
        ("what", "is", "the", "location", "of", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "?"),
    ),
    "rec_bw_obj2col": (
        ("what", "is", "the", "color", "of", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "?"),
        ("what", "color", "does", "the", "object", "between", "{OBJ}", "and", "{OBJ2}", "have", "?"),
        ("tell", "the", "color", "of", "the", "thing", "between", "{OBJ}", "and", "{OBJ2}", "."),
        ("identify", "the", "color", "of", "the", "object", "between", "the", "{OBJ}", "and", "the", "{OBJ2}", "."),
    ),
}

MIN_LEN, MAX_LEN = 2, 13


def template_length(template: tuple[str, ...]) -> int:
    return len(template)


def instantiate(template: tuple[str, ...], binding: dict[str, str]) -> list[str]:
    return [binding.get(tok, tok) for tok in template]


def validate_templates() -> None:
    """Every template word must be in the lexicon and lengths within [2,13]."""
    for type_id, templates in TEMPLATES.items():
        if not templates:
            raise ValueError(f"{type_id} has no templates")
        for tpl in templates:
            n = template_length(tpl)
            if not MIN_LEN <= n <= MAX_LEN:
                raise ValueError(f"{type_id} template {tpl} has length {n}")
            for tok in tpl:
                if tok in SLOTS:
                    continue
                try:
                    LEXICON.id_of(tok)
                except LexiconError:
                    raise ValueError(f"{type_id} template uses non-lexicon word {tok!r}") from None


validate_templates()
